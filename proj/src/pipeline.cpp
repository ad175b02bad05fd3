#include "thermotomo/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>
#include <string>

#include "thermotomo/errors.hpp"
#include "thermotomo/io.hpp"

namespace thermotomo {

namespace {

std::string num(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::filesystem::path out_path(const RunConfig& cfg, const std::string& name) {
    std::filesystem::create_directories(cfg.output_dir);
    return cfg.output_dir / name;
}

void maybe_pgm(const RunConfig& cfg, const ScalarField& f, const std::string& name, std::ostream& log) {
    if (!cfg.pgm) return;
    const auto [lo, hi] = std::minmax_element(f.values().begin(), f.values().end());
    if (*lo == *hi) {
        log << "skipping " << name << ": field is constant\n";
        return;
    }
    io::emit_pgm(f, out_path(cfg, name));
}

// detectors along x, time along y
ScalarField trace_image(const BoundaryTrace& t) {
    const Grid g(std::max<std::size_t>(t.n_det(), 3), std::max<std::size_t>(t.n_times, 3), 1.0);
    ScalarField img(g);
    for (std::size_t n = 0; n < t.n_times; ++n) {
        for (std::size_t d = 0; d < t.n_det(); ++d) img.at(d, n) = t.at(n, d);
    }
    return img;
}

}  // namespace

std::string format_report_csv(const ReconReport& report) {
    std::string out = "term,update_norm,err_HD,err_L2\n";
    for (const auto& t : report.terms) {
        out += std::to_string(t.term) + "," + num(t.update_norm) + "," + num(t.err_hd) + "," + num(t.err_l2) + "\n";
    }
    return out;
}

ForwardRun run_forward(const RunConfig& cfg, std::ostream& log) {
    const Problem p = build_problem(cfg);
    ScalarField phantom = build_phantom(cfg, p);
    log << "forward: box " << p.box.nx << "x" << p.box.ny << ", T = " << cfg.T << "\n";
    BoundaryTrace trace = measure(phantom, p.medium, p.recon);
    log << "forward: " << trace.n_times << " time samples at " << trace.n_det() << " detectors\n";
    io::write_grid(out_path(cfg, "phantom.tawg"), phantom);
    io::write_trace(out_path(cfg, "trace.taws"), trace);
    maybe_pgm(cfg, phantom, "phantom.pgm", log);
    maybe_pgm(cfg, trace_image(trace), "trace.pgm", log);
    return {std::move(phantom), std::move(trace)};
}

ReconstructRun run_reconstruct(const RunConfig& cfg, const BoundaryTrace& trace, const ScalarField* truth,
                               std::ostream& log) {
    const Problem p = build_problem(cfg);
    BoundaryTrace h = trace;
    h.bind(p.box);
    const BoundaryTrace expected = BoundaryTrace::on_region(p.recon.omega, h.dt, h.n_times);
    if (expected.nodes != h.nodes) throw ConfigError("trace detectors do not match the boundary of omega");

    const TermObserver on_term = [&](std::size_t k, const ScalarField& f) {
        log << "reconstruct: term " << k << " done\n";
        char name[32];
        std::snprintf(name, sizeof name, "term_%02zu.pgm", k);
        maybe_pgm(cfg, f, name, log);
    };
    auto [result, report] = neumann_series(h, p.medium, p.recon, truth, on_term);
    if (report.non_contraction_warning) {
        log << "warning: update norms grew for three consecutive terms; the series may not converge\n";
    }
    io::write_file_atomic(out_path(cfg, "report.csv"), format_report_csv(report));
    io::write_grid(out_path(cfg, "recon.tawg"), result);
    return {std::move(result), std::move(report)};
}

ReconstructRun run_reconstruct(const RunConfig& cfg, const std::optional<std::filesystem::path>& trace_path,
                               std::ostream& log) {
    const auto path = trace_path.value_or(cfg.output_dir / "trace.taws");
    return run_reconstruct(cfg, io::read_trace(path), nullptr, log);
}

ReconstructRun run_roundtrip(const RunConfig& cfg, std::ostream& log) {
    const ForwardRun fwd = run_forward(cfg, log);
    return run_reconstruct(cfg, fwd.trace, &fwd.phantom, log);
}

RaytraceRun run_raytrace(const RunConfig& cfg, std::ostream& log) {
    const Problem p = build_problem(cfg);
    const RayCaps caps{cfg.max_depth, cfg.min_weight};
    RayBranchGraph graph =
        trace_branches({cfg.ray_x, cfg.ray_y}, {cfg.ray_dx, cfg.ray_dy}, p.medium, p.recon.omega, cfg.T, caps);
    VisibilityReport vis =
        check_visibility(p.recon.kset, p.medium, p.recon.omega, cfg.T, VisibilitySampling{cfg.n_pos, cfg.n_dir, caps});
    std::ostringstream g, v;
    graph.write(g);
    vis.write_csv(v);
    io::write_file_atomic(out_path(cfg, "branches.txt"), g.str());
    io::write_file_atomic(out_path(cfg, "visibility.csv"), v.str());
    log << "raytrace: " << graph.events.size() << " events, " << vis.uncovered.size() << " of "
        << vis.samples.size() << " samples uncovered, smallest transmitted fraction "
        << vis.min_transmitted_fraction << "\n";
    return {std::move(graph), std::move(vis)};
}

KnormRun run_knorm(const RunConfig& cfg, std::ostream& log) {
    const Problem p = build_problem(cfg);
    KnormRun run;
    run.mu_hat = estimate_contraction(p.medium, p.recon, cfg.power_iters, cfg.seed, &run.history);
    std::string csv = "iteration,ratio\n";
    for (std::size_t k = 0; k < run.history.size(); ++k) csv += std::to_string(k + 1) + "," + num(run.history[k]) + "\n";
    io::write_file_atomic(out_path(cfg, "knorm.csv"), csv);
    log << "knorm: " << run.history.size() << " power iterations\n";
    return run;
}

double run_energy(const RunConfig& cfg, std::ostream& log) {
    const Problem p = build_problem(cfg);
    const ScalarField f = build_phantom(cfg, p);
    log << "energy: box " << p.box.nx << "x" << p.box.ny << ", T = " << cfg.T << "\n";
    return energy_decay_ratio(f, p.medium, p.recon);
}

}  // namespace thermotomo
