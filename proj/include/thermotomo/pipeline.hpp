#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <ostream>
#include <vector>

#include "thermotomo/config.hpp"
#include "thermotomo/rays.hpp"
#include "thermotomo/recon.hpp"
#include "thermotomo/wave_solver.hpp"

namespace thermotomo {

/// Subcommand bodies shared by the CLI and the acceptance suite. Each writes
/// its artifacts into cfg.output_dir (created on demand) and logs one-line
/// progress notes to `log`.

struct ForwardRun {
    ScalarField phantom;
    BoundaryTrace trace;
};
/// phantom.tawg, trace.taws, and phantom.pgm / trace.pgm when cfg.pgm is set.
ForwardRun run_forward(const RunConfig& cfg, std::ostream& log);

struct ReconstructRun {
    ScalarField result;
    ReconReport report;
};
/// report.csv, recon.tawg, and term_NN.pgm per partial sum when cfg.pgm is set.
ReconstructRun run_reconstruct(const RunConfig& cfg, const BoundaryTrace& trace, const ScalarField* truth,
                               std::ostream& log);
/// Reads the trace from `trace_path` (default: output_dir/trace.taws).
ReconstructRun run_reconstruct(const RunConfig& cfg, const std::optional<std::filesystem::path>& trace_path,
                               std::ostream& log);

/// Forward then reconstruct against the phantom as truth.
ReconstructRun run_roundtrip(const RunConfig& cfg, std::ostream& log);

struct RaytraceRun {
    RayBranchGraph graph;
    VisibilityReport visibility;
};
/// branches.txt for the ray (ray.x, ray.y, ray.dx, ray.dy) and visibility.csv.
RaytraceRun run_raytrace(const RunConfig& cfg, std::ostream& log);

struct KnormRun {
    double mu_hat = 0.0;
    std::vector<double> history;
};
/// knorm.csv with the ratio of every power iteration.
KnormRun run_knorm(const RunConfig& cfg, std::ostream& log);

/// Energy decay ratio of the configured phantom.
double run_energy(const RunConfig& cfg, std::ostream& log);

/// report.csv body: term,update_norm,err_HD,err_L2.
std::string format_report_csv(const ReconReport& report);

}  // namespace thermotomo
