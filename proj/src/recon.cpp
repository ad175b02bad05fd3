#include "thermotomo/recon.hpp"

#include <cmath>
#include <limits>
#include <random>
#include <string>

#include "thermotomo/errors.hpp"

namespace thermotomo {

void validate(const ReconConfig& cfg, const Medium& m) {
    require_same_grid(cfg.omega.grid(), m.grid(), "recon config");
    require_same_grid(cfg.kset.grid(), m.grid(), "recon config");
    if (cfg.omega.kind() != Region::Kind::rectangle) throw ConfigError("omega must be a rectangle");
    if (!(cfg.T > 0.0)) throw ConfigError("T must be positive");
    if (cfg.m_max < 1) throw ConfigError("m_max must be at least 1");
    if (!(cfg.tol_rel >= 0.0)) throw ConfigError("tol_rel must be nonnegative");
    const Grid& g = m.grid();
    auto check = [&](std::size_t k) {
        if (!cfg.omega.is_interior(k)) throw ConfigError("kset must lie strictly inside omega");
        if (m.distance_to_interfaces(g.x(g.col(k)), g.y(g.row(k))) < 2.0 * g.h) {
            throw ConfigError("kset must stay at least 2h away from every interface");
        }
    };
    for (std::size_t k : cfg.kset.interior()) check(k);
    for (std::size_t k : cfg.kset.boundary()) check(k);
}

double hd_norm(const ScalarField& f, const Region& kset) { return std::sqrt(dirichlet_energy(f, kset)); }

BoundaryTrace measure(const ScalarField& f1, const Medium& m, const ReconConfig& cfg) {
    WaveState f(f1, ScalarField(f1.grid()));
    return forward(f, m, cfg.omega, cfg.T, cfg.solver);
}

TimeReversal time_reverse_detailed(const BoundaryTrace& h, const Medium& m, const ReconConfig& cfg) {
    const auto final_row = h.snapshot(h.n_times - 1);
    ScalarField phi = harmonic_extension({final_row.begin(), final_row.end()}, cfg.omega, cfg.harmonic_tol);
    WaveState cauchy(phi, ScalarField(phi.grid()));
    WaveState v = solve_backward(h, cauchy, m, cfg.omega, cfg.solver);
    return {std::move(v), std::move(phi)};
}

WaveState time_reverse(const BoundaryTrace& h, const Medium& m, const ReconConfig& cfg) {
    return time_reverse_detailed(h, m, cfg).result;
}

ScalarField project_to_kset(const ScalarField& f, const ReconConfig& cfg) {
    return project_hd(f, cfg.kset, cfg.harmonic_tol);
}

ScalarField pseudo_inverse_step(const BoundaryTrace& h, const Medium& m, const ReconConfig& cfg) {
    return project_to_kset(time_reverse(h, m, cfg).u, cfg);
}

ScalarField apply_error_operator(const ScalarField& f1, const Medium& m, const ReconConfig& cfg) {
    ScalarField out = f1;
    out -= pseudo_inverse_step(measure(f1, m, cfg), m, cfg);
    return out;
}

std::pair<ScalarField, ReconReport> neumann_series(const BoundaryTrace& h, const Medium& m, const ReconConfig& cfg,
                                                   const ScalarField* truth, const TermObserver& on_term) {
    validate(cfg, m);
    const Region& K = cfg.kset;
    const double nan = std::numeric_limits<double>::quiet_NaN();
    double truth_hd = nan, truth_l2 = nan;
    if (truth != nullptr) {
        require_same_grid(truth->grid(), m.grid(), "neumann_series truth");
        truth_hd = hd_norm(*truth, K);
        truth_l2 = l2_norm(*truth, K);
    }
    ReconReport report;
    auto record = [&](std::size_t k, const ScalarField& f, double update) {
        TermRecord t{k, update, nan, nan};
        if (truth != nullptr) {
            const ScalarField diff = f - *truth;
            t.err_hd = truth_hd > 0.0 ? hd_norm(diff, K) / truth_hd : hd_norm(diff, K);
            t.err_l2 = truth_l2 > 0.0 ? l2_norm(diff, K) / truth_l2 : l2_norm(diff, K);
        }
        report.terms.push_back(t);
        if (on_term) on_term(k, f);
    };

    ScalarField f = pseudo_inverse_step(h, m, cfg);
    double norm_f = hd_norm(f, K);
    record(0, f, norm_f);
    if (norm_f == 0.0) {
        report.converged = true;
        return {std::move(f), report};
    }
    std::size_t growth = 0;
    for (std::size_t k = 1; k < cfg.m_max; ++k) {
        BoundaryTrace residual = h;
        residual -= measure(f, m, cfg);
        const ScalarField update = pseudo_inverse_step(residual, m, cfg);
        f += update;
        norm_f = hd_norm(f, K);
        const double un = hd_norm(update, K);
        const double prev = report.terms.back().update_norm;
        record(k, f, un);
        growth = un > prev ? growth + 1 : 0;
        if (growth >= 3) report.non_contraction_warning = true;
        if (prev > 0.0) report.mu_hat = un / prev;
        if (un <= cfg.tol_rel * norm_f) {
            report.converged = true;
            break;
        }
    }
    return {std::move(f), report};
}

namespace {

// Separable binomial low-pass over the kset interior; response
// cos^2(kx h / 2) cos^2(ky h / 2) per pass, so kh = pi content is removed.
ScalarField lowpass_in_kset(const ScalarField& f, const Region& K, std::size_t passes) {
    const std::size_t nx = f.grid().nx;
    ScalarField cur = f;
    for (std::size_t p = 0; p < passes; ++p) {
        for (std::size_t stride : {std::size_t{1}, nx}) {
            ScalarField next(f.grid());
            for (std::size_t k : K.interior()) next[k] = 0.5 * cur[k] + 0.25 * (cur[k - stride] + cur[k + stride]);
            cur = std::move(next);
        }
    }
    return cur;
}

}  // namespace

ScalarField random_kset_field(const ReconConfig& cfg, std::uint64_t seed) {
    const Region& K = cfg.kset;
    const Grid& g = K.grid();
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unif(-1.0, 1.0);
    ScalarField f(g);
    for (std::size_t k : K.interior()) f[k] = unif(rng);
    // a few averaging sweeps keep the seed resolved on the grid
    const std::size_t nx = g.nx;
    for (int pass = 0; pass < 6; ++pass) {
        ScalarField s(g);
        for (std::size_t k : K.interior()) {
            s[k] = 0.5 * f[k] + 0.125 * (f[k - 1] + f[k + 1] + f[k - nx] + f[k + nx]);
        }
        f = std::move(s);
    }
    return project_to_kset(f, cfg);
}

double estimate_contraction_from(const ScalarField& start, const Medium& m, const ReconConfig& cfg,
                                 std::size_t n_power_iters, std::vector<double>* history) {
    if (n_power_iters < 1) throw ConfigError("power iteration needs at least one step");
    validate(cfg, m);
    ScalarField f = project_to_kset(start, cfg);
    double norm = hd_norm(f, cfg.kset);
    if (norm == 0.0) throw DegenerateError("power iteration seed has zero H_D norm");
    f *= 1.0 / norm;
    double ratio = 0.0;
    for (std::size_t it = 0; it < n_power_iters; ++it) {
        const ScalarField kf = apply_error_operator(f, m, cfg);
        ratio = hd_norm(kf, cfg.kset);
        if (ratio == 0.0) throw DegenerateError("power iterate vanished at step " + std::to_string(it + 1));
        if (history != nullptr) history->push_back(ratio);
        // grid-scale modes have near-zero group velocity on the lattice and
        // never leave omega; keep the iterate in the resolved band
        f = project_to_kset(lowpass_in_kset(kf, cfg.kset, cfg.power_filter_passes), cfg);
        const double norm_f = hd_norm(f, cfg.kset);
        if (norm_f == 0.0) throw DegenerateError("filtered power iterate vanished at step " + std::to_string(it + 1));
        f *= 1.0 / norm_f;
    }
    return ratio;
}

double estimate_contraction(const Medium& m, const ReconConfig& cfg, std::size_t n_power_iters, std::uint64_t seed,
                            std::vector<double>* history) {
    if (n_power_iters < 5) throw ConfigError("estimate_contraction needs at least 5 power iterations");
    return estimate_contraction_from(random_kset_field(cfg, seed), m, cfg, n_power_iters, history);
}

double energy_decay_ratio(const ScalarField& f1, const Medium& m, const ReconConfig& cfg) {
    WaveState f(f1, ScalarField(f1.grid()));
    const double e0 = energy(f, cfg.omega, m);
    if (e0 == 0.0) throw DegenerateError("energy_decay_ratio: initial energy is zero");
    const Simulation sim = simulate(f, m, cfg.omega, cfg.T, cfg.solver);
    return energy(sim.final_state, cfg.omega, m) / e0;
}

}  // namespace thermotomo
