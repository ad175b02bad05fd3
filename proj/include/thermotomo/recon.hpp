#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <utility>
#include <vector>

#include "thermotomo/field_ops.hpp"
#include "thermotomo/grid.hpp"
#include "thermotomo/medium.hpp"
#include "thermotomo/wave_solver.hpp"

namespace thermotomo {

struct ReconConfig {
    Region omega;  // measurement rectangle
    Region kset;   // reconstruction support, inside omega and away from interfaces
    double T = 1.0;
    std::size_t m_max = 8;
    double tol_rel = 1e-4;
    double harmonic_tol = kDefaultHarmonicTol;
    SolverConfig solver;
    /// Low-pass passes applied to each power iterate (0 disables the filter).
    std::size_t power_filter_passes = 1;
};

/// Throws ConfigError unless kset lies in omega's interior, every kset node is
/// at least 2h from each interface, T > 0 and m_max >= 1.
void validate(const ReconConfig& cfg, const Medium& m);

struct TermRecord {
    std::size_t term = 0;
    double update_norm = 0.0;  // H_D norm of f(k) - f(k-1); of f(0) for k = 0
    double err_hd = 0.0;       // relative H_D(kset) error vs truth (NaN without truth)
    double err_l2 = 0.0;       // relative L2(kset) error vs truth (NaN without truth)
};

struct ReconReport {
    std::vector<TermRecord> terms;
    double mu_hat = 0.0;  // ratio of the last two update norms
    bool converged = false;
    bool non_contraction_warning = false;
};

/// H_D(kset) norm, i.e. sqrt(dirichlet_energy(f, kset)).
double hd_norm(const ScalarField& f, const Region& kset);

/// Lambda_1: boundary trace of the solution with initial data [f1, 0].
BoundaryTrace measure(const ScalarField& f1, const Medium& m, const ReconConfig& cfg);

/// Time reversal with the energy-minimizing Cauchy data at T.
struct TimeReversal {
    WaveState result;     // [A1 h, A2 h]
    ScalarField cauchy_u; // harmonic extension of h(T) into omega
};
TimeReversal time_reverse_detailed(const BoundaryTrace& h, const Medium& m, const ReconConfig& cfg);
WaveState time_reverse(const BoundaryTrace& h, const Medium& m, const ReconConfig& cfg);

/// Dirichlet projection onto H_D(kset): restrict, subtract the harmonic
/// extension of the kset boundary trace, zero outside kset.
ScalarField project_to_kset(const ScalarField& f, const ReconConfig& cfg);

/// Projection of A1 h onto H_D(kset).
ScalarField pseudo_inverse_step(const BoundaryTrace& h, const Medium& m, const ReconConfig& cfg);

/// K f1 = f1 - pseudo_inverse_step(Lambda_1 f1).
ScalarField apply_error_operator(const ScalarField& f1, const Medium& m, const ReconConfig& cfg);

/// Residual-update form of the Neumann series: f(0) = P h,
/// f(k+1) = f(k) + P (h - Lambda_1 f(k)). `on_term` sees every partial sum.
using TermObserver = std::function<void(std::size_t term, const ScalarField& partial_sum)>;
std::pair<ScalarField, ReconReport> neumann_series(const BoundaryTrace& h, const Medium& m, const ReconConfig& cfg,
                                                   const ScalarField* truth = nullptr,
                                                   const TermObserver& on_term = {});

/// Seeded random smooth field with zero trace on kset.
ScalarField random_kset_field(const ReconConfig& cfg, std::uint64_t seed);

/// Power iteration on K in the H_D(kset) norm starting from `start`; returns
/// the final ratio |K f| / |f|. Throws DegenerateError on a zero iterate.
/// `history`, when given, receives the ratio of every iteration.
double estimate_contraction_from(const ScalarField& start, const Medium& m, const ReconConfig& cfg,
                                 std::size_t n_power_iters, std::vector<double>* history = nullptr);
double estimate_contraction(const Medium& m, const ReconConfig& cfg, std::size_t n_power_iters, std::uint64_t seed,
                            std::vector<double>* history = nullptr);

/// E_omega([u(T), u_t(T)]) / E_omega([f1, 0]).
double energy_decay_ratio(const ScalarField& f1, const Medium& m, const ReconConfig& cfg);

}  // namespace thermotomo
