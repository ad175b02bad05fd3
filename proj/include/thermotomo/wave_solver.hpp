#pragma once

#include <array>
#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "thermotomo/grid.hpp"
#include "thermotomo/medium.hpp"

namespace thermotomo {

struct SolverConfig {
    /// Courant number used to derive the time step when dt == 0.
    double cfl = 0.4;
    /// Fixed time step; 0 selects cfl_dt(medium, cfl) shrunk to divide T evenly.
    double dt = 0.0;
    /// Cosine-ramp damping layer along the box edge.
    bool sponge = false;
    std::size_t sponge_width = 20;
    /// Peak damping rate of the sponge (per unit time).
    double sponge_strength = 30.0;
    /// Called after every completed step with (step, n_steps).
    std::function<void(std::size_t, std::size_t)> on_step;
};

/// u(t, x_det) on the detector nodes, time-major. Times are k * dt for
/// k = 0 .. n_times - 1.
struct BoundaryTrace {
    double dt = 0.0;
    std::size_t n_times = 0;
    std::vector<std::array<double, 2>> points;
    /// Grid node of each detector; rebuilt by bind() after reading a file.
    std::vector<std::size_t> nodes;
    std::vector<double> values;

    std::size_t n_det() const noexcept { return points.size(); }
    double final_time() const noexcept { return dt * static_cast<double>(n_times == 0 ? 0 : n_times - 1); }
    double at(std::size_t t, std::size_t det) const noexcept { return values[t * n_det() + det]; }
    double& at(std::size_t t, std::size_t det) noexcept { return values[t * n_det() + det]; }
    std::span<const double> snapshot(std::size_t t) const noexcept { return {values.data() + t * n_det(), n_det()}; }

    /// Empty trace for the boundary nodes of `omega`.
    static BoundaryTrace on_region(const Region& omega, double dt, std::size_t n_times);
    /// Resolves detector coordinates to nodes of g (ConfigError if any point
    /// is more than 1e-6 h away from a node).
    void bind(const Grid& g);

    BoundaryTrace& operator-=(const BoundaryTrace& other);
};

/// Forward run: the trace plus the Cauchy data [u(T), u_t(T)] on the whole box.
struct Simulation {
    BoundaryTrace trace;
    WaveState final_state;
};

using StepObserver = std::function<void(std::size_t step, const ScalarField& u)>;

/// cfl * h / (c_max * sqrt 2).
double cfl_dt(const Medium& m, double cfl);

/// Number of steps and the adjusted time step covering [0, T] exactly.
struct TimeGrid {
    double dt;
    std::size_t n_steps;
};
TimeGrid time_grid(const Medium& m, double T, const SolverConfig& cfg);

/// One leapfrog step: 2 curr - prev + dt^2 c^2 L5(curr), outer ring held at 0.
/// Throws InstabilityError(step_index) on a non-finite result.
ScalarField step(const ScalarField& prev, const ScalarField& curr, const Medium& m, double dt,
                 std::size_t step_index = 0);

/// Free evolution on the whole box (homogeneous Dirichlet on its edge) for
/// n_steps steps of size dt; the observer sees u at every level including 0.
/// Returns [u, u_t] at the final level (u_t by central difference).
WaveState evolve(const WaveState& f, const Medium& m, double dt, std::size_t n_steps, const SolverConfig& cfg = {},
                 const StepObserver& observer = {});

/// Distance c_max * T from omega to the box edge: nothing launched inside
/// omega reaches the edge before T, so the Dirichlet box acts as free space.
double required_box_margin(double T, double c_max) noexcept;

/// Runs the wave equation from f and records u on the boundary nodes of the
/// rectangle omega at every step. f must vanish outside omega's interior.
Simulation simulate(const WaveState& f, const Medium& m, const Region& omega, double T, const SolverConfig& cfg = {},
                    const StepObserver& observer = {});

/// Boundary measurement operator: simulate(...).trace.
BoundaryTrace forward(const WaveState& f, const Medium& m, const Region& omega, double T,
                      const SolverConfig& cfg = {});

/// Mixed problem in [0, T] x omega solved backwards from t = T with Cauchy
/// data cauchy_at_T and the boundary nodes pinned to the trace. Returns
/// [v(0), v_t(0)] on omega (zero outside).
WaveState solve_backward(const BoundaryTrace& boundary, const WaveState& cauchy_at_T, const Medium& m,
                         const Region& omega, const SolverConfig& cfg = {});

/// Outward unit offset (di, dj) of each boundary node of the rectangle omega;
/// corners use the left/right side normal.
std::vector<std::array<int, 2>> outward_offsets(const Region& omega);

/// Exterior mixed problem with unit speed, zero initial data and Dirichlet
/// data `boundary` on the boundary of omega. Returns, per step and detector,
/// the one-sided outward difference quotient (w(p + h nu) - w(p)) / h.
BoundaryTrace exterior_neumann(const BoundaryTrace& boundary, const Medium& m, const Region& omega,
                               const SolverConfig& cfg = {}, const StepObserver& observer = {});

}  // namespace thermotomo
