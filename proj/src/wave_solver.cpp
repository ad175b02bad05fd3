#include "thermotomo/wave_solver.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "thermotomo/errors.hpp"
#include "thermotomo/field_ops.hpp"
#include "thermotomo/kernels.hpp"

namespace thermotomo {

namespace {

std::vector<double> leapfrog_coef(const Medium& m, double dt) {
    const double s = dt * dt / (m.grid().h * m.grid().h);
    std::vector<double> coef(m.c_squared().begin(), m.c_squared().end());
    for (double& v : coef) v *= s;
    return coef;
}

std::vector<double> sponge_profile(const Grid& g, const SolverConfig& cfg) {
    if (!cfg.sponge) return {};
    const double w = static_cast<double>(cfg.sponge_width);
    std::vector<double> damp(g.size(), 0.0);
    for (std::size_t j = 0; j < g.ny; ++j) {
        for (std::size_t i = 0; i < g.nx; ++i) {
            const double d = static_cast<double>(std::min({i, j, g.nx - 1 - i, g.ny - 1 - j}));
            if (d < w) damp[g.index(i, j)] = 0.5 * cfg.sponge_strength * (1.0 - std::cos(std::numbers::pi * (w - d) / w));
        }
    }
    return damp;
}

kernels::IndexBox inner_box(const Region& omega) {
    return {omega.i0() + 1, omega.j0() + 1, omega.i1() - 1, omega.j1() - 1};
}

void require_rectangle(const Region& omega, const char* where) {
    if (omega.kind() != Region::Kind::rectangle) {
        throw ConfigError(std::string(where) + ": omega must be a grid-aligned rectangle");
    }
}

void check_step(double peak, std::size_t step_index) {
    if (!std::isfinite(peak)) throw InstabilityError(step_index);
}

// Taylor seed u1 = u0 + dt ut0 + dt^2/2 c^2 L u0 on the interior nodes in box.
void taylor_seed(const Medium& m, const WaveState& f, double dt, const kernels::IndexBox& box, double sign,
                 ScalarField& out) {
    ScalarField lap = apply_wave_operator(f.u, m);
    const Grid& g = m.grid();
    for (std::size_t j = box.j0; j <= box.j1; ++j) {
        for (std::size_t i = box.i0; i <= box.i1; ++i) {
            const std::size_t k = g.index(i, j);
            out[k] = f.u[k] + sign * dt * f.ut[k] + 0.5 * dt * dt * lap[k];
        }
    }
}

}  // namespace

// ---------------------------------------------------------------------------
// BoundaryTrace

BoundaryTrace BoundaryTrace::on_region(const Region& omega, double dt, std::size_t n_times) {
    BoundaryTrace tr;
    tr.dt = dt;
    tr.n_times = n_times;
    const Grid& g = omega.grid();
    for (std::size_t k : omega.boundary()) {
        tr.points.push_back({g.x(g.col(k)), g.y(g.row(k))});
        tr.nodes.push_back(k);
    }
    tr.values.assign(n_times * tr.points.size(), 0.0);
    return tr;
}

void BoundaryTrace::bind(const Grid& g) {
    nodes.clear();
    for (const auto& p : points) {
        const double fi = (p[0] - g.ox) / g.h, fj = (p[1] - g.oy) / g.h;
        const double ri = std::round(fi), rj = std::round(fj);
        if (std::abs(fi - ri) > 1e-6 || std::abs(fj - rj) > 1e-6 || ri < 0 || rj < 0 ||
            ri >= static_cast<double>(g.nx) || rj >= static_cast<double>(g.ny)) {
            throw ConfigError("detector (" + std::to_string(p[0]) + ", " + std::to_string(p[1]) +
                              ") is not a node of the grid");
        }
        nodes.push_back(g.index(static_cast<std::size_t>(ri), static_cast<std::size_t>(rj)));
    }
}

BoundaryTrace& BoundaryTrace::operator-=(const BoundaryTrace& other) {
    if (other.values.size() != values.size() || other.n_times != n_times || other.dt != dt) {
        throw ConfigError("boundary traces have different shapes");
    }
    for (std::size_t k = 0; k < values.size(); ++k) values[k] -= other.values[k];
    return *this;
}

// ---------------------------------------------------------------------------

double cfl_dt(const Medium& m, double cfl) {
    if (!(cfl > 0.0 && cfl < 1.0)) throw ConfigError("cfl must lie in (0, 1)");
    return cfl * m.grid().h / (m.c_max() * std::numbers::sqrt2);
}

TimeGrid time_grid(const Medium& m, double T, const SolverConfig& cfg) {
    if (!(T >= 0.0) || !std::isfinite(T)) throw ConfigError("final time must be nonnegative");
    double dt = cfg.dt > 0.0 ? cfg.dt : cfl_dt(m, cfg.cfl);
    if (dt > m.grid().h / (m.c_max() * std::numbers::sqrt2)) {
        throw ConfigError("time step violates the CFL limit");
    }
    if (T == 0.0) return {dt, 0};
    const auto n = static_cast<std::size_t>(std::ceil(T / dt - 1e-9));
    return {T / static_cast<double>(n), n};
}

ScalarField step(const ScalarField& prev, const ScalarField& curr, const Medium& m, double dt,
                 std::size_t step_index) {
    require_same_grid(prev.grid(), curr.grid(), "step");
    require_same_grid(curr.grid(), m.grid(), "step");
    const Grid& g = m.grid();
    ScalarField next(g);
    const auto coef = leapfrog_coef(m, dt);
    check_step(kernels::leapfrog(g, kernels::interior_box(g), prev.values(), curr.values(), coef, {}, dt,
                                 next.values()),
               step_index);
    return next;
}

double required_box_margin(double T, double c_max) noexcept { return c_max * T; }

WaveState evolve(const WaveState& f, const Medium& m, double dt, std::size_t n_steps, const SolverConfig& cfg,
                 const StepObserver& observer) {
    require_same_grid(f.grid(), m.grid(), "evolve");
    const Grid& g = m.grid();
    const auto box = kernels::interior_box(g);
    const auto coef = leapfrog_coef(m, dt);
    const auto damp = sponge_profile(g, cfg);

    ScalarField prev(g), curr(g), next(g);
    for (std::size_t j = box.j0; j <= box.j1; ++j) {
        for (std::size_t i = box.i0; i <= box.i1; ++i) prev[g.index(i, j)] = f.u[g.index(i, j)];
    }
    if (observer) observer(0, prev);
    taylor_seed(m, f, dt, box, 1.0, curr);
    check_step(curr.all_finite() ? 0.0 : HUGE_VAL, 1);
    // one extra level beyond n_steps for the central-difference velocity
    for (std::size_t n = 1; n <= n_steps; ++n) {
        if (observer) observer(n, curr);
        if (cfg.on_step) cfg.on_step(n, n_steps);
        check_step(kernels::leapfrog(g, box, prev.values(), curr.values(), coef, damp, dt, next.values()), n + 1);
        std::swap(prev, curr);
        std::swap(curr, next);
    }
    // curr = u^{N+1}, prev = u^N; need u^{N-1} for the velocity: recover it by
    // reversibility instead of keeping a third buffer around.
    WaveState out(g);
    out.u = prev;
    if (n_steps == 0) {
        out.ut = f.ut;
        return out;
    }
    ScalarField before = next;  // holds u^{N-1} after the last rotation
    for (std::size_t k = 0; k < g.size(); ++k) out.ut[k] = (curr[k] - before[k]) / (2.0 * dt);
    return out;
}

Simulation simulate(const WaveState& f, const Medium& m, const Region& omega, double T, const SolverConfig& cfg,
                    const StepObserver& observer) {
    require_rectangle(omega, "forward");
    require_same_grid(f.grid(), m.grid(), "forward");
    require_same_grid(omega.grid(), m.grid(), "forward");
    const Grid& g = m.grid();
    for (std::size_t k = 0; k < g.size(); ++k) {
        if (!omega.is_interior(k) && (f.u[k] != 0.0 || f.ut[k] != 0.0)) {
            throw ConfigError("forward: initial data must vanish outside the interior of omega");
        }
    }
    if (!cfg.sponge) {
        const double margin = std::min({omega.xmin() - g.ox, g.x_max() - omega.xmax(), omega.ymin() - g.oy,
                                        g.y_max() - omega.ymax()});
        const double needed = required_box_margin(T, m.c_max());
        if (margin + 1e-12 < needed) {
            throw ConfigError("forward: computational box margin " + std::to_string(margin) + " is below the " +
                              std::to_string(needed) + " needed for T = " + std::to_string(T));
        }
    }
    const TimeGrid tg = time_grid(m, T, cfg);
    Simulation sim;
    sim.trace = BoundaryTrace::on_region(omega, tg.dt, tg.n_steps + 1);
    auto record = [&](std::size_t n, const ScalarField& u) {
        double* row = sim.trace.values.data() + n * sim.trace.n_det();
        for (std::size_t d = 0; d < sim.trace.nodes.size(); ++d) row[d] = u[sim.trace.nodes[d]];
        if (observer) observer(n, u);
    };
    sim.final_state = evolve(f, m, tg.dt, tg.n_steps, cfg, record);
    return sim;
}

BoundaryTrace forward(const WaveState& f, const Medium& m, const Region& omega, double T, const SolverConfig& cfg) {
    return simulate(f, m, omega, T, cfg).trace;
}

WaveState solve_backward(const BoundaryTrace& boundary, const WaveState& cauchy_at_T, const Medium& m,
                         const Region& omega, const SolverConfig& cfg) {
    require_rectangle(omega, "solve_backward");
    require_same_grid(cauchy_at_T.grid(), m.grid(), "solve_backward");
    require_same_grid(omega.grid(), m.grid(), "solve_backward");
    const Grid& g = m.grid();
    const auto& bnodes = omega.boundary();
    if (boundary.nodes != bnodes) {
        throw ConfigError("solve_backward: trace detectors must be exactly the boundary nodes of omega");
    }
    if (boundary.n_times == 0) throw ConfigError("solve_backward: empty trace");
    const std::size_t N = boundary.n_times - 1;
    const double dt = boundary.dt;

    double scale = 1.0;
    for (double v : boundary.values) scale = std::max(scale, std::abs(v));
    for (std::size_t d = 0; d < bnodes.size(); ++d) scale = std::max(scale, std::abs(cauchy_at_T.u[bnodes[d]]));
    const auto final_row = boundary.snapshot(N);
    for (std::size_t d = 0; d < bnodes.size(); ++d) {
        if (std::abs(cauchy_at_T.u[bnodes[d]] - final_row[d]) > 1e-9 * scale) {
            throw CompatibilityError("solve_backward: Cauchy data at T disagrees with the boundary trace at detector " +
                                     std::to_string(d));
        }
    }

    const auto box = inner_box(omega);
    auto pin = [&](ScalarField& v, std::size_t level) {
        const auto row = boundary.snapshot(level);
        for (std::size_t d = 0; d < bnodes.size(); ++d) v[bnodes[d]] = row[d];
    };
    ScalarField later(g), curr(g), earlier(g);
    for (std::size_t k : omega.interior()) later[k] = cauchy_at_T.u[k];
    pin(later, N);
    if (N == 0) {
        WaveState out(g);
        out.u = later;
        for (std::size_t k : omega.interior()) out.ut[k] = cauchy_at_T.ut[k];
        return out;
    }
    {
        WaveState at_T(later, restrict_to(cauchy_at_T.ut, omega));
        taylor_seed(m, at_T, dt, box, -1.0, curr);
    }
    pin(curr, N - 1);
    const auto coef = leapfrog_coef(m, dt);
    // curr holds level n, later level n + 1
    for (std::size_t n = N - 1; n > 0; --n) {
        check_step(kernels::leapfrog(g, box, later.values(), curr.values(), coef, {}, dt, earlier.values()), N - n);
        pin(earlier, n - 1);
        std::swap(later, curr);
        std::swap(curr, earlier);
        if (cfg.on_step) cfg.on_step(N - n, N);
    }
    // curr = v(0), later = v(dt)
    WaveState out(g);
    out.u = curr;
    const ScalarField lap = apply_wave_operator(curr, m);
    for (std::size_t k : omega.interior()) out.ut[k] = (later[k] - curr[k]) / dt - 0.5 * dt * lap[k];
    for (std::size_t d = 0; d < bnodes.size(); ++d) {
        out.ut[bnodes[d]] = (boundary.at(1, d) - boundary.at(0, d)) / dt;
    }
    return out;
}

std::vector<std::array<int, 2>> outward_offsets(const Region& omega) {
    require_rectangle(omega, "outward_offsets");
    const Grid& g = omega.grid();
    std::vector<std::array<int, 2>> out;
    out.reserve(omega.boundary().size());
    for (std::size_t k : omega.boundary()) {
        const std::size_t i = g.col(k), j = g.row(k);
        if (i == omega.i0()) {
            out.push_back({-1, 0});
        } else if (i == omega.i1()) {
            out.push_back({1, 0});
        } else if (j == omega.j0()) {
            out.push_back({0, -1});
        } else {
            out.push_back({0, 1});
        }
    }
    return out;
}

BoundaryTrace exterior_neumann(const BoundaryTrace& boundary, const Medium& m, const Region& omega,
                               const SolverConfig& cfg, const StepObserver& observer) {
    require_rectangle(omega, "exterior_neumann");
    require_same_grid(omega.grid(), m.grid(), "exterior_neumann");
    const Grid& g = m.grid();
    const auto& bnodes = omega.boundary();
    if (boundary.nodes != bnodes) {
        throw ConfigError("exterior_neumann: trace detectors must be exactly the boundary nodes of omega");
    }
    for (std::size_t k = 0; k < g.size(); ++k) {
        if (!omega.contains(k) && m.c_field()[k] != 1.0) {
            throw ConfigError("exterior_neumann: the speed must equal 1 outside omega");
        }
    }
    const auto offsets = outward_offsets(omega);
    std::vector<std::size_t> outer(bnodes.size());
    for (std::size_t d = 0; d < bnodes.size(); ++d) {
        const auto i = static_cast<std::ptrdiff_t>(g.col(bnodes[d])) + offsets[d][0];
        const auto j = static_cast<std::ptrdiff_t>(g.row(bnodes[d])) + offsets[d][1];
        outer[d] = g.index(static_cast<std::size_t>(i), static_cast<std::size_t>(j));
    }

    BoundaryTrace out = BoundaryTrace::on_region(omega, boundary.dt, boundary.n_times);
    const auto box = kernels::interior_box(g);
    const auto coef = leapfrog_coef(m, boundary.dt);
    const auto damp = sponge_profile(g, cfg);
    ScalarField prev(g), curr(g), next(g);
    auto pin = [&](ScalarField& w, std::size_t level) {
        const auto row = boundary.snapshot(level);
        for (std::size_t d = 0; d < bnodes.size(); ++d) w[bnodes[d]] = row[d];
        for (std::size_t k : omega.interior()) w[k] = 0.0;
    };
    auto record = [&](const ScalarField& w, std::size_t level) {
        for (std::size_t d = 0; d < bnodes.size(); ++d) out.at(level, d) = (w[outer[d]] - w[bnodes[d]]) / g.h;
        if (observer) observer(level, w);
    };
    pin(prev, 0);
    record(prev, 0);
    if (boundary.n_times == 1) return out;
    pin(curr, 1);
    record(curr, 1);
    for (std::size_t n = 1; n + 1 < boundary.n_times; ++n) {
        check_step(kernels::leapfrog(g, box, prev.values(), curr.values(), coef, damp, boundary.dt, next.values()),
                   n + 1);
        pin(next, n + 1);
        std::swap(prev, curr);
        std::swap(curr, next);
        record(curr, n + 1);
        if (cfg.on_step) cfg.on_step(n + 1, boundary.n_times - 1);
    }
    return out;
}

}  // namespace thermotomo
