#include "thermotomo/kernels.hpp"

#include <omp.h>

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <string>

#include "thermotomo/errors.hpp"

namespace thermotomo::kernels {

namespace {

using Label = Region::Label;
using sidx = std::ptrdiff_t;

inline double l5(const double* u, std::size_t k, std::size_t nx) {
    return u[k - 1] + u[k + 1] + u[k - nx] + u[k + nx] - 4.0 * u[k];
}

}  // namespace

IndexBox interior_box(const Grid& g) noexcept { return {1, 1, g.nx - 2, g.ny - 2}; }

int thread_count() noexcept { return omp_get_max_threads(); }

void configure_threads_from_env() {
    const char* env = std::getenv("THERMOTOMO_THREADS");
    if (env == nullptr || *env == '\0') return;
    char* end = nullptr;
    const long n = std::strtol(env, &end, 10);
    if (end == env || *end != '\0' || n < 1) {
        throw ConfigError(std::string("THERMOTOMO_THREADS must be a positive integer, got '") + env + "'");
    }
    omp_set_num_threads(static_cast<int>(std::min<long>(n, omp_get_num_procs())));
}

void wave_operator(const Grid& g, std::span<const double> u, std::span<const double> c2, std::span<double> out) {
    const std::size_t nx = g.nx, ny = g.ny;
    const double inv_h2 = 1.0 / (g.h * g.h);
    const double* up = u.data();
    const double* cp = c2.data();
    double* op = out.data();
#pragma omp parallel for schedule(static)
    for (sidx js = 0; js < static_cast<sidx>(ny); ++js) {
        const auto j = static_cast<std::size_t>(js);
        double* row = op + j * nx;
        if (j == 0 || j + 1 == ny) {
            std::fill(row, row + nx, 0.0);
            continue;
        }
        row[0] = 0.0;
        row[nx - 1] = 0.0;
        for (std::size_t i = 1; i + 1 < nx; ++i) {
            const std::size_t k = j * nx + i;
            op[k] = cp[k] * l5(up, k, nx) * inv_h2;
        }
    }
}

double leapfrog(const Grid& g, const IndexBox& box, std::span<const double> prev, std::span<const double> curr,
                std::span<const double> coef, std::span<const double> damping, double dt, std::span<double> next) {
    const std::size_t nx = g.nx;
    const double* pp = prev.data();
    const double* cu = curr.data();
    const double* cf = coef.data();
    const double* dm = damping.empty() ? nullptr : damping.data();
    double* np = next.data();
    double peak = 0.0;
    bool bad = false;
#pragma omp parallel for schedule(static) reduction(max : peak) reduction(|| : bad)
    for (sidx js = static_cast<sidx>(box.j0); js <= static_cast<sidx>(box.j1); ++js) {
        const auto j = static_cast<std::size_t>(js);
        for (std::size_t i = box.i0; i <= box.i1; ++i) {
            const std::size_t k = j * nx + i;
            double v = 2.0 * cu[k] - pp[k] + cf[k] * l5(cu, k, nx);
            if (dm != nullptr) {
                const double s = 0.5 * dm[k] * dt;
                v = (v + s * pp[k]) / (1.0 + s);
            }
            np[k] = v;
            bad = bad || !std::isfinite(v);
            peak = std::max(peak, std::abs(v));
        }
    }
    if (bad) return HUGE_VAL;
    return peak;
}

void dirichlet_stencil(const Grid& g, std::span<const Label> labels, std::span<const std::size_t> interior,
                       std::span<const double> x, std::span<double> out) {
    const std::size_t nx = g.nx;
    const sidx n = static_cast<sidx>(interior.size());
#pragma omp parallel for schedule(static)
    for (sidx q = 0; q < n; ++q) {
        const std::size_t k = interior[static_cast<std::size_t>(q)];
        double acc = 4.0 * x[k];
        if (labels[k - 1] == Label::interior) acc -= x[k - 1];
        if (labels[k + 1] == Label::interior) acc -= x[k + 1];
        if (labels[k - nx] == Label::interior) acc -= x[k - nx];
        if (labels[k + nx] == Label::interior) acc -= x[k + nx];
        out[k] = acc;
    }
}

double dot(std::span<const std::size_t> nodes, std::span<const double> a, std::span<const double> b) {
    const sidx n = static_cast<sidx>(nodes.size());
    double acc = 0.0;
#pragma omp parallel for schedule(static) reduction(+ : acc)
    for (sidx q = 0; q < n; ++q) {
        const std::size_t k = nodes[static_cast<std::size_t>(q)];
        acc += a[k] * b[k];
    }
    return acc;
}

void axpy(std::span<const std::size_t> nodes, double alpha, std::span<const double> x, std::span<double> y) {
    const sidx n = static_cast<sidx>(nodes.size());
#pragma omp parallel for schedule(static)
    for (sidx q = 0; q < n; ++q) {
        const std::size_t k = nodes[static_cast<std::size_t>(q)];
        y[k] += alpha * x[k];
    }
}

double edge_energy(const Grid& g, std::span<const Label> labels, std::span<const double> s) {
    const std::size_t nx = g.nx, ny = g.ny;
    double acc = 0.0;
#pragma omp parallel for schedule(static) reduction(+ : acc)
    for (sidx js = 0; js < static_cast<sidx>(ny); ++js) {
        const auto j = static_cast<std::size_t>(js);
        for (std::size_t i = 0; i < nx; ++i) {
            const std::size_t k = j * nx + i;
            const Label lk = labels[k];
            if (lk == Label::outside) continue;
            if (i + 1 < nx) {
                const Label lr = labels[k + 1];
                if (lr != Label::outside && (lk == Label::interior || lr == Label::interior)) {
                    const double d = s[k + 1] - s[k];
                    acc += d * d;
                }
            }
            if (j + 1 < ny) {
                const Label lu = labels[k + nx];
                if (lu != Label::outside && (lk == Label::interior || lu == Label::interior)) {
                    const double d = s[k + nx] - s[k];
                    acc += d * d;
                }
            }
        }
    }
    return acc;
}

double weighted_square_sum(std::span<const std::size_t> nodes, std::span<const double> w, std::span<const double> a) {
    const sidx n = static_cast<sidx>(nodes.size());
    double acc = 0.0;
#pragma omp parallel for schedule(static) reduction(+ : acc)
    for (sidx q = 0; q < n; ++q) {
        const std::size_t k = nodes[static_cast<std::size_t>(q)];
        acc += w[k] * a[k] * a[k];
    }
    return acc;
}

// ---------------------------------------------------------------------------
// serial reference loops

namespace serial {

void wave_operator(const Grid& g, std::span<const double> u, std::span<const double> c2, std::span<double> out) {
    const double inv_h2 = 1.0 / (g.h * g.h);
    for (std::size_t j = 0; j < g.ny; ++j) {
        for (std::size_t i = 0; i < g.nx; ++i) {
            const std::size_t k = g.index(i, j);
            if (g.on_outer_ring(i, j)) {
                out[k] = 0.0;
                continue;
            }
            const double lap = u[g.index(i - 1, j)] + u[g.index(i + 1, j)] + u[g.index(i, j - 1)] +
                               u[g.index(i, j + 1)] - 4.0 * u[k];
            out[k] = c2[k] * lap * inv_h2;
        }
    }
}

double leapfrog(const Grid& g, const IndexBox& box, std::span<const double> prev, std::span<const double> curr,
                std::span<const double> coef, std::span<const double> damping, double dt, std::span<double> next) {
    double peak = 0.0;
    bool bad = false;
    for (std::size_t j = box.j0; j <= box.j1; ++j) {
        for (std::size_t i = box.i0; i <= box.i1; ++i) {
            const std::size_t k = g.index(i, j);
            const double lap = curr[g.index(i - 1, j)] + curr[g.index(i + 1, j)] + curr[g.index(i, j - 1)] +
                               curr[g.index(i, j + 1)] - 4.0 * curr[k];
            double v = 2.0 * curr[k] - prev[k] + coef[k] * lap;
            if (!damping.empty()) {
                const double s = 0.5 * damping[k] * dt;
                v = (v + s * prev[k]) / (1.0 + s);
            }
            next[k] = v;
            if (!std::isfinite(v)) bad = true;
            peak = std::max(peak, std::abs(v));
        }
    }
    return bad ? HUGE_VAL : peak;
}

void dirichlet_stencil(const Grid& g, std::span<const Label> labels, std::span<const std::size_t> interior,
                       std::span<const double> x, std::span<double> out) {
    for (std::size_t k : interior) {
        const std::size_t nb[4] = {k - 1, k + 1, k - g.nx, k + g.nx};
        double acc = 4.0 * x[k];
        for (std::size_t q : nb) {
            if (labels[q] == Label::interior) acc -= x[q];
        }
        out[k] = acc;
    }
}

double dot(std::span<const std::size_t> nodes, std::span<const double> a, std::span<const double> b) {
    double acc = 0.0;
    for (std::size_t k : nodes) acc += a[k] * b[k];
    return acc;
}

void axpy(std::span<const std::size_t> nodes, double alpha, std::span<const double> x, std::span<double> y) {
    for (std::size_t k : nodes) y[k] += alpha * x[k];
}

double edge_energy(const Grid& g, std::span<const Label> labels, std::span<const double> s) {
    double acc = 0.0;
    auto edge = [&](std::size_t a, std::size_t b) {
        if (labels[a] == Label::outside || labels[b] == Label::outside) return;
        if (labels[a] != Label::interior && labels[b] != Label::interior) return;
        acc += (s[b] - s[a]) * (s[b] - s[a]);
    };
    for (std::size_t j = 0; j < g.ny; ++j) {
        for (std::size_t i = 0; i < g.nx; ++i) {
            if (i + 1 < g.nx) edge(g.index(i, j), g.index(i + 1, j));
            if (j + 1 < g.ny) edge(g.index(i, j), g.index(i, j + 1));
        }
    }
    return acc;
}

double weighted_square_sum(std::span<const std::size_t> nodes, std::span<const double> w, std::span<const double> a) {
    double acc = 0.0;
    for (std::size_t k : nodes) acc += w[k] * a[k] * a[k];
    return acc;
}

}  // namespace serial

}  // namespace thermotomo::kernels
