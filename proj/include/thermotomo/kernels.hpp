#pragma once

// Data-parallel inner loops. Every kernel in `thermotomo::kernels` is an
// OpenMP loop with a barrier at the end of the call; `thermotomo::kernels::serial`
// holds the plain reference loops the parallel versions are tested against.

#include <cstddef>
#include <cstdint>
#include <span>

#include "thermotomo/grid.hpp"

namespace thermotomo::kernels {

/// Inclusive node index box of nodes to update; must exclude the outer grid ring.
struct IndexBox {
    std::size_t i0, j0, i1, j1;
};

/// Interior nodes of the whole grid (everything but the outermost ring).
IndexBox interior_box(const Grid& g) noexcept;

/// out = c2 * (5-point Laplacian of u) / h^2 on the interior, 0 on the outer ring.
void wave_operator(const Grid& g, std::span<const double> u, std::span<const double> c2, std::span<double> out);

/// One leapfrog update over `box`:
///   next = (2 curr - (1 - s) prev + coef * L5(curr)) / (1 + s)
/// with coef = c^2 dt^2 / h^2 and s = damping * dt / 2 (s = 0 when `damping`
/// is empty). Nodes outside `box` are left untouched. Returns max |next| over
/// the updated nodes, or NaN/Inf when a non-finite value appeared.
double leapfrog(const Grid& g, const IndexBox& box, std::span<const double> prev, std::span<const double> curr,
                std::span<const double> coef, std::span<const double> damping, double dt, std::span<double> next);

/// CG operator for Dirichlet problems on a region: out[p] = 4 x[p] - sum of x
/// over neighbors labelled interior, for every p in `interior`.
void dirichlet_stencil(const Grid& g, std::span<const Region::Label> labels, std::span<const std::size_t> interior,
                       std::span<const double> x, std::span<double> out);

double dot(std::span<const std::size_t> nodes, std::span<const double> a, std::span<const double> b);

/// y[p] += alpha * x[p] for p in nodes.
void axpy(std::span<const std::size_t> nodes, double alpha, std::span<const double> x, std::span<double> y);

/// Sum of squared differences over grid edges whose endpoints both lie in the
/// region and at least one endpoint is interior (the quadratic form of the
/// 5-point Dirichlet problem).
double edge_energy(const Grid& g, std::span<const Region::Label> labels, std::span<const double> s);

/// Sum over nodes of w[p] * a[p]^2.
double weighted_square_sum(std::span<const std::size_t> nodes, std::span<const double> w, std::span<const double> a);

/// Width used by the parallel kernels (honors THERMOTOMO_THREADS once read).
int thread_count() noexcept;

/// Reads THERMOTOMO_THREADS and caps the OpenMP team size accordingly.
void configure_threads_from_env();

namespace serial {

void wave_operator(const Grid& g, std::span<const double> u, std::span<const double> c2, std::span<double> out);
double leapfrog(const Grid& g, const IndexBox& box, std::span<const double> prev, std::span<const double> curr,
                std::span<const double> coef, std::span<const double> damping, double dt, std::span<double> next);
void dirichlet_stencil(const Grid& g, std::span<const Region::Label> labels, std::span<const std::size_t> interior,
                       std::span<const double> x, std::span<double> out);
double dot(std::span<const std::size_t> nodes, std::span<const double> a, std::span<const double> b);
void axpy(std::span<const std::size_t> nodes, double alpha, std::span<const double> x, std::span<double> y);
double edge_energy(const Grid& g, std::span<const Region::Label> labels, std::span<const double> s);
double weighted_square_sum(std::span<const std::size_t> nodes, std::span<const double> w, std::span<const double> a);

}  // namespace serial

}  // namespace thermotomo::kernels
