#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "thermotomo/grid.hpp"
#include "thermotomo/medium.hpp"

namespace thermotomo {

inline constexpr double kDefaultHarmonicTol = 1e-10;

/// c(x)^2 times the 5-point Laplacian of s; zero on the outermost grid ring.
ScalarField apply_wave_operator(const ScalarField& s, const Medium& m);

/// Discrete squared Dirichlet norm of s over r: the sum of squared
/// forward differences over grid edges inside r that touch an interior node.
/// With the 2-D volume element h^2 and gradients (ds/h) the h factors cancel.
double dirichlet_energy(const ScalarField& s, const Region& r);

/// dirichlet_energy(w.u, r) + sum over nodes of r of c^-2 * w.ut^2 * h^2.
double energy(const WaveState& w, const Region& r, const Medium& m);

/// sqrt(sum over nodes of r of s^2 h^2).
double l2_norm(const ScalarField& s, const Region& r);

/// Values of s on r's boundary nodes, in r.boundary() order.
std::vector<double> boundary_trace(const ScalarField& s, const Region& r);

/// Discrete harmonic function on r with the given boundary values (ordered
/// as r.boundary()), found by conjugate gradients on the 5-point system.
/// On return every interior stencil residual |4 phi_p - sum of neighbors| is
/// at most tol * max(1, max |boundary_values|). Zero outside r. Throws
/// ConvergenceError when the cap of 50 * max(nx, ny) iterations is hit.
ScalarField harmonic_extension(std::span<const double> boundary_values, const Region& r,
                               double tol = kDefaultHarmonicTol);

/// s - harmonic_extension(s on boundary of r) on r, zero elsewhere.
ScalarField project_hd(const ScalarField& s, const Region& r, double tol = kDefaultHarmonicTol);

/// Largest stencil residual |4 s_p - sum of the four neighbors| over r's interior.
double laplacian_residual(const ScalarField& s, const Region& r);

/// Restriction of s to r's nodes (zero elsewhere).
ScalarField restrict_to(const ScalarField& s, const Region& r);

struct Bump {
    double x;
    double y;
    double sigma;
};

enum class PhantomKind { gaussian_bump, sum_of_bumps };

/// Smooth radial bump: exp(-r^2 / (2 sigma^2)) tapered to exactly zero by a
/// C-infinity cutoff between 2 sigma and 3 sigma. Peak value 1 at r = 0.
double bump_profile(double r, double sigma) noexcept;

/// Sum of bumps. Each bump's 3-sigma disk must lie inside `support`
/// (ConfigError otherwise); the result vanishes outside support's interior
/// nodes. gaussian_bump requires exactly one bump.
ScalarField make_phantom(PhantomKind kind, std::span<const Bump> bumps, const Grid& g, const Region& support);

}  // namespace thermotomo
