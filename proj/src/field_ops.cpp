#include "thermotomo/field_ops.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "thermotomo/errors.hpp"
#include "thermotomo/kernels.hpp"

namespace thermotomo {

ScalarField apply_wave_operator(const ScalarField& s, const Medium& m) {
    require_same_grid(s.grid(), m.grid(), "apply_wave_operator");
    ScalarField out(s.grid());
    kernels::wave_operator(s.grid(), s.values(), m.c_squared(), out.values());
    return out;
}

double dirichlet_energy(const ScalarField& s, const Region& r) {
    require_same_grid(s.grid(), r.grid(), "dirichlet_energy");
    return kernels::edge_energy(s.grid(), r.labels(), s.values());
}

double energy(const WaveState& w, const Region& r, const Medium& m) {
    require_same_grid(w.grid(), m.grid(), "energy");
    require_same_grid(w.grid(), r.grid(), "energy");
    const Grid& g = w.grid();
    std::vector<double> inv_c2(g.size());
    const auto c2 = m.c_squared();
    for (std::size_t k = 0; k < g.size(); ++k) inv_c2[k] = 1.0 / c2[k];
    const double h2 = g.h * g.h;
    const double kinetic = kernels::weighted_square_sum(r.interior(), inv_c2, w.ut.values()) +
                           kernels::weighted_square_sum(r.boundary(), inv_c2, w.ut.values());
    return dirichlet_energy(w.u, r) + kinetic * h2;
}

double l2_norm(const ScalarField& s, const Region& r) {
    require_same_grid(s.grid(), r.grid(), "l2_norm");
    double acc = kernels::dot(r.interior(), s.values(), s.values()) + kernels::dot(r.boundary(), s.values(), s.values());
    return std::sqrt(acc) * s.grid().h;
}

std::vector<double> boundary_trace(const ScalarField& s, const Region& r) {
    require_same_grid(s.grid(), r.grid(), "boundary_trace");
    std::vector<double> out;
    out.reserve(r.boundary().size());
    for (std::size_t k : r.boundary()) out.push_back(s[k]);
    return out;
}

ScalarField restrict_to(const ScalarField& s, const Region& r) {
    require_same_grid(s.grid(), r.grid(), "restrict_to");
    ScalarField out(s.grid());
    for (std::size_t k : r.interior()) out[k] = s[k];
    for (std::size_t k : r.boundary()) out[k] = s[k];
    return out;
}

double laplacian_residual(const ScalarField& s, const Region& r) {
    require_same_grid(s.grid(), r.grid(), "laplacian_residual");
    const std::size_t nx = s.grid().nx;
    double worst = 0.0;
    for (std::size_t k : r.interior()) {
        const double res = 4.0 * s[k] - s[k - 1] - s[k + 1] - s[k - nx] - s[k + nx];
        worst = std::max(worst, std::abs(res));
    }
    return worst;
}

ScalarField harmonic_extension(std::span<const double> boundary_values, const Region& r, double tol) {
    const Grid& g = r.grid();
    const auto& bnodes = r.boundary();
    const auto& inodes = r.interior();
    if (boundary_values.size() != bnodes.size()) {
        throw ConfigError("harmonic_extension: expected " + std::to_string(bnodes.size()) + " boundary values, got " +
                          std::to_string(boundary_values.size()));
    }
    if (!(tol > 0.0)) throw ConfigError("harmonic_extension: tolerance must be positive");
    double scale = 1.0;
    double mean = 0.0;
    for (double v : boundary_values) {
        if (!std::isfinite(v)) throw ConfigError("harmonic_extension: non-finite boundary value");
        scale = std::max(scale, std::abs(v));
        mean += v;
    }
    mean /= static_cast<double>(boundary_values.size());

    ScalarField phi(g);
    for (std::size_t q = 0; q < bnodes.size(); ++q) phi[bnodes[q]] = boundary_values[q];
    if (inodes.empty()) return phi;

    // A x = b with A the interior 5-point operator and b collecting boundary
    // neighbors; r = b - A x is exactly minus the stencil residual of phi.
    const auto labels = r.labels();
    const std::size_t nx = g.nx;
    std::vector<double> x(g.size(), 0.0), res(g.size(), 0.0), p(g.size(), 0.0), ap(g.size(), 0.0);
    for (std::size_t k : inodes) x[k] = mean;
    kernels::dirichlet_stencil(g, labels, inodes, x, ap);
    for (std::size_t k : inodes) {
        double b = 0.0;
        for (std::size_t nb : {k - 1, k + 1, k - nx, k + nx}) {
            if (labels[nb] == Region::Label::boundary) b += phi[nb];
        }
        res[k] = b - ap[k];
        p[k] = res[k];
    }
    const double target = tol * scale;
    double rr = kernels::dot(inodes, res, res);
    const std::size_t cap = 50 * std::max(g.nx, g.ny);
    std::size_t it = 0;
    while (std::sqrt(rr) > target) {
        if (it == cap) {
            throw ConvergenceError("harmonic_extension: CG did not converge in " + std::to_string(cap) + " iterations",
                                   std::sqrt(rr));
        }
        kernels::dirichlet_stencil(g, labels, inodes, p, ap);
        const double alpha = rr / kernels::dot(inodes, p, ap);
        kernels::axpy(inodes, alpha, p, x);
        kernels::axpy(inodes, -alpha, ap, res);
        const double rr_new = kernels::dot(inodes, res, res);
        const double beta = rr_new / rr;
        rr = rr_new;
        for (std::size_t k : inodes) p[k] = res[k] + beta * p[k];
        ++it;
    }
    for (std::size_t k : inodes) phi[k] = x[k];
    return phi;
}

ScalarField project_hd(const ScalarField& s, const Region& r, double tol) {
    require_same_grid(s.grid(), r.grid(), "project_hd");
    const auto trace = boundary_trace(s, r);
    ScalarField out = restrict_to(s, r);
    out -= harmonic_extension(trace, r, tol);
    for (std::size_t k : r.boundary()) out[k] = 0.0;
    return out;
}

namespace {

double smooth_zero(double x) noexcept { return x > 0.0 ? std::exp(-1.0 / x) : 0.0; }

bool disk_inside(const Region& r, double x, double y, double rad) {
    switch (r.kind()) {
        case Region::Kind::rectangle:
            return x - rad >= r.xmin() && x + rad <= r.xmax() && y - rad >= r.ymin() && y + rad <= r.ymax();
        case Region::Kind::disk:
            return std::hypot(x - r.cx(), y - r.cy()) + rad <= r.r_outer();
        case Region::Kind::annulus: {
            const double d = std::hypot(x - r.cx(), y - r.cy());
            return d - rad >= r.r_inner() && d + rad <= r.r_outer();
        }
    }
    return false;
}

}  // namespace

double bump_profile(double r, double sigma) noexcept {
    const double t = r / sigma;
    if (t >= 3.0) return 0.0;
    double taper = 1.0;
    if (t > 2.0) {
        const double a = smooth_zero(3.0 - t);
        taper = a / (a + smooth_zero(t - 2.0));
    }
    return std::exp(-0.5 * t * t) * taper;
}

ScalarField make_phantom(PhantomKind kind, std::span<const Bump> bumps, const Grid& g, const Region& support) {
    require_same_grid(g, support.grid(), "make_phantom");
    if (kind == PhantomKind::gaussian_bump && bumps.size() != 1) {
        throw ConfigError("gaussian_bump phantom needs exactly one bump");
    }
    for (std::size_t b = 0; b < bumps.size(); ++b) {
        const Bump& bp = bumps[b];
        if (!(bp.sigma > 0.0)) throw ConfigError("bump " + std::to_string(b + 1) + ": sigma must be positive");
        if (!disk_inside(support, bp.x, bp.y, 3.0 * bp.sigma)) {
            throw ConfigError("bump " + std::to_string(b + 1) + ": 3-sigma disk escapes the support region");
        }
    }
    ScalarField f(g);
    for (std::size_t k : support.interior()) {
        const double x = g.x(g.col(k)), y = g.y(g.row(k));
        double v = 0.0;
        for (const Bump& bp : bumps) v += bump_profile(std::hypot(x - bp.x, y - bp.y), bp.sigma);
        f[k] = v;
    }
    return f;
}

}  // namespace thermotomo
