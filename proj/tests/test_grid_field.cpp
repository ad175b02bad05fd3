#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "support.hpp"
#include "thermotomo/errors.hpp"
#include "thermotomo/field_ops.hpp"
#include "thermotomo/medium.hpp"

using namespace thermotomo;

TEST_CASE("grid rejects degenerate shapes and places nodes at origin plus i h") {
    CHECK_THROWS_AS(Grid(2, 5, 0.1), ConfigError);
    CHECK_THROWS_AS(Grid(5, 5, 0.0), ConfigError);
    const Grid g(4, 3, 0.5, -1.0, 2.0);
    CHECK(g.x(3) == doctest::Approx(0.5));
    CHECK(g.y(2) == doctest::Approx(3.0));
    CHECK(g.index(1, 2) == 9);
}

TEST_CASE("scalar field rejects non-finite values and mismatched sizes") {
    const Grid g(3, 3, 1.0);
    CHECK_THROWS_AS(ScalarField(g, std::vector<double>(8, 0.0)), ConfigError);
    std::vector<double> v(9, 0.0);
    v[4] = std::nan("");
    CHECK_THROWS_AS(ScalarField(g, v), ConfigError);
}

TEST_CASE("regions keep interior and boundary disjoint and strictly inside the grid") {
    const Grid g(21, 21, 0.1, -1.0, -1.0);
    const Region rect = Region::rectangle(g, 2, 3, 10, 12);
    CHECK(rect.boundary().size() == 2 * (9 + 10) - 4);
    CHECK(rect.interior().size() == 7 * 8);
    CHECK(rect.boundary().front() == g.index(2, 3));
    CHECK_THROWS_AS(Region::rectangle(g, 0, 3, 10, 12), ConfigError);

    const Region disk = Region::disk(g, 0.0, 0.0, 0.55);
    for (std::size_t k : disk.boundary()) {
        CHECK_FALSE(disk.is_interior(k));
        CHECK(std::abs(std::hypot(g.x(g.col(k)), g.y(g.row(k))) - 0.55) <= 0.05 + 1e-12);
    }
    CHECK_FALSE(disk.boundary().empty());
    CHECK_THROWS_AS(Region::disk(g, 0.0, 0.0, 1.0), ConfigError);
    const Region ring = Region::annulus(g, 0.0, 0.0, 0.3, 0.7);
    CHECK_FALSE(ring.is_interior(g.index(10, 10)));
}

TEST_CASE("wave operator is exact on affine and quadratic functions") {
    const Grid g(9, 7, 0.37, -1.0, 0.5);
    const Medium m(g, {});
    const ScalarField c = support::sample(g, [](double, double) { return 3.0; });
    const ScalarField lin = support::sample(g, [](double x, double) { return x; });
    const ScalarField quad = support::sample(g, [](double x, double y) { return x * x + y * y; });
    const ScalarField lc = apply_wave_operator(c, m), ll = apply_wave_operator(lin, m), lq = apply_wave_operator(quad, m);
    for (std::size_t j = 1; j + 1 < g.ny; ++j) {
        for (std::size_t i = 1; i + 1 < g.nx; ++i) {
            CHECK(lc.at(i, j) == doctest::Approx(0.0).epsilon(1e-12));
            CHECK(std::abs(ll.at(i, j)) < 1e-12);
            CHECK(lq.at(i, j) == doctest::Approx(4.0).epsilon(1e-12));
        }
    }
    CHECK(lq.at(0, 3) == 0.0);
}

TEST_CASE("dirichlet energy of x over a unit square is one and scales quadratically") {
    const std::size_t n = 101;
    const Grid g(n + 2, n + 2, 1.0 / static_cast<double>(n - 1), -1.0 / static_cast<double>(n - 1),
                 -1.0 / static_cast<double>(n - 1));
    const Region r = Region::rectangle(g, 1, 1, n, n);
    const ScalarField x = support::sample(g, [](double px, double) { return px; });
    CHECK(dirichlet_energy(x, r) == doctest::Approx(1.0).epsilon(2.0 / static_cast<double>(n)));
    CHECK(dirichlet_energy(ScalarField(g), r) == 0.0);
    const ScalarField s = support::noise(g, 3);
    CHECK(dirichlet_energy(2.5 * s, r) == doctest::Approx(6.25 * dirichlet_energy(s, r)).epsilon(1e-13));
}

TEST_CASE("energy substitutes c^-2 on the velocity term and is additive over node partitions") {
    const Grid g(12, 12, 0.1);
    const Medium fast(g, {{10.0, 2.0}});
    const Region r = Region::rectangle(g, 1, 1, 10, 10);
    const ScalarField gut = support::noise(g, 5);
    double expect = 0.0;
    for (std::size_t k : r.interior()) expect += gut[k] * gut[k] * g.h * g.h;
    for (std::size_t k : r.boundary()) expect += gut[k] * gut[k] * g.h * g.h;
    CHECK(energy(WaveState(ScalarField(g), gut), r, fast) == doctest::Approx(0.25 * expect).epsilon(1e-13));
    CHECK(energy(WaveState(g), r, fast) == 0.0);

    // velocity part splits exactly over two disjoint node sets
    const Medium m(g, {});
    const Region a = Region::rectangle(g, 1, 1, 4, 10), b = Region::rectangle(g, 5, 1, 10, 10);
    const WaveState w(ScalarField(g), gut);
    CHECK(energy(w, r, m) == doctest::Approx(energy(w, a, m) + energy(w, b, m)).epsilon(1e-13));
}

TEST_CASE("harmonic extension reproduces constants, affine and x^2 - y^2 data") {
    const Grid g(31, 27, 0.05, -0.7, -0.6);
    for (const Region& r : {Region::rectangle(g, 2, 2, 27, 23), Region::disk(g, 0.05, 0.0, 0.5)}) {
        const std::vector<double> seven(r.boundary().size(), 7.0);
        const ScalarField phi7 = harmonic_extension(seven, r);
        for (std::size_t k : r.interior()) CHECK(phi7[k] == doctest::Approx(7.0).epsilon(1e-9));

        for (auto fn : {+[](double x, double y) { return 2.0 * x - y + 0.3; },
                        +[](double x, double y) { return x * x - y * y; }}) {
            const ScalarField s = support::sample(g, fn);
            const ScalarField phi = harmonic_extension(boundary_trace(s, r), r);
            CHECK(laplacian_residual(phi, r) <= 1e-10 * std::max(1.0, s.max_abs()));
            for (std::size_t k : r.interior()) CHECK(phi[k] == doctest::Approx(s[k]).epsilon(1e-7));
            CHECK(phi[0] == 0.0);
        }
    }
}

TEST_CASE("harmonic extension rejects bad arguments") {
    const Grid g(40, 40, 0.1);
    const Region r = Region::rectangle(g, 1, 1, 38, 38);
    std::vector<double> b(r.boundary().size());
    for (std::size_t k = 0; k < b.size(); ++k) b[k] = (k % 2 == 0) ? 1.0 : -1.0;
    CHECK_THROWS_AS(harmonic_extension(b, r, 0.0), ConfigError);
    CHECK_THROWS_AS(harmonic_extension(std::vector<double>(3), r), ConfigError);
}

TEST_CASE("projection kills harmonic fields, keeps zero-trace fields and zeroes the boundary") {
    const Grid g(25, 25, 0.05, -0.6, -0.6);
    const Region r = Region::disk(g, 0.0, 0.0, 0.5);
    const ScalarField harmonic = support::sample(g, [](double x, double y) { return x * y + x; });
    CHECK(project_hd(harmonic, r).max_abs() < 1e-8);

    ScalarField inside = support::noise(g, 9);
    inside = restrict_to(inside, r);
    for (std::size_t k : r.boundary()) inside[k] = 0.0;
    const ScalarField p = project_hd(inside, r);
    CHECK((p - inside).max_abs() < 1e-14);

    const ScalarField q = project_hd(support::noise(g, 10), r);
    for (std::size_t k : r.boundary()) CHECK(q[k] == 0.0);
    for (std::size_t k = 0; k < g.size(); ++k) {
        if (!r.contains(k)) CHECK(q[k] == 0.0);
    }
}

TEST_CASE("property: projection is an orthogonal projector in the Dirichlet norm") {
    const Grid g(33, 33, 1.0 / 32.0, -0.5, -0.5);
    const Region regions[] = {Region::rectangle(g, 3, 2, 29, 30), Region::disk(g, 0.0, 0.02, 0.45),
                              Region::annulus(g, 0.0, 0.0, 0.12, 0.44)};
    for (int trial = 0; trial < 30; ++trial) {
        const Region& r = regions[trial % 3];
        const ScalarField s = support::noise(g, 100 + static_cast<std::uint64_t>(trial));
        const ScalarField p = project_hd(s, r);
        const ScalarField phi = harmonic_extension(boundary_trace(s, r), r);
        const double ns = dirichlet_energy(s, r), np = dirichlet_energy(p, r), nphi = dirichlet_energy(phi, r);
        CHECK(std::abs(ns - np - nphi) <= 1e-9 * ns);
        CHECK(np <= ns);
        CHECK(dirichlet_energy(project_hd(p, r) - p, r) <= 1e-20 * np);
        const auto trace = boundary_trace(s, r);
        const auto [lo, hi] = std::minmax_element(trace.begin(), trace.end());
        for (std::size_t k : r.interior()) {
            CHECK(phi[k] >= *lo - 1e-10);
            CHECK(phi[k] <= *hi + 1e-10);
        }
    }
}

TEST_CASE("property: field operations are linear") {
    const Grid g(21, 19, 0.05);
    const Medium m(g, {{0.3, 0.6}});
    const Region r = Region::rectangle(g, 2, 2, 18, 16);
    const ScalarField a = support::noise(g, 1), b = support::noise(g, 2);
    const ScalarField combo = 2.0 * a + (-0.5) * b;
    const ScalarField lhs = apply_wave_operator(combo, m);
    const ScalarField rhs = 2.0 * apply_wave_operator(a, m) + (-0.5) * apply_wave_operator(b, m);
    CHECK((lhs - rhs).max_abs() <= 1e-12 * rhs.max_abs());
    const ScalarField plhs = project_hd(combo, r, 1e-13);
    const ScalarField prhs = 2.0 * project_hd(a, r, 1e-13) + (-0.5) * project_hd(b, r, 1e-13);
    CHECK((plhs - prhs).max_abs() <= 1e-9);
}

TEST_CASE("phantoms: empty, unimodal, superposed, and confined to the support") {
    const Grid g(41, 41, 0.025, -0.5, -0.5);
    const Region k = Region::disk(g, 0.0, 0.0, 0.4);
    CHECK(make_phantom(PhantomKind::sum_of_bumps, {}, g, k).max_abs() == 0.0);

    const Bump one{0.031, -0.048, 0.05};
    const ScalarField f = make_phantom(PhantomKind::gaussian_bump, std::vector<Bump>{one}, g, k);
    const auto peak = static_cast<std::size_t>(std::max_element(f.values().begin(), f.values().end()) - f.values().begin());
    CHECK(g.col(peak) == static_cast<std::size_t>(std::lround((one.x - g.ox) / g.h)));
    CHECK(g.row(peak) == static_cast<std::size_t>(std::lround((one.y - g.oy) / g.h)));
    CHECK(f[peak] <= 1.0);

    const Bump left{-0.2, 0.0, 0.04}, right{0.2, 0.0, 0.04};
    const ScalarField both = make_phantom(PhantomKind::sum_of_bumps, std::vector<Bump>{left, right}, g, k);
    const ScalarField sum = make_phantom(PhantomKind::sum_of_bumps, std::vector<Bump>{left}, g, k) +
                            make_phantom(PhantomKind::sum_of_bumps, std::vector<Bump>{right}, g, k);
    CHECK((both - sum).max_abs() == 0.0);
    for (std::size_t n = 0; n < g.size(); ++n) {
        CHECK(both[n] >= 0.0);
        if (!k.is_interior(n)) CHECK(both[n] == 0.0);
    }
    CHECK_THROWS_AS(make_phantom(PhantomKind::sum_of_bumps, std::vector<Bump>{{0.35, 0.0, 0.05}}, g, k), ConfigError);
    CHECK_THROWS_AS(make_phantom(PhantomKind::gaussian_bump, std::vector<Bump>{left, right}, g, k), ConfigError);
}

TEST_CASE("bump profile is one at the center and exactly zero from three sigma") {
    CHECK(bump_profile(0.0, 0.1) == 1.0);
    CHECK(bump_profile(0.15, 0.1) == doctest::Approx(std::exp(-1.125)));
    CHECK(bump_profile(0.3, 0.1) == 0.0);
    CHECK(bump_profile(0.2999, 0.1) < 1e-10);
}
