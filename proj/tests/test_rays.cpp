#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

#include "thermotomo/errors.hpp"
#include "thermotomo/medium.hpp"
#include "thermotomo/rays.hpp"

using namespace thermotomo;

namespace {

const Grid kGrid(203, 203, 0.01, -1.01, -1.01);

const Region& square() {
    static const Region r = Region::rectangle(kGrid, 1, 1, 201, 201);
    return r;
}

Vec2 unit(double angle) { return {std::cos(angle), std::sin(angle)}; }

void check_weight_conservation(const RayBranchGraph& g) {
    for (std::size_t id = 0; id < g.events.size(); ++id) {
        const auto kids = g.children(id);
        if (kids.empty()) continue;
        double sum = 0.0;
        for (std::size_t k : kids) sum += g.events[k].weight;
        CHECK(std::abs(sum - g.events[id].weight) <= 1e-12);
    }
}

std::size_t count(const RayBranchGraph& g, RayEventKind kind) {
    std::size_t n = 0;
    for (const auto& e : g.events) n += e.kind == kind;
    return n;
}

}  // namespace

TEST_CASE("reflection law") {
    const Vec2 n{0.0, 1.0};
    const Vec2 r = reflect({0.0, -1.0}, n);
    CHECK(r.x == 0.0);
    CHECK(r.y == 1.0);
    const double s = std::numbers::sqrt2 / 2.0;
    const Vec2 r45 = reflect({s, -s}, n);
    CHECK(r45.x == doctest::Approx(s));
    CHECK(r45.y == doctest::Approx(s));
    CHECK_THROWS_AS(reflect({1.0, 0.0}, n), GeometryError);

    std::mt19937_64 rng(4);
    std::uniform_real_distribution<double> ang(0.0, 2.0 * std::numbers::pi);
    for (int trial = 0; trial < 200; ++trial) {
        const Vec2 d = unit(ang(rng)), nn = unit(ang(rng));
        if (std::abs(d.dot(nn)) < 1e-6) continue;
        const Vec2 back = reflect(reflect(d, nn), nn);
        CHECK(std::abs(back.x - d.x) + std::abs(back.y - d.y) <= 1e-14);
        CHECK(std::abs(reflect(d, nn).norm() - 1.0) <= 1e-14);
    }
}

TEST_CASE("Snell transmission") {
    const Vec2 n{0.0, 1.0};
    const auto straight = snell_transmit({0.0, 1.0}, n, 1.0, 2.0);
    REQUIRE(straight);
    CHECK(straight->x == doctest::Approx(0.0));
    CHECK(straight->y == doctest::Approx(1.0));

    const double sa = 0.25;
    const auto bent = snell_transmit({sa, std::sqrt(1.0 - sa * sa)}, n, 1.0, 2.0);
    REQUIRE(bent);
    CHECK(bent->x == doctest::Approx(0.5).epsilon(1e-14));
    CHECK(bent->y > 0.0);

    const double a40 = 40.0 * std::numbers::pi / 180.0;
    CHECK_FALSE(snell_transmit({std::sin(a40), std::cos(a40)}, n, 1.0, 2.0).has_value());
    const double a30 = std::numbers::pi / 6.0;
    CHECK_THROWS_AS(snell_transmit({std::sin(a30), std::cos(a30)}, n, 1.0, 2.0), GeometryError);
    CHECK_THROWS_AS(snell_transmit({1.0, 0.0}, n, 1.0, 2.0), GeometryError);
}

TEST_CASE("property: tangential slowness is preserved") {
    std::mt19937_64 rng(8);
    std::uniform_real_distribution<double> speed(0.2, 5.0), ang(0.0, 2.0 * std::numbers::pi);
    int transmitted = 0;
    for (int trial = 0; trial < 500; ++trial) {
        const double ci = speed(rng), co = speed(rng);
        const Vec2 d = unit(ang(rng)), n = unit(ang(rng));
        if (std::abs(d.dot(n)) < 1e-3) continue;
        const double sin_a = std::abs(d.cross(n));
        if (ci < co && std::abs(std::asin(sin_a) - std::asin(ci / co)) < 1e-6) continue;
        const auto t = snell_transmit(d, n, ci, co);
        if (!t) {
            CHECK(sin_a * co / ci > 1.0);
            continue;
        }
        ++transmitted;
        CHECK(std::abs(sin_a / ci - std::abs(t->cross(n)) / co) <= 1e-12);
        CHECK(std::abs(t->norm() - 1.0) <= 1e-14);
        CHECK(d.dot(n) * t->dot(n) > 0.0);
        CHECK(d.cross(n) * t->cross(n) >= 0.0);
    }
    CHECK(transmitted > 100);
}

TEST_CASE("amplitude coefficients and energy split") {
    const AmplitudeCoeffs same = amplitude_coeffs(0.7, 0.7);
    CHECK(same.reflected == 0.0);
    CHECK(same.transmitted == 1.0);
    const AmplitudeCoeffs ex = amplitude_coeffs(1.0, 0.5);
    CHECK(ex.transmitted == doctest::Approx(4.0 / 3.0).epsilon(1e-15));
    CHECK(ex.reflected == doctest::Approx(1.0 / 3.0).epsilon(1e-15));
    CHECK_THROWS_AS(amplitude_coeffs(0.0, 0.0), DegenerateError);

    CHECK(energy_split(0.7, 0.7) == 1.0);
    CHECK(energy_split(1.0, 0.5) == doctest::Approx(8.0 / 9.0).epsilon(1e-15));
    CHECK(energy_split(1.0, 0.0) == 0.0);

    std::mt19937_64 rng(2);
    std::uniform_real_distribution<double> u(1e-3, 10.0);
    for (int trial = 0; trial < 500; ++trial) {
        const double a = u(rng), b = u(rng);
        const AmplitudeCoeffs c = amplitude_coeffs(a, b);
        CHECK(std::abs(c.transmitted - c.reflected - 1.0) <= 1e-12);
        CHECK(std::abs(c.reflected * c.reflected + energy_split(a, b) - 1.0) <= 1e-12);
    }
}

TEST_CASE("property: transmitted fraction obeys the gamma bound") {
    for (double a = 0.1; a <= 5.0; a += 0.3) {
        for (double gamma = 0.05; gamma < 1.0; gamma += 0.05) {
            const double bound = 4.0 * gamma / ((1.0 + gamma) * (1.0 + gamma));
            for (double frac : {0.0, 0.3, 0.9, 1.0}) CHECK(energy_split(a, frac * gamma * a) <= bound + 1e-15);
        }
    }
}

TEST_CASE("normal slowness: scaling and the skull-ward inequality") {
    std::mt19937_64 rng(6);
    std::uniform_real_distribution<double> speed(0.2, 5.0), sine(0.0, 0.999);
    for (int trial = 0; trial < 300; ++trial) {
        const double ci = speed(rng), co = speed(rng), s = sine(rng);
        const NormalSlowness ns = normal_slowness(ci, co, s);
        const double q = s / ci;
        CHECK(ns.a == doctest::Approx(std::sqrt(1.0 / (ci * ci) - q * q)));
        if (1.0 / (co * co) < q * q) {
            CHECK(ns.total_internal_reflection);
            CHECK(ns.b == 0.0);
            continue;
        }
        CHECK(ns.b == doctest::Approx(std::sqrt(1.0 / (co * co) - q * q)));
        if (ci < co) CHECK(ns.b <= ns.a * co / ci + 1e-12);
        // tau-normalization is immaterial: the splits are degree 0 in (a, b)
        CHECK(energy_split(3.0 * ns.a, 3.0 * ns.b) == doctest::Approx(energy_split(ns.a, ns.b)).epsilon(1e-14));
    }
}

TEST_CASE("branches in a homogeneous medium are straight") {
    const Medium m(kGrid, {});
    const RayBranchGraph g = trace_branches({0.2, 0.0}, {1.0, 0.0}, m, square(), 5.0);
    REQUIRE(g.events.size() == 4);
    CHECK(count(g, RayEventKind::exit) == 2);
    for (const auto& e : g.events) {
        if (e.kind != RayEventKind::exit) continue;
        CHECK(e.t == doctest::Approx(e.x.x > 0.0 ? 0.8 : 1.2));
    }
    const RayBranchGraph short_t = trace_branches({0.2, 0.0}, {1.0, 0.0}, m, square(), 0.5);
    CHECK(count(short_t, RayEventKind::exit) == 0);
    CHECK(count(short_t, RayEventKind::expiry) == 2);
    CHECK_FALSE(short_t.has_clean_exit());
}

TEST_CASE("Example 1: a radial ray crosses the interface head-on") {
    const Medium m(kGrid, {{0.5, 0.5}});
    const RayBranchGraph g = trace_branches({0.0, 0.0}, {1.0, 0.0}, m, square(), 10.0, {4, 1e-9});
    CHECK(g.has_clean_exit());
    for (const auto& e : g.events) {
        if (e.kind == RayEventKind::transmit && e.depth == 1) {
            CHECK(e.angle == doctest::Approx(0.0));
            CHECK(e.t == doctest::Approx(1.0));
            CHECK(std::abs(e.d.y) <= 1e-15);
            CHECK(e.weight == doctest::Approx(8.0 / 9.0));
        }
        if (e.kind == RayEventKind::exit && e.parent >= 0 && g.events[static_cast<std::size_t>(e.parent)].depth == 1) {
            CHECK(e.t == doctest::Approx(1.5));
        }
    }
    check_weight_conservation(g);
}

TEST_CASE("Example 1: rays beyond the critical angle stay trapped") {
    const Medium m(kGrid, {{0.5, 0.5}});
    // tangential launch at rho = 0.45 meets the circle at sin(alpha) = 0.9 > c0
    const RayBranchGraph g = trace_branches({0.45, 0.0}, {0.0, 1.0}, m, square(), 20.0, {200, 1e-9});
    CHECK(count(g, RayEventKind::transmit) == 0);
    CHECK(count(g, RayEventKind::exit) == 0);
    CHECK_FALSE(g.has_clean_exit());
    for (const auto& e : g.events) {
        CHECK(e.weight == 1.0);
        CHECK(e.x.norm() <= 0.5 + 1e-12);
    }
    check_weight_conservation(g);
}

TEST_CASE("property: weights are conserved at every split") {
    const Medium m(kGrid, {{0.7, 2.0}, {0.5, 0.8}});
    std::mt19937_64 rng(12);
    std::uniform_real_distribution<double> pos(-0.6, 0.6), ang(0.0, 2.0 * std::numbers::pi);
    for (int trial = 0; trial < 40; ++trial) {
        const Vec2 x{pos(rng), pos(rng)};
        if (m.distance_to_interfaces(x.x, x.y) < 1e-6) continue;
        const RayBranchGraph g = trace_branches(x, unit(ang(rng)), m, square(), 3.0, {8, 1e-4});
        check_weight_conservation(g);
        for (const auto& e : g.events) {
            CHECK(e.weight >= 0.0);
            CHECK(e.weight <= 1.0);
            CHECK(e.t >= 0.0);
            CHECK(std::abs(e.d.norm() - 1.0) <= 1e-12);
        }
    }
}

TEST_CASE("branch graph text output") {
    const Medium m(kGrid, {});
    const RayBranchGraph g = trace_branches({0.0, 0.0}, {0.0, 1.0}, m, square(), 5.0);
    std::ostringstream os;
    g.write(os);
    std::istringstream is(os.str());
    std::string kind;
    double x, y, t, angle, weight;
    long parent;
    std::size_t lines = 0;
    while (is >> kind >> x >> y >> t >> angle >> weight >> parent) ++lines;
    CHECK(lines == g.events.size());
    CHECK(os.str().rfind("launch 0 0 0 0 1 -1\n", 0) == 0);
}

TEST_CASE("visibility of the paper's examples") {
    const VisibilitySampling sampling{16, 32, {}};
    const Medium ex1(kGrid, {{0.5, 0.5}});
    const Region k1 = Region::disk(kGrid, 0.0, 0.0, 0.2);
    const VisibilityReport v1 = check_visibility(k1, ex1, square(), 20.0, sampling);
    CHECK(v1.visible);
    CHECK(v1.uncovered.empty());
    CHECK(v1.samples.size() == 16 * 32);
    CHECK(v1.min_transmitted_fraction > 0.0);

    const Medium ex2(kGrid, {{0.7, 2.0}, {0.5, 1.0}});
    CHECK(check_visibility(k1, ex2, square(), 20.0, sampling).visible);

    const VisibilityReport none = check_visibility(k1, ex1, square(), 0.0, sampling);
    CHECK_FALSE(none.visible);
    CHECK(none.uncovered.size() == none.samples.size());

    const Region trapped = Region::annulus(kGrid, 0.0, 0.0, 0.4, 0.48);
    const VisibilityReport t = check_visibility(trapped, ex1, square(), 20.0, sampling);
    CHECK_FALSE(t.visible);
    CHECK_FALSE(t.uncovered.empty());
}

TEST_CASE("property: visibility is monotone in T") {
    const Medium m(kGrid, {{0.5, 0.5}});
    const Region k = Region::disk(kGrid, 0.0, 0.0, 0.2);
    const VisibilitySampling sampling{8, 16, {}};
    std::size_t prev = sampling.n_pos * sampling.n_dir + 1;
    bool seen_visible = false;
    for (double T : {0.5, 1.0, 1.5, 2.0, 3.0, 5.0, 8.0}) {
        const VisibilityReport r = check_visibility(k, m, square(), T, sampling);
        CHECK(r.uncovered.size() <= prev);
        prev = r.uncovered.size();
        if (seen_visible) CHECK(r.visible);
        seen_visible = seen_visible || r.visible;
    }
    CHECK(seen_visible);
}

TEST_CASE("visibility CSV has one row per sample") {
    const Medium m(kGrid, {});
    const VisibilityReport r = check_visibility(Region::disk(kGrid, 0.0, 0.0, 0.2), m, square(), 3.0, {4, 4, {}});
    std::ostringstream os;
    r.write_csv(os);
    const std::string s = os.str();
    CHECK(s.rfind("x,y,dx,dy,covered\n", 0) == 0);
    CHECK(static_cast<std::size_t>(std::count(s.begin(), s.end(), '\n')) == r.samples.size() + 1);
}
