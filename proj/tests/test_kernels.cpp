#include <doctest.h>

#include <cmath>
#include <omp.h>
#include <vector>

#include "support.hpp"
#include "thermotomo/kernels.hpp"

using namespace thermotomo;
namespace k = thermotomo::kernels;

namespace {

struct Fixture {
    Grid g{37, 29, 0.05, -0.9, -0.7};
    ScalarField a = support::noise(g, 1), b = support::noise(g, 2), c2 = support::noise(g, 3, 0.5);
    Region disk = Region::disk(g, 0.0, 0.0, 0.5);
    Fixture() {
        for (std::size_t p = 0; p < g.size(); ++p) c2[p] += 1.5;
        omp_set_num_threads(4);
    }
};

bool same(const ScalarField& x, const ScalarField& y) {
    for (std::size_t p = 0; p < x.size(); ++p) {
        if (x[p] != y[p]) return false;
    }
    return true;
}

}  // namespace

TEST_CASE_FIXTURE(Fixture, "parallel stencils match the serial reference exactly") {
    ScalarField par(g), ser(g);
    k::wave_operator(g, a.values(), c2.values(), par.values());
    k::serial::wave_operator(g, a.values(), c2.values(), ser.values());
    CHECK(same(par, ser));

    ScalarField damping = support::noise(g, 4, 2.0);
    for (std::size_t p = 0; p < g.size(); ++p) damping[p] = std::abs(damping[p]);
    const k::IndexBox box = k::interior_box(g);
    for (bool damped : {false, true}) {
        ScalarField pn(g, 7.0), sn(g, 7.0);
        const std::span<const double> d = damped ? damping.values() : std::span<const double>{};
        const double mp = k::leapfrog(g, box, a.values(), b.values(), c2.values(), d, 0.01, pn.values());
        const double ms = k::serial::leapfrog(g, box, a.values(), b.values(), c2.values(), d, 0.01, sn.values());
        CHECK(same(pn, sn));
        CHECK(mp == ms);
        CHECK(pn.at(0, 0) == 7.0);
    }

    ScalarField pd(g), sd(g);
    k::dirichlet_stencil(g, disk.labels(), disk.interior(), a.values(), pd.values());
    k::serial::dirichlet_stencil(g, disk.labels(), disk.interior(), a.values(), sd.values());
    CHECK(same(pd, sd));

    ScalarField py = b, sy = b;
    k::axpy(disk.interior(), -0.3, a.values(), py.values());
    k::serial::axpy(disk.interior(), -0.3, a.values(), sy.values());
    CHECK(same(py, sy));
}

TEST_CASE_FIXTURE(Fixture, "parallel reductions match the serial reference to round-off") {
    const auto& nodes = disk.interior();
    CHECK(k::dot(nodes, a.values(), b.values()) ==
          doctest::Approx(k::serial::dot(nodes, a.values(), b.values())).epsilon(1e-12));
    CHECK(k::edge_energy(g, disk.labels(), a.values()) ==
          doctest::Approx(k::serial::edge_energy(g, disk.labels(), a.values())).epsilon(1e-12));
    CHECK(k::weighted_square_sum(nodes, c2.values(), a.values()) ==
          doctest::Approx(k::serial::weighted_square_sum(nodes, c2.values(), a.values())).epsilon(1e-12));
}

TEST_CASE_FIXTURE(Fixture, "leapfrog reports non-finite values") {
    ScalarField bad = b, next(g);
    bad.at(5, 5) = std::nan("");
    CHECK_FALSE(std::isfinite(k::leapfrog(g, k::interior_box(g), a.values(), bad.values(), c2.values(), {}, 0.01,
                                          next.values())));
}

TEST_CASE("thread count is positive") { CHECK(k::thread_count() >= 1); }
