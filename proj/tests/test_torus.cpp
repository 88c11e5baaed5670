#include "doctest.h"

#include "latspec/torus.hpp"

#include <cmath>
#include <random>

using namespace latspec;

TEST_SUITE("torus") {

TEST_CASE("reduce_angle maps onto (-pi, pi] and is 2pi-periodic") {
    CHECK(reduce_angle(0.0) == doctest::Approx(0.0));
    CHECK(reduce_angle(M_PI) == doctest::Approx(M_PI));
    CHECK(reduce_angle(-M_PI) == doctest::Approx(M_PI));  // boundary maps to +pi
    CHECK(std::abs(reduce_angle(2.0 * M_PI)) <= 1e-12);
    CHECK(reduce_angle(-1.5 * M_PI) == doctest::Approx(0.5 * M_PI));

    std::mt19937 rng(11);
    std::uniform_real_distribution<double> u(-M_PI, M_PI);
    std::uniform_int_distribution<int> shift(-5, 5);
    for (int trial = 0; trial < 200; ++trial) {
        const double x = u(rng);
        const double y = reduce_angle(x + 2.0 * M_PI * shift(rng));
        CHECK(y == doctest::Approx(x).epsilon(1e-12));
        CHECK(y > -M_PI - 1e-15);
        CHECK(y <= M_PI + 1e-15);
    }
}

TEST_CASE("dispersion: values, range, small-k quadratic behavior") {
    CHECK(dispersion(Vec3::Zero()) == 0.0);
    CHECK(dispersion(Vec3(M_PI, M_PI, M_PI)) == doctest::Approx(6.0));
    CHECK(dispersion(Vec3(M_PI, 0, 0)) == doctest::Approx(2.0));

    const Vec3 k(1e-4, -2e-4, 0.5e-4);
    CHECK(dispersion(k) == doctest::Approx(0.5 * k.squaredNorm()).epsilon(1e-7));

    std::mt19937 rng(12);
    std::uniform_real_distribution<double> u(-M_PI, M_PI);
    for (int trial = 0; trial < 100; ++trial) {
        const Vec3 q(u(rng), u(rng), u(rng));
        const double e = dispersion(q);
        CHECK(e >= 0.0);
        CHECK(e <= 6.0);
        CHECK(dispersion(-q) == doctest::Approx(e).epsilon(1e-15));
    }
}

TEST_CASE("two-body symbol splits as eps(k/2 - q) + eps(k/2 + q)") {
    std::mt19937 rng(13);
    std::uniform_real_distribution<double> u(-M_PI, M_PI);
    for (int trial = 0; trial < 100; ++trial) {
        const Vec3 k(u(rng), u(rng), u(rng)), q(u(rng), u(rng), u(rng));
        const double split = dispersion(0.5 * k - q) + dispersion(0.5 * k + q);
        CHECK(twobody_symbol(k, q) == doctest::Approx(split).epsilon(1e-14));
    }
}

TEST_CASE("two-body band edges are attained and bracket the symbol") {
    std::mt19937 rng(14);
    std::uniform_real_distribution<double> u(-M_PI, M_PI);
    for (int trial = 0; trial < 30; ++trial) {
        const Vec3 k(u(rng), u(rng), u(rng));
        const TwoBodyBand band = twobody_band(k);
        // The minimizer is q = 0 for |k_j| <= pi.
        CHECK(twobody_symbol(k, Vec3::Zero()) == doctest::Approx(band.e_min).epsilon(1e-14));
        CHECK(band.e_min >= -1e-14);
        CHECK(band.e_max <= 12.0 + 1e-14);
        for (int s = 0; s < 50; ++s) {
            const Vec3 q(u(rng), u(rng), u(rng));
            const double e = twobody_symbol(k, q);
            CHECK(e >= band.e_min - 1e-12);
            CHECK(e <= band.e_max + 1e-12);
        }
    }
    CHECK(twobody_band(Vec3::Zero()).e_min == doctest::Approx(0.0));
    CHECK(twobody_band(Vec3::Zero()).e_max == doctest::Approx(12.0));
}

TEST_CASE("three-body symbol decomposes into the printed three dispersions") {
    std::mt19937 rng(15);
    std::uniform_real_distribution<double> u(-M_PI, M_PI);
    for (int trial = 0; trial < 100; ++trial) {
        const Vec3 K(u(rng), u(rng), u(rng)), p(u(rng), u(rng), u(rng)),
            q(u(rng), u(rng), u(rng));
        const double expected =
            dispersion(K - p) + dispersion(0.5 * p - q) + dispersion(0.5 * p + q);
        CHECK(threebody_symbol(K, p, q) == doctest::Approx(expected).epsilon(1e-14));
    }
}

TEST_CASE("three-body band edges dominate a coarse scan and random probes") {
    std::mt19937 rng(16);
    std::uniform_real_distribution<double> u(-M_PI, M_PI);
    const Vec3 K(0.9, -0.4, 2.1);
    const TwoBodyBand band = threebody_band(K);

    const TorusGrid scan = TorusGrid::uniform(9);
    double lo = 1e300, hi = -1e300;
    for (const Vec3& p : scan.nodes)
        for (const Vec3& q : scan.nodes) {
            const double e = threebody_symbol(K, p, q);
            lo = std::min(lo, e);
            hi = std::max(hi, e);
        }
    CHECK(band.e_min <= lo + 1e-9);
    CHECK(band.e_max >= hi - 1e-9);
    CHECK(lo - band.e_min <= 0.5);  // coarse scan gets within the grid gap
    CHECK(band.e_max - hi <= 0.5);

    for (int s = 0; s < 500; ++s) {
        const Vec3 p(u(rng), u(rng), u(rng)), q(u(rng), u(rng), u(rng));
        const double e = threebody_symbol(K, p, q);
        CHECK(e >= band.e_min - 1e-9);
        CHECK(e <= band.e_max + 1e-9);
    }

    CHECK(std::abs(threebody_band(Vec3::Zero()).e_min) <= 1e-8);
}

TEST_CASE("TorusGrid geometry: nodes, weight, negation closure, membership") {
    const TorusGrid grid = TorusGrid::uniform(6);
    CHECK(grid.size() == 216);
    CHECK(grid.n_per_axis == 6);
    CHECK(grid.weight == doctest::Approx(std::pow(2.0 * M_PI / 6.0, 3)));
    CHECK(grid.nodes[grid.origin_index()].norm() == 0.0);

    for (double a : grid.axis) {
        CHECK(a > -M_PI - 1e-15);
        CHECK(a <= M_PI + 1e-15);
    }

    for (int i = 0; i < grid.size(); ++i) {
        CHECK(grid.contains(grid.nodes[i]));
        const Vec3 neg = reduce_torus(-grid.nodes[i]);
        CHECK((grid.nodes[grid.negation_index(i)] - neg).norm() <= 1e-12);
    }
    CHECK_FALSE(grid.contains(Vec3(0.3, 0.0, 0.0)));

    // index() is the row-major layout of nodes.
    for (int ix = 0; ix < 6; ++ix)
        for (int iy = 0; iy < 6; ++iy)
            for (int iz = 0; iz < 6; ++iz) {
                const Vec3& node = grid.nodes[grid.index(ix, iy, iz)];
                CHECK(node[0] == doctest::Approx(grid.axis[ix]));
                CHECK(node[1] == doctest::Approx(grid.axis[iy]));
                CHECK(node[2] == doctest::Approx(grid.axis[iz]));
            }
}

} // TEST_SUITE("torus")
