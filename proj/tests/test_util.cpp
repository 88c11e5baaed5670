#include "doctest.h"

#include "latspec/counting.hpp"
#include "latspec/lattice_sum.hpp"
#include "latspec/quadrature.hpp"
#include "latspec/torus.hpp"

#include <atomic>
#include <cmath>
#include <random>
#include <stdexcept>
#include <vector>

using namespace latspec;

namespace {

Matrix random_symmetric(int n, unsigned seed) {
    std::mt19937 rng(seed);
    std::normal_distribution<double> g(0.0, 1.0);
    Matrix a(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) a(i, j) = g(rng);
    return Matrix(0.5 * (a + a.transpose()));
}

/** Plain Riemann (trapezoid-on-torus) value of S_k(z), spectrally accurate. */
double riemann_lattice_sum(const Vec3& k, double z, int n) {
    const TorusGrid grid = TorusGrid::uniform(n);
    double acc = 0.0;
    for (const Vec3& t : grid.nodes) acc += 1.0 / (twobody_symbol(k, t) - z);
    return acc / grid.size();
}

} // namespace

TEST_SUITE("util") {

TEST_CASE("Gauss-Legendre rules: exactness, symmetry, caching") {
    const GaussLegendre& rule = gauss_legendre(8);
    REQUIRE(rule.nodes.size() == 8);

    double mass = 0.0, second = 0.0, deg14 = 0.0;
    for (int i = 0; i < 8; ++i) {
        mass += rule.weights[i];
        second += rule.weights[i] * rule.nodes[i] * rule.nodes[i];
        deg14 += rule.weights[i] * std::pow(rule.nodes[i], 14);
    }
    CHECK(mass == doctest::Approx(2.0).epsilon(1e-14));
    CHECK(second == doctest::Approx(2.0 / 3.0).epsilon(1e-14));
    CHECK(deg14 == doctest::Approx(2.0 / 15.0).epsilon(1e-13));  // degree 15 rule

    for (int i = 0; i < 4; ++i) {
        CHECK(rule.nodes[i] == doctest::Approx(-rule.nodes[7 - i]).epsilon(1e-14));
        CHECK(rule.weights[i] == doctest::Approx(rule.weights[7 - i]).epsilon(1e-14));
    }
    CHECK(&gauss_legendre(8) == &rule);  // cached, stable address
}

TEST_CASE("Legendre recurrence agrees with the standard library") {
    double p[7];
    std::mt19937 rng(31);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (int trial = 0; trial < 50; ++trial) {
        const double x = u(rng);
        legendre_all(6, x, p);
        for (int l = 0; l <= 6; ++l)
            CHECK(p[l] == doctest::Approx(std::legendre(l, x)).epsilon(1e-13));
    }
    legendre_all(6, 1.0, p);
    for (int l = 0; l <= 6; ++l) CHECK(p[l] == doctest::Approx(1.0));
}

TEST_CASE("inertia matches the eigenvalue signs of random symmetric matrices") {
    for (unsigned seed = 0; seed < 6; ++seed) {
        const Matrix a = random_symmetric(40, 100 + seed);
        const Inertia inertia = symmetric_inertia(a);
        Eigen::SelfAdjointEigenSolver<Matrix> es(a);
        int neg = 0, pos = 0;
        for (int i = 0; i < 40; ++i) (es.eigenvalues()[i] < 0.0 ? neg : pos)++;
        CHECK(inertia.negative == neg);
        CHECK(inertia.positive == pos);
        CHECK(inertia.zero == 0);
        CHECK(inertia.negative + inertia.zero + inertia.positive == 40);
    }
}

TEST_CASE("inertia handles indefinite 2x2 pivots and exact zero modes") {
    Matrix swap(2, 2);
    swap << 0, 1, 1, 0;  // eigenvalues +-1: forces a 2x2 Bunch-Kaufman pivot
    const Inertia i1 = symmetric_inertia(swap);
    CHECK(i1.negative == 1);
    CHECK(i1.positive == 1);
    CHECK(i1.zero == 0);

    Matrix d = Matrix::Zero(4, 4);
    d.diagonal() << 3.0, -2.0, 0.0, 5.0;
    const Inertia i2 = symmetric_inertia(d);
    CHECK(i2.negative == 1);
    CHECK(i2.zero == 1);
    CHECK(i2.positive == 2);
}

TEST_CASE("counting helpers agree with sorted eigenvalues") {
    const Matrix a = random_symmetric(30, 77);
    Eigen::SelfAdjointEigenSolver<Matrix> es(a);
    for (double lam : {-2.0, -0.5, 0.0, 0.3, 1.7}) {
        int above = 0, below = 0;
        for (int i = 0; i < 30; ++i) {
            if (es.eigenvalues()[i] > lam) ++above;
            if (es.eigenvalues()[i] < lam) ++below;
        }
        CHECK(count_eigenvalues_above(a, lam) == above);
        CHECK(count_eigenvalues_below(a, lam) == below);
    }
}

TEST_CASE("KernelOperator spectral helpers on a known matrix") {
    KernelOperator op;
    op.matrix = Matrix(2, 2);
    op.matrix << 2, 1, 1, 2;  // eigenvalues 1 and 3
    op.label = "toy";
    CHECK(op.asymmetry() == 0.0);
    CHECK(op.top_eigenvalue() == doctest::Approx(3.0).epsilon(1e-14));
    const Vector eigs = op.eigenvalues();
    CHECK(eigs[0] == doctest::Approx(1.0));
    CHECK(eigs[1] == doctest::Approx(3.0));
    const auto [top, vec] = op.top_eigenpair();
    CHECK(top == doctest::Approx(3.0));
    CHECK(std::abs(vec[0]) == doctest::Approx(std::sqrt(0.5)));
    CHECK(vec.norm() == doctest::Approx(1.0));
}

TEST_CASE("least-squares slope of an exact line, with zero residual") {
    const CountingCurve fit =
        fit_counting_curve({1.0, 2.0, 3.0, 4.0}, {5, 7, 9, 11});  // count = 3 + 2x
    CHECK(fit.slope == doctest::Approx(2.0).epsilon(1e-13));
    CHECK(std::abs(fit.stderr_slope) <= 1e-10);
    CHECK_THROWS_AS(fit_counting_curve({1.0}, {2}), std::invalid_argument);
}

TEST_CASE("parallel_for covers every index once and propagates exceptions") {
    std::vector<int> hits(500, 0);
    std::atomic<int> total{0};
    parallel_for(500, 4, [&](int i) {
        hits[i] += 1;
        total.fetch_add(1);
    });
    CHECK(total.load() == 500);
    for (int h : hits) CHECK(h == 1);

    parallel_for(3, 1, [&](int i) { hits[i] += 1; });  // serial path
    CHECK(hits[0] == 2);

    CHECK_THROWS_AS(parallel_for(8, 3,
                                 [](int i) {
                                     if (i == 5) throw std::runtime_error("boom");
                                 }),
                    std::runtime_error);
}

TEST_CASE("scaled Bessel i0e against the standard library and asymptotics") {
    CHECK(scaled_bessel_i0(0.0) == doctest::Approx(1.0));
    for (double x : {0.5, 1.0, 4.0, 10.0, 50.0}) {
        const double reference = std::cyl_bessel_i(0.0, x) * std::exp(-x);
        CHECK(scaled_bessel_i0(x) == doctest::Approx(reference).epsilon(1e-12));
    }
    // i0e(x) ~ 1/sqrt(2 pi x) for large x; no overflow anywhere.
    const double huge = 1e12;
    CHECK(scaled_bessel_i0(huge) ==
          doctest::Approx(1.0 / std::sqrt(2.0 * M_PI * huge)).epsilon(1e-6));
}

TEST_CASE("scalar lattice integral matches a plain Riemann sum off threshold") {
    // Far enough below the band that the periodic summand is analytic and
    // the n = 32 Riemann sum is converged to ~1e-12.
    const Vec3 k(1.0, 0.5, -0.3);
    const double emin = twobody_band(k).e_min;
    for (double gap : {0.5, 2.0, 5.0}) {
        const double z = emin - gap;
        const double via_integral = scalar_lattice_integral(k, z);
        const double via_riemann = riemann_lattice_sum(k, z, 32);
        CHECK(via_integral == doctest::Approx(via_riemann).epsilon(1e-9));
    }
}

TEST_CASE("scalar lattice integral: monotone in z, Watson constant frozen value") {
    const Vec3 k(0.4, 0.0, 1.2);
    const double emin = twobody_band(k).e_min;
    double prev = 0.0;
    for (double gap : {4.0, 2.0, 1.0, 0.5, 0.25}) {
        const double s = scalar_lattice_integral(k, emin - gap);
        CHECK(s > prev);  // increases toward threshold
        prev = s;
    }
    CHECK(watson_constant() == doctest::Approx(0.50546201971732600605).epsilon(1e-12));
    CHECK(scalar_lattice_integral(Vec3::Zero(), 0.0) ==
          doctest::Approx(0.5 * 0.50546201971732600605).epsilon(1e-12));
}

TEST_CASE("scalar lattice integral rejects its precision cliffs") {
    // Above the band minimum: not a resolvent point.
    CHECK_THROWS_AS(scalar_lattice_integral(Vec3::Zero(), 0.5), NumericalError);
    // Flat direction (a component at pi) with z at threshold: log-divergent.
    const Vec3 flat(M_PI, M_PI, M_PI);
    const double emin = twobody_band(flat).e_min;
    CHECK_THROWS_AS(scalar_lattice_integral(flat, emin), NumericalError);
    // ... but fine a finite distance below.
    CHECK(scalar_lattice_integral(flat, emin - 1.0) ==
          doctest::Approx(riemann_lattice_sum(flat, emin - 1.0, 32)).epsilon(1e-9));
}

} // TEST_SUITE("util")
