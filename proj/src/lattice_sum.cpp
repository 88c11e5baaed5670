#include "latspec/lattice_sum.hpp"
#include "latspec/quadrature.hpp"
#include "latspec/torus.hpp"

#include <gsl/gsl_errno.h>
#include <gsl/gsl_sf_bessel.h>

#include <algorithm>
#include <cmath>

namespace latspec {

double scaled_bessel_i0(double x) {
    // GSL's scaled I0 is accurate for all x >= 0 and cannot overflow; the
    // handler is disabled so a (never expected) failure surfaces as a code.
    static const int once = [] { gsl_set_error_handler_off(); return 0; }();
    (void)once;
    gsl_sf_result res;
    if (gsl_sf_bessel_I0_scaled_e(x, &res) != GSL_SUCCESS)
        throw NumericalError("scaled_bessel_i0: GSL evaluation failed");
    return res.val;
}

namespace {

struct Integrand {
    double beta;
    double c[3];

    double operator()(double s) const {
        return std::exp(-beta * s) * scaled_bessel_i0(2.0 * c[0] * s) *
               scaled_bessel_i0(2.0 * c[1] * s) * scaled_bessel_i0(2.0 * c[2] * s);
    }
};

double panel(const Integrand& f, const GaussLegendre& gl, double a, double b) {
    const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
    double acc = 0.0;
    for (size_t j = 0; j < gl.nodes.size(); ++j)
        acc += gl.weights[j] * f(mid + half * gl.nodes[j]);
    return half * acc;
}

/** Composite rule: npan linear panels on [0,1], 3*npan geometric on [1,A]. */
double composite(const Integrand& f, double A, int npan) {
    const GaussLegendre& gl = gauss_legendre(48);
    double acc = 0.0;
    for (int i = 0; i < npan; ++i)
        acc += panel(f, gl, double(i) / npan, double(i + 1) / npan);
    const int m = 3 * npan;
    const double step = std::log(A) / m;
    for (int i = 0; i < m; ++i)
        acc += panel(f, gl, std::exp(i * step), std::exp((i + 1) * step));
    return acc;
}

} // namespace

double scalar_lattice_integral(const Vec3& k, double z) {
    const Vec3 kr = reduce_torus(k);
    Integrand f;
    double emin = 0.0;
    for (int j = 0; j < 3; ++j) {
        f.c[j] = std::cos(0.5 * kr[j]);  // >= 0 since kr[j] in (-pi, pi]
        emin += 2.0 * (1.0 - f.c[j]);
    }
    double beta = emin - z;
    if (beta < -1e-13 * std::max(1.0, std::abs(emin)))
        throw NumericalError("scalar_lattice_integral: z above E_min(k) (threshold violation)");
    beta = std::max(beta, 0.0);
    f.beta = beta;

    const double cmin = std::min({f.c[0], f.c[1], f.c[2]});
    double A;
    bool analytic_tail;
    if (cmin > 1e-3) {
        A = 1e8;
        analytic_tail = beta * A <= 40.0;
    } else {
        // Flat direction: the integrand decays only through exp(-beta*s);
        // push the cutoff until the remainder is below ~1e-17.
        if (beta < 6e-12)
            throw NumericalError(
                "scalar_lattice_integral: flat direction (|k_j| = pi) at threshold; "
                "S_k diverges as z -> E_min(k)");
        A = std::min(60.0 / beta, 1e13);
        analytic_tail = false;
    }

    // Tail beyond A from the asymptotics i0e(x) ~ (2*pi*x)^{-1/2}(1 + 1/(8x)):
    //   f(s) ~ exp(-beta*s) (4*pi*s)^{-3/2} (c1 c2 c3)^{-1/2} (1 + sum_j 1/(16 c_j s)).
    double tail = 0.0;
    if (analytic_tail) {
        const double sqb = std::sqrt(beta);
        const double ebA = std::exp(-beta * A);
        const double t32 =
            2.0 / std::sqrt(A) * ebA - 2.0 * std::sqrt(M_PI) * sqb * std::erfc(sqb * std::sqrt(A));
        const double t52 = (2.0 / 3.0) * (std::pow(A, -1.5) * ebA - beta * t32);
        const double cprod = f.c[0] * f.c[1] * f.c[2];
        const double csum = 1.0 / (16.0 * f.c[0]) + 1.0 / (16.0 * f.c[1]) + 1.0 / (16.0 * f.c[2]);
        tail = std::pow(4.0 * M_PI, -1.5) / std::sqrt(cprod) * (t32 + csum * t52);
    }

    const double q1 = composite(f, A, 8);
    const double q2 = composite(f, A, 16);
    if (std::abs(q1 - q2) > 1e-11 * std::max(1.0, std::abs(q2)))
        throw NumericalError("scalar_lattice_integral: panel refinement did not converge");
    return q2 + tail;
}

double watson_constant() {
    static const double w = 2.0 * scalar_lattice_integral(Vec3::Zero(), 0.0);
    return w;
}

} // namespace latspec
