#pragma once
/**
 * The scalar lattice integral
 *
 *     S_k(z) = (2*pi)^{-3} \int_{T^3} dt / (E_k(t) - z),     z <= E_min(k),
 *
 * computed to ~1e-12 via the exponential (heat-kernel) representation
 *
 *     S_k(z) = \int_0^inf exp(-beta*s) * prod_j i0e(2*c_j*s) ds,
 *
 * where c_j = cos(k_j/2) >= 0 (k reduced into (-pi,pi]^3),
 * beta = E_min(k) - z >= 0, and i0e(x) = exp(-x) I_0(x) is the scaled
 * modified Bessel function. The integrand decays like s^{-3/2} exp(-beta*s),
 * so the rule is: composite Gauss-Legendre on [0, 1] (linear panels) and
 * [1, A] (geometric panels), plus an analytic s^{-3/2} + s^{-5/2} tail with
 * erfc moments beyond the cutoff A. Two panel counts (8 and 16 per segment
 * unit) must agree to 1e-11 relative or the evaluation is rejected.
 *
 * This scalar is the closed-form core of every zero-range oracle: the
 * rank-one Birman-Schwinger eigenvalue is mu * S_k(z), the Watson-type
 * constant is W = 2 * S_0(0), and the resonance coupling is
 * mu_star = 1 / S_0(0) = 2 / W.
 *
 * Domain notes (precision cliffs, handled explicitly):
 *   - some c_j == 0 (a quasimomentum component equal to pi) makes the
 *     integrand decay only like s^{-1} exp(-beta*s) in that direction
 *     (a two-dimensional van Hove line); S_k(E_min) itself diverges there,
 *     so beta below 6e-12 is rejected as a threshold violation;
 *   - otherwise the cutoff adapts: A = 1e8 with the analytic tail when all
 *     c_j > 1e-3, else A = min(60/beta, 1e13) which makes the tail < 1e-17.
 */

#include "latspec/types.hpp"

namespace latspec {

/** exp(-x) * I_0(x) for x >= 0 (no overflow for any finite x). */
double scaled_bessel_i0(double x);

/**
 * S_k(z) as above. Throws NumericalError if z > E_min(k) (threshold
 * violation), if the flat-direction guard trips, or if the two panel
 * refinements disagree beyond 1e-11 relative.
 */
double scalar_lattice_integral(const Vec3& k, double z);

/** Watson-type constant W = (2*pi)^{-3} \int dt / eps(t) = 2 * S_0(0), cached. */
double watson_constant();

} // namespace latspec
