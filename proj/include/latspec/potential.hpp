#pragma once
/**
 * Finitely supported lattice pair potentials and their momentum kernels.
 *
 * A potential is a finite, even, nonnegative coefficient table vhat(s) on
 * Z^3 together with a global coupling mu >= 0; the effective coefficient of
 * site s is mu * vhat(s). Momentum-space kernels:
 *
 *     v(p)      = (2*pi)^{-3/2} sum_s  mu*vhat(s)        e^{i(p,s)}
 *     v^1/2(p)  = (2*pi)^{-3/2} sum_s  sqrt(mu*vhat(s))  e^{i(p,s)}
 *
 * Both sums are real and even because the coefficients are (the square root
 * is taken on the lattice coefficients, not on v(p); this is what makes the
 * convolution operator built from v^1/2 an exact matrix square root of the
 * one built from v on any grid without aliasing).
 */

#include "latspec/types.hpp"

#include <array>
#include <map>
#include <vector>

namespace latspec {

struct LatticePotential {
    /** Shape coefficients vhat(s) >= 0, even in s, finite support. */
    std::map<std::array<int, 3>, double> coefficients;
    /** Global coupling multiplying every coefficient. */
    double mu = 1.0;

    /** vhat(0) = 1 times coupling mu (rank-one momentum kernel). */
    static LatticePotential zero_range(double mu);
    /** vhat(0) = a, vhat(+-e_j) = b, coupling mu. */
    static LatticePotential nearest_neighbor(double a, double b, double mu = 1.0);
    /**
     * Explicit coefficient table {(sx, sy, sz, value)}. Rejects negative
     * values and tables that are not even (every site must come with its
     * mirror at equal value; a site may be listed once per +-s pair).
     */
    static LatticePotential table(const std::vector<std::array<double, 4>>& entries,
                                  double mu);

    /** Same shape with a different coupling. */
    LatticePotential with_mu(double new_mu) const;

    double momentum_kernel(const Vec3& p) const;
    double halfpower_kernel(const Vec3& p) const;

    /** max |s|_inf over the support (0 for the empty potential). */
    int max_support() const;
    /** Support sites in deterministic (lexicographic) order. */
    std::vector<std::array<int, 3>> support() const;
    /** Effective coefficient mu * vhat(s) (0 off support). */
    double effective_coefficient(const std::array<int, 3>& s) const;

private:
    void validate() const;  ///< evenness, nonnegativity, mu >= 0
};

} // namespace latspec
