#pragma once
/**
 * Gauss-Legendre rules on [-1, 1], computed once per order by Golub-Welsch
 * (eigendecomposition of the Jacobi matrix of the Legendre three-term
 * recurrence) and cached. Also the Legendre polynomial recurrence used by
 * the partial-wave (channel) reductions.
 */

#include "latspec/types.hpp"

#include <vector>

namespace latspec {

struct GaussLegendre {
    std::vector<double> nodes;    ///< ascending in (-1, 1)
    std::vector<double> weights;  ///< sum = 2
};

/** Cached n-point Gauss-Legendre rule (thread-safe initialization). */
const GaussLegendre& gauss_legendre(int n);

/** P_0..P_lmax at x by the three-term recurrence; out must hold lmax+1 values. */
void legendre_all(int lmax, double x, double* out);

} // namespace latspec
