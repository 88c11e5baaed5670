#pragma once
/**
 * Symmetric-operator plumbing shared by every module:
 *
 *   - KernelOperator: dense symmetric Nystrom discretization of an integral
 *     operator, entries M[i,j] = sqrt(w_i) * Kernel(x_i, x_j) * sqrt(w_j),
 *     so matrix eigenvalues approximate operator eigenvalues;
 *
 *   - eigenvalue counting n(lambda, A) = #{ eigenvalues of A > lambda }
 *     (the max-min counting function), computed either from a full
 *     eigendecomposition (small matrices) or from the inertia of A - lambda*I
 *     via a Bunch-Kaufman LDL^T factorization (large matrices, counts only);
 *
 *   - CountingCurve: (parameter, count) pairs with a least-squares slope,
 *     the common currency of all asymptotics checks.
 */

#include "latspec/types.hpp"

#include <functional>
#include <string>
#include <vector>

namespace latspec {

struct KernelOperator {
    Matrix matrix;      ///< dense symmetric, quadrature weights folded in
    std::string label;  ///< provenance, e.g. "G(k,z) n=16"

    /** Largest |M - M^T| entry (symmetry invariant; ~1e-14 expected). */
    double asymmetry() const;
    /** All eigenvalues, ascending (symmetric eigensolver). */
    Vector eigenvalues() const;
    double top_eigenvalue() const;
    /** Top eigenpair (vector has unit Euclidean norm). */
    std::pair<double, Vector> top_eigenpair() const;
};

/** Inertia (n_negative, n_zero, n_positive) of a symmetric matrix via LDL^T. */
struct Inertia {
    int negative = 0, zero = 0, positive = 0;
};
Inertia symmetric_inertia(Matrix a);

/** n(lambda, A): number of eigenvalues strictly above lambda. */
int count_eigenvalues_above(const Matrix& a, double lambda);
/** Number of eigenvalues strictly below lambda. */
int count_eigenvalues_below(const Matrix& a, double lambda);

struct CountingCurve {
    std::vector<double> abscissa;
    std::vector<int> counts;
    double slope = 0.0;
    double stderr_slope = 0.0;
};

/** Ordinary least squares of counts vs abscissa; needs >= 3 points for stderr. */
CountingCurve fit_counting_curve(std::vector<double> abscissa, std::vector<int> counts);

/**
 * Run f(i) for i in [0, n) on up to `threads` worker threads (work stealing
 * by atomic counter). f must be safe to call concurrently; results should be
 * written to preallocated per-index slots so output order is deterministic.
 */
void parallel_for(int n, int threads, const std::function<void(int)>& f);

} // namespace latspec
