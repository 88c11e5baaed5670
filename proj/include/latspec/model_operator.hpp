#pragma once
/**
 * The half-line model machinery that carries the log-periodic (Efimov)
 * counting asymptotics:
 *
 *   - symbol s_hat(t; lambda) on [-1,1] x R and its Legendre channels
 *     S_l(lambda) = 2 pi \int_{-1}^1 P_l(t) s_hat(t; lambda) dt, with the
 *     l = 0 closed form  S_0(y) = (8/sqrt 3) sinh(pi y/6) / (y cosh(pi y/2));
 *
 *   - the spectral constant lambda0: the unique positive root of
 *     S_0(lambda) = 1 (approx. 1.00624); the derived slope targets are
 *     lambda0/(2 pi) and lambda0/pi;
 *
 *   - the counting functional U(mu) = (1/4pi) sum_l (2l+1) |{ S_l > mu }|,
 *     with U(1) = lambda0/(2 pi) (only the l = 0 superlevel set is
 *     nonempty);
 *
 *   - the finite-interval operator S(r) with translation kernel
 *     s(t; y) = (1/(sqrt 3 pi^2)) / (cosh y + t/2) on (0, r) x sphere,
 *     whose eigenvalue count n(1, S(r)) grows like (lambda0/pi) r.
 */

#include "latspec/counting.hpp"
#include "latspec/types.hpp"

#include <vector>

namespace latspec {

/**
 * s_hat(t; lambda) = (2/(sqrt3 pi)) sinh(lambda arccos(t/2)) /
 *                    (sqrt(1 - t^2/4) sinh(pi lambda)),
 * even in lambda, with the lambda = 0 limit
 * 2 arccos(t/2) / (sqrt3 pi^2 sqrt(1 - t^2/4)). Throws std::domain_error
 * for |t| > 1. Stable for all lambda (exponential form past |lambda| = 30).
 */
double s_hat(double t, double lambda);

/** (8/sqrt3) sinh(pi y/6)/(y cosh(pi y/2)); limit 4 pi/(3 sqrt3) at y = 0. */
double s0_closed_form(double y);

/** Unique positive root of s0_closed_form(y) = 1; cached; residual <= 1e-12. */
double lambda0();

/** S_l(lambda) = 2 pi \int_{-1}^1 P_l(t) s_hat(t; lambda) dt (Gauss-Legendre). */
double channel_symbol(int l, double lambda, int angular_n = 64);

struct SymbolTable {
    std::vector<double> lambda_grid;
    std::vector<std::vector<double>> values;  ///< values[l][i] = S_l(lambda_grid[i])
    int l_max = 0;
};

SymbolTable build_symbol_table(const std::vector<double>& lambda_grid, int l_max,
                               int angular_n = 64);

/**
 * U(mu) = (1/4pi) sum_{l<=l_max} (2l+1) * measure{ lambda : S_l(lambda) > mu }.
 * Superlevel sets are intervals [-root, root] (channel symbols are even and
 * numerically unimodal in |lambda|); the root is found by bisection on
 * [0, lambda_window]. Throws NumericalError if a symbol is still above mu at
 * the window edge.
 */
double counting_functional(double mu, int l_max = 6, double lambda_window = 20.0,
                           int angular_n = 64);

/**
 * Per-l Nystrom matrices of S(r) on a uniform midpoint grid over (0, r) with
 * spacing r/x_n: M_l[i,j] = h * S_l-kernel(x_i - x_j), where the l-channel
 * kernel is 2 pi \int P_l(t) (1/(sqrt3 pi^2))/(cosh y + t/2) dt.
 */
std::vector<KernelOperator> build_S_r(double r, int x_n, int angular_n = 64,
                                      int l_max = 3);

/** Closed form of the l = 0 channel kernel: (4/(sqrt3 pi)) ln((2c+1)/(2c-1)), c = cosh y. */
double s_r_kernel_l0(double y);

/**
 * Counts n(1, S(r)) = sum_l (2l+1) n(1, M_l) per r (x-spacing <= x_spacing)
 * and fits the counts against r; the fitted slope approaches lambda0/pi.
 */
CountingCurve slope_S_r(const std::vector<double>& r_sequence, double x_spacing = 0.05,
                        int angular_n = 64, int l_max = 3, int threads = 1);

} // namespace latspec
