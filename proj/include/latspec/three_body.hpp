#pragma once
/**
 * Three-particle fiber machinery:
 *
 *   - essential spectrum bottom tau(K) = min( min_p [z(p) + eps(K-p)],
 *     E_min(K) ) with z(p) the two-body dispersion and [E_min, E_max] the
 *     band of the three-body symbol;
 *
 *   - the fiber Hamiltonian H(K) = diag(E(K; p, q)) - V1 - V2 - V3 on the
 *     (p, q) double grid, where V1 acts as a convolution in q at fixed p,
 *     V2 as a convolution in p at fixed q, and V3 as a convolution along
 *     the third pairing (it conserves sigma = p + q; on the index grid the
 *     base-n digit identity jq = ip + iq - jp mod n realizes the
 *     grid-preserving substitution) — available matrix-free (apply_H) and
 *     dense for tiny grids (n <= 4);
 *
 *   - exact tiny-grid counting: N_direct = #{ eig H(K) < z } equals
 *     N_bs = n(1, F (A2 + A3) F) with A_a = R^{1/2} V_a R^{1/2},
 *     R = (H0 - z)^{-1}, and F = (I - A1)^{-1/2} block-diagonal over the
 *     spectator momentum (fiber-wise Birman-Schwinger transform; requires
 *     the top eigenvalue of A1 below 1, i.e. z below the discrete channel
 *     threshold);
 *
 *   - the reduced radial model operator T1(delta, rho) whose integer counts
 *     grow like (lambda0 / 2 pi) |log rho| as rho -> 0: per-l kernels
 *
 *       K_l(p,q) = (2/pi) (3p^2/4 + rho)^{-1/4} (3q^2/4 + rho)^{-1/4}
 *                  \int_{-1}^{1} P_l(t) / (p^2 + pqt + q^2 + rho) dt
 *
 *     discretized on a log-midpoint grid over [0.3 sqrt(rho), delta] with
 *     the measure p^2 dp folded into symmetric weights.
 */

#include "latspec/counting.hpp"
#include "latspec/potential.hpp"
#include "latspec/torus.hpp"
#include "latspec/two_body.hpp"
#include "latspec/types.hpp"

#include <optional>
#include <string>
#include <vector>

namespace latspec {

struct EssentialSpectrumReport {
    Vec3 K = Vec3::Zero();
    double tau = 0.0;
    enum class Branch { two_body_branch, band_bottom } branch = Branch::band_bottom;
    TwoBodyBand band;  ///< [E_min(K), E_max(K)] of the three-body symbol

    std::string branch_name() const {
        return branch == Branch::two_body_branch ? "two-body-branch" : "band-bottom";
    }
};

/** Two-body dispersion z(p) sampled over an evaluation grid (nullopt = no bound state). */
struct DispersionTable {
    TorusGrid grid;
    std::vector<std::optional<double>> z;
};

/** z(p) for every node of eval_grid, each solved on a fixed n-point solve grid. */
DispersionTable compute_dispersion_table(const LatticePotential& pot,
                                         const TorusGrid& eval_grid,
                                         int solve_n = 16);

EssentialSpectrumReport tau_from_table(const DispersionTable& table, const Vec3& K);

/** Bottom of the essential spectrum at total quasimomentum K. */
EssentialSpectrumReport tau(const LatticePotential& pot, const Vec3& K,
                            const TorusGrid& eval_grid, int solve_n = 16);

/**
 * Matrix-free H(K) action on a vector indexed by (p, q) as i = ip * N + iq.
 * K must be a grid node (the V3 substitution must preserve the grid);
 * otherwise NumericalError.
 */
Vector apply_H(const LatticePotential& pot, const Vec3& K, const TorusGrid& grid,
               const Vector& vector);

/** Dense H(K) for tiny grids (n <= 4; the dimension is n^6). */
Matrix build_dense_H(const LatticePotential& pot, const Vec3& K, const TorusGrid& grid);

/**
 * Largest z (to ~1e-10) with top-eig A1(z) < 1: below it the fiber-wise
 * Birman-Schwinger transform exists. Bisection from z_lo (default: kinetic
 * minimum minus 60).
 */
double discrete_channel_threshold(const LatticePotential& pot, const Vec3& K,
                                  const TorusGrid& grid);

struct TinyCountReport {
    int n_direct = 0;      ///< #{ eigenvalues of dense H(K) below z }
    int n_bs = 0;          ///< n(1, F (A2+A3) F)
    double channel_top = 0.0;  ///< max over spectator blocks of top-eig A1
};

/**
 * Both counts, asserting exact integer equality (NumericalError on mismatch,
 * which would indicate a broken invariant, not a tolerance issue). Requires
 * n <= 4 and z below the discrete channel threshold.
 */
TinyCountReport count_three_body_tiny(const LatticePotential& pot, const Vec3& K,
                                      double z, const TorusGrid& grid);

struct ModelOperatorT1 {
    double rho = 0.0;
    double delta = 1.0;
    std::vector<double> radial_nodes;      ///< log-midpoint nodes on [0.3 sqrt(rho), delta]
    std::vector<KernelOperator> channels;  ///< l = 0 .. l_max
};

ModelOperatorT1 build_T1(double rho, double delta, int l_max = 6,
                         int radial_per_decade = 200, int angular_n = 64);

/** Total count sum_l (2l+1) n(1, channel_l). */
int count_T1(const ModelOperatorT1& op);

/**
 * Counts over a strictly decreasing rho sweep, fitted against |log rho|;
 * the fitted slope approaches lambda0 / (2 pi).
 */
CountingCurve count_N_model(const std::vector<double>& rho_sequence, double delta,
                            int l_max = 6, int radial_per_decade = 200,
                            int angular_n = 64, int threads = 1);

} // namespace latspec
