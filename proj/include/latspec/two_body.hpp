#pragma once
/**
 * The two-body fiber operator and its Birman-Schwinger machinery on a
 * TorusGrid:
 *
 *     h(k)    = diag(E_k(p_i)) - Cv,          Cv[i,j] = w (2pi)^{-3/2} v(p_i - p_j)
 *     G(k,z)  = C diag(1/(E_k(p_i) - z)) C,   C[i,j]  = w (2pi)^{-3/2} v^1/2(p_i - p_j)
 *
 * C is an exact positive-semidefinite matrix square root of Cv whenever the
 * grid resolves the potential support without aliasing (n >= 2*s_max + 1),
 * because both are diagonalized by the discrete Fourier transform with
 * symbols sqrt(mu*vhat(s)) and mu*vhat(s). This makes the discrete
 * Birman-Schwinger identity
 *
 *     #{ eigenvalues of h(k) below z } = n(1, G(k,z))        (z < E_min(k))
 *
 * exact matrix algebra (Sylvester inertia), not an approximation; it is
 * asserted, not tolerated.
 *
 * Two evaluation modes for G:
 *
 *   - plain: the Nystrom sum as written; spectrally accurate while z is
 *     well below E_min(k), degrades as the kernel's near-singularity at the
 *     band minimum sharpens;
 *
 *   - threshold-safe: the singular constant mode is subtracted node-wise
 *     and restored through the scalar lattice integral S_k(z),
 *
 *       G = sum_{t: E_k(t)-z > tol}  C[:,t] C[t,:] / (E_k(t)-z)
 *           + (N*S_k(z) - sum') c0 c0^T,        c0 = C[:, origin],
 *
 *     which is finite even at z = E_min(k) (grids always contain the
 *     minimizer q=0) and, for the zero-range potential, exact for every
 *     grid size. All near-threshold work (calibration, bound states,
 *     witness, expansions) runs in this mode.
 *
 * Rank compression: the nonzero spectrum of G equals the spectrum of the
 * m x m site-basis matrix
 *
 *     B[a,b] = sqrt(mu vhat_a) sqrt(mu vhat_b) L(s_b - s_a),
 *     L(d)   = (1/N) sum_t cos(t . d) / (E_k(t) - z),
 *
 * (threshold mode: puncture + S_k(z) restoration applied to L). Eigenvalue
 * solves against G therefore cost O(m^3) after an O(m^2 N) assembly.
 */

#include "latspec/counting.hpp"
#include "latspec/potential.hpp"
#include "latspec/torus.hpp"
#include "latspec/types.hpp"

#include <optional>
#include <vector>

namespace latspec {

enum class GMode {
    plain,           ///< direct Nystrom sum (requires z safely below E_min)
    threshold_safe,  ///< subtracted form, valid up to and including z = E_min(k)
};

/** Convolution matrix M[i,j] = w (2pi)^{-3/2} kernel(p_i - p_j). */
Matrix convolution_matrix(const LatticePotential& pot, const TorusGrid& grid,
                          bool halfpower);

/** Fails (NumericalError) if the grid aliases the potential support. */
void require_no_aliasing(const LatticePotential& pot, const TorusGrid& grid);

KernelOperator build_h(const LatticePotential& pot, const Vec3& k, const TorusGrid& grid);

KernelOperator build_G(const LatticePotential& pot, const Vec3& k, double z,
                       const TorusGrid& grid, GMode mode = GMode::plain);

/**
 * Site-basis compression of G(k,z); eigenvalues = nonzero eigenvalues of the
 * dense matrix, rows/cols ordered like pot.support().
 */
Matrix compressed_G(const LatticePotential& pot, const Vec3& k, double z,
                    const TorusGrid& grid, GMode mode);

/** Top eigenvalue of G(k,z) through the compression (threshold-safe). */
double top_eigenvalue_G(const LatticePotential& pot, const Vec3& k, double z,
                        const TorusGrid& grid);

/**
 * n(1, G(k,z)) with the dense h-side count computed independently and the
 * exact integer identity asserted. Requires z < E_min(k).
 */
int count_two_body(const LatticePotential& pot, const Vec3& k, double z,
                   const TorusGrid& grid);

struct ResonanceCalibration {
    double mu_star = 0.0;   ///< coupling with top eigenvalue of G(0,0) equal 1
    Vector psi;             ///< resonance eigenfunction, unit L2 norm (sum w |psi|^2 = 1)
    double phi0 = 0.0;      ///< (v^1/2, psi) with quadrature weights
    double residual = 0.0;  ///< |top eigenvalue - 1| at mu_star
};

/**
 * Calibrates the coupling to the zero-energy resonance: mu_star > 0 with
 * top-eig G(0,0) = 1, by bracketed bisection in mu plus one secant polish.
 * psi is checked even (parity) a posteriori; phi0 != 0 distinguishes a
 * resonance from a threshold eigenvalue.
 */
ResonanceCalibration calibrate_resonance(const LatticePotential& pot_shape,
                                         const TorusGrid& grid);

/**
 * The unique dispersion value z(k) in (0, E_min(k)] solving
 * top-eig G(k,z) = 1 on one fixed grid (threshold-safe mode, bisection to
 * 1e-12 plus secant polish); std::nullopt when the top eigenvalue stays
 * below 1 up to the threshold. Returns exactly E_min(k) when the top
 * eigenvalue equals 1 there to 1e-9 (the resonance case z(0) = 0).
 */
std::optional<double> bound_state_energy_fixed(const LatticePotential& pot,
                                               const Vec3& k, const TorusGrid& grid);

/**
 * Same with the torus-core refinement policy: the grid is doubled until two
 * successive energies agree to rel_tol (default 1e-8), hard cap n <= 64.
 */
std::optional<double> bound_state_energy(const LatticePotential& pot, const Vec3& k,
                                         const TorusGrid& grid, double rel_tol = 1e-8,
                                         int n_cap = 64);

struct ExpansionReport {
    std::vector<double> k_norms;    ///< |k| per step, decreasing
    std::vector<double> distances;  ///< max-norm distance of (G(k,0)-G(0,0))/|k| to the limit
    std::vector<double> ratios;     ///< distances[i+1]/distances[i] (expect ~ |k| ratio)
    Matrix limit;                   ///< -(1/8pi) w v^1/2(p_i) v^1/2(p_j)
};

/**
 * Finite-difference check of the |k|-linear term of G(k,0) around k=0:
 * D(k) = (G(k,0) - G(0,0))/|k| must approach -(1/8pi) w v^1/2 v^1/2^T at a
 * linear rate. Threshold-safe mode throughout (z = 0 is the band edge).
 */
ExpansionReport expansion_check_G(const LatticePotential& pot, const TorusGrid& grid,
                                  const std::vector<Vec3>& k_sequence);

/**
 * |k| * <(I - G(k,0))^{-1} psi, psi> for the calibrated resonance function
 * psi; tends to 8*pi / phi0^2 as |k| -> 0 at resonance coupling. Throws
 * NumericalError when I - G(k,0) is numerically singular (always at k=0).
 */
double resonance_witness_w(const LatticePotential& pot, const TorusGrid& grid,
                           const Vec3& k, const ResonanceCalibration& cal);

} // namespace latspec
