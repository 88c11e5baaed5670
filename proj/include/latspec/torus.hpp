#pragma once
/**
 * Uniform grids and dispersion/symbol functions on the momentum torus
 * T^3 = (-pi, pi]^3.
 *
 * All integral operators in the toolkit are discretized on the tensor grid
 *
 *     p = 2*pi*m/n  (m = 0..n-1 per axis), mapped into (-pi, pi],
 *
 * with the equal-weight (trapezoidal) quadrature w = (2*pi/n)^3 per node,
 * which is spectrally accurate for smooth periodic integrands.
 *
 * Core symbol functions:
 *
 *     dispersion        eps(k)        = sum_j (1 - cos k_j)            in [0, 6]
 *     twobody_symbol    E_k(q)        = eps(k/2 - q) + eps(k/2 + q)
 *                                     = sum_j 2 (1 - cos(k_j/2) cos q_j)
 *     threebody_symbol  E(K; p, q)    = eps(K - p) + eps(p/2 - q) + eps(p/2 + q)
 *
 * The two-body band edges follow in closed form from the product-cosine
 * identity: E_min(k) = sum_j 2 (1 - cos(k_j/2)) attained at q = 0, and
 * E_max(k) = sum_j 2 (1 + cos(k_j/2)). Small-k law: E_min(k) = k^2/4 + O(k^4).
 */

#include "latspec/types.hpp"

#include <vector>

namespace latspec {

/** Reduce one angle into (-pi, pi]. */
double reduce_angle(double x);

/** Componentwise reduction of a momentum vector into (-pi, pi]^3. */
Vec3 reduce_torus(const Vec3& k);

/** Uniform tensor quadrature grid on (-pi, pi]^3. */
struct TorusGrid {
    int n_per_axis = 0;
    std::vector<double> axis;  ///< per-axis coordinates, axis[m] = 2*pi*m/n in (-pi, pi]
    std::vector<Vec3> nodes;   ///< all n^3 nodes, index i = (ix*n + iy)*n + iz
    double weight = 0.0;       ///< (2*pi/n)^3, identical for every node

    static TorusGrid uniform(int n);

    int size() const { return static_cast<int>(nodes.size()); }
    int index(int ix, int iy, int iz) const {
        return (ix * n_per_axis + iy) * n_per_axis + iz;
    }
    /** Grid index of the origin node (always present). */
    int origin_index() const { return 0; }
    /** Index of the componentwise negation of node i (grids are negation-closed). */
    int negation_index(int i) const;
    /** True if each component of k coincides with a grid coordinate (tol 1e-12). */
    bool contains(const Vec3& k) const;
};

/** A point (z, k) in the energy/quasimomentum strip. */
struct SpectralPoint {
    double energy = 0.0;
    Vec3 quasimomentum = Vec3::Zero();
};

/** Two-body band edges at fixed quasimomentum. */
struct TwoBodyBand {
    double e_min = 0.0;
    double e_max = 0.0;
};

double dispersion(const Vec3& k);
double twobody_symbol(const Vec3& k, const Vec3& q);
TwoBodyBand twobody_band(const Vec3& k);
double threebody_symbol(const Vec3& K, const Vec3& p, const Vec3& q);

/**
 * Band edges of the three-body symbol over (p, q):
 * min/max_p [ eps(K - p) + (two-body band edge at p) ]. The inner extremum
 * over q is closed-form; the outer problem is separable per axis and is
 * solved by 1D golden-section with multistart, accurate to ~1e-12.
 */
TwoBodyBand threebody_band(const Vec3& K);

} // namespace latspec
