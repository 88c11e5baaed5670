#include "latspec/two_body.hpp"
#include "latspec/lattice_sum.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <map>

namespace latspec {

namespace {

constexpr double kTwoPi = 2.0 * M_PI;
/** Grid energies E_k(p_t) - z below this are treated as the punctured mode. */
constexpr double kPunctureTol = 1e-14;

Vector symbol_on_grid(const Vec3& k, const TorusGrid& grid) {
    Vector d(grid.size());
    for (int i = 0; i < grid.size(); ++i) d[i] = twobody_symbol(k, grid.nodes[i]);
    return d;
}

void require_below_threshold(const Vec3& k, double z) {
    const double emin = twobody_band(k).e_min;
    if (z > emin + 1e-13 * std::max(1.0, emin))
        throw NumericalError("build_G: z above E_min(k) (threshold violation)");
}

} // namespace

Matrix convolution_matrix(const LatticePotential& pot, const TorusGrid& grid,
                          bool halfpower) {
    const int n = grid.size();
    const double scale = grid.weight * std::pow(kTwoPi, -1.5);
    Matrix m(n, n);
    for (int i = 0; i < n; ++i) {
        m(i, i) = scale * (halfpower ? pot.halfpower_kernel(Vec3::Zero())
                                     : pot.momentum_kernel(Vec3::Zero()));
        for (int j = 0; j < i; ++j) {
            const Vec3 d = grid.nodes[i] - grid.nodes[j];
            const double v =
                scale * (halfpower ? pot.halfpower_kernel(d) : pot.momentum_kernel(d));
            m(i, j) = m(j, i) = v;
        }
    }
    return m;
}

void require_no_aliasing(const LatticePotential& pot, const TorusGrid& grid) {
    // The half-power matrix squares to the full-power matrix iff no two
    // support sites fall in the same residue class mod n (then both are
    // diagonalized by the DFT with symbols sqrt(mu vhat) and mu vhat).
    const auto sites = pot.support();
    const int n = grid.n_per_axis;
    for (size_t a = 0; a < sites.size(); ++a)
        for (size_t b = a + 1; b < sites.size(); ++b) {
            bool collide = true;
            for (int j = 0; j < 3; ++j)
                if ((sites[a][j] - sites[b][j]) % n != 0) collide = false;
            if (collide)
                throw NumericalError(
                    "grid n=" + std::to_string(n) +
                    " aliases the potential support (need n >= 2*s_max + 1)");
        }
}

KernelOperator build_h(const LatticePotential& pot, const Vec3& k, const TorusGrid& grid) {
    require_no_aliasing(pot, grid);
    Matrix m = -convolution_matrix(pot, grid, /*halfpower=*/false);
    m.diagonal() += symbol_on_grid(k, grid);
    return {std::move(m), "h(k) n=" + std::to_string(grid.n_per_axis)};
}

KernelOperator build_G(const LatticePotential& pot, const Vec3& k, double z,
                       const TorusGrid& grid, GMode mode) {
    require_below_threshold(k, z);
    require_no_aliasing(pot, grid);
    const int n = grid.size();
    const Matrix c = convolution_matrix(pot, grid, /*halfpower=*/true);
    Vector d = symbol_on_grid(k, grid);
    d.array() -= z;

    Matrix g;
    if (mode == GMode::plain) {
        if (d.minCoeff() <= kPunctureTol)
            throw NumericalError("build_G: grid node at the singular energy; "
                                 "use the threshold-safe mode");
        g.noalias() = c * d.cwiseInverse().asDiagonal() * c;
    } else {
        // Subtracted form: every column contribution is measured against the
        // origin column c0, which removes the near-singular constant mode
        // exactly; the removed mode is restored through the scalar lattice
        // integral S_k(z). Algebraically (sum' over unpunctured nodes):
        //   G = sum'_t g_t c_t c_t^T + (N S - sum'_t g_t) c0 c0^T
        //     = Dm diag(g) C + c0 (Dm g)^T + N S c0 c0^T,  Dm = C - c0 1^T,
        // and the last line is what is evaluated (no large cancellations:
        // Dm's origin column is exactly zero).
        Vector gt(n);
        for (int i = 0; i < n; ++i) gt[i] = d[i] > kPunctureTol ? 1.0 / d[i] : 0.0;
        const double s = scalar_lattice_integral(k, z);
        const Vector c0 = c.col(grid.origin_index());
        Matrix dm = c;
        dm.colwise() -= c0;
        Matrix asym(n, n);
        asym.noalias() = dm * gt.asDiagonal() * c;
        asym.noalias() += c0 * (dm * gt).transpose();
        asym.noalias() += (n * s) * c0 * c0.transpose();
        g = 0.5 * (asym + asym.transpose());
    }
    return {std::move(g), "G(k,z) n=" + std::to_string(grid.n_per_axis)};
}

Matrix compressed_G(const LatticePotential& pot, const Vec3& k, double z,
                    const TorusGrid& grid, GMode mode) {
    require_below_threshold(k, z);
    require_no_aliasing(pot, grid);
    const auto sites = pot.support();
    const int m = static_cast<int>(sites.size());
    const int n = grid.size();
    Vector d = symbol_on_grid(k, grid);
    d.array() -= z;

    // L(d) for every site difference, deduplicated.
    std::map<std::array<int, 3>, double> lvals;
    for (int a = 0; a < m; ++a)
        for (int b = 0; b < m; ++b)
            lvals[{sites[b][0] - sites[a][0], sites[b][1] - sites[a][1],
                   sites[b][2] - sites[a][2]}] = 0.0;

    const bool thr = mode == GMode::threshold_safe;
    const double s = thr ? scalar_lattice_integral(k, z) : 0.0;
    for (auto& [dd, val] : lvals) {
        const Vec3 dv(dd[0], dd[1], dd[2]);
        double acc = 0.0;
        if (thr) {
            // (1/N) sum'_t (cos(t.d) - 1)/(E_k(t)-z) + S_k(z); the d=0 entry
            // is exactly S_k(z) (grid-independent -> zero-range exactness).
            const bool zero = dd[0] == 0 && dd[1] == 0 && dd[2] == 0;
            if (!zero)
                for (int t = 0; t < n; ++t) {
                    if (d[t] <= kPunctureTol) continue;
                    acc += (std::cos(grid.nodes[t].dot(dv)) - 1.0) / d[t];
                }
            val = acc / n + s;
        } else {
            if (d.minCoeff() <= kPunctureTol)
                throw NumericalError("compressed_G: grid node at the singular energy; "
                                     "use the threshold-safe mode");
            for (int t = 0; t < n; ++t) acc += std::cos(grid.nodes[t].dot(dv)) / d[t];
            val = acc / n;
        }
    }

    Matrix b(m, m);
    for (int a = 0; a < m; ++a) {
        const double va = std::sqrt(pot.effective_coefficient(sites[a]));
        for (int bb = 0; bb < m; ++bb) {
            const double vb = std::sqrt(pot.effective_coefficient(sites[bb]));
            const std::array<int, 3> dd{sites[bb][0] - sites[a][0],
                                        sites[bb][1] - sites[a][1],
                                        sites[bb][2] - sites[a][2]};
            b(a, bb) = va * vb * lvals.at(dd);
        }
    }
    return 0.5 * (b + b.transpose());
}

double top_eigenvalue_G(const LatticePotential& pot, const Vec3& k, double z,
                        const TorusGrid& grid) {
    const Matrix b = compressed_G(pot, k, z, grid, GMode::threshold_safe);
    if (b.rows() == 0) return 0.0;
    Eigen::SelfAdjointEigenSolver<Matrix> es(b, Eigen::EigenvaluesOnly);
    return es.eigenvalues().maxCoeff();
}

int count_two_body(const LatticePotential& pot, const Vec3& k, double z,
                   const TorusGrid& grid) {
    const double emin = twobody_band(k).e_min;
    if (z >= emin)
        throw NumericalError("count_two_body: requires z strictly below E_min(k)");
    const KernelOperator h = build_h(pot, k, grid);
    Matrix hz = h.matrix;
    hz.diagonal().array() -= z;
    const int n_h = symmetric_inertia(std::move(hz)).negative;

    const KernelOperator g = build_G(pot, k, z, grid, GMode::plain);
    const int n_g = count_eigenvalues_above(g.matrix, 1.0);
    if (n_h != n_g)
        throw NumericalError("count_two_body: Birman-Schwinger count mismatch (" +
                             std::to_string(n_h) + " vs " + std::to_string(n_g) + ")");
    return n_g;
}

ResonanceCalibration calibrate_resonance(const LatticePotential& pot_shape,
                                         const TorusGrid& grid) {
    if (pot_shape.support().empty())
        throw std::invalid_argument("calibrate_resonance: empty potential");
    require_no_aliasing(pot_shape, grid);
    const Vec3 k0 = Vec3::Zero();
    auto top = [&](double mu) {
        return top_eigenvalue_G(pot_shape.with_mu(mu), k0, 0.0, grid);
    };
    // The top eigenvalue is linear in mu; the bracket around 1/top(1) is a
    // formality, kept for robustness of the contract (monotone bisection).
    const double t1 = top(1.0);
    if (!(t1 > 0.0))
        throw NumericalError("calibrate_resonance: G(0,0) has no positive eigenvalue");
    double lo = 0.5 / t1, hi = 2.0 / t1;
    auto g = [&](double mu) { return top(mu) - 1.0; };
    double glo = g(lo), ghi = g(hi);
    for (int i = 0; i < 60 && !(glo < 0.0 && ghi > 0.0); ++i) {
        lo *= 0.25;
        hi *= 4.0;
        glo = g(lo);
        ghi = g(hi);
    }
    if (!(glo < 0.0 && ghi > 0.0))
        throw NumericalError("calibrate_resonance: no sign change in the mu bracket");
    while (hi - lo > 1e-12 * std::max(1.0, hi)) {
        const double mid = 0.5 * (lo + hi);
        const double gm = g(mid);
        (gm < 0.0 ? lo : hi) = mid;
        (gm < 0.0 ? glo : ghi) = gm;
    }
    double mu_star = (ghi != glo) ? hi - ghi * (hi - lo) / (ghi - glo) : 0.5 * (lo + hi);

    ResonanceCalibration cal;
    cal.mu_star = mu_star;
    cal.residual = std::abs(g(mu_star));

    // Eigenvector lift: a site-basis eigenvector y of the compressed matrix
    // lifts to the grid eigenvector x_t = (1/sqrt(N)) sum_a sqrt(nu_a) y_a
    // exp(i p_t . s_a); the real and imaginary parts span the same eigenspace,
    // so the larger of the two is taken (the eigenvalue is simple).
    const LatticePotential pot = pot_shape.with_mu(mu_star);
    const Matrix b = compressed_G(pot, k0, 0.0, grid, GMode::threshold_safe);
    Eigen::SelfAdjointEigenSolver<Matrix> es(b);
    const Vector y = es.eigenvectors().col(b.rows() - 1);
    const auto sites = pot.support();
    const int n = grid.size();
    Vector re = Vector::Zero(n), im = Vector::Zero(n);
    for (int t = 0; t < n; ++t)
        for (size_t a = 0; a < sites.size(); ++a) {
            const Vec3 sv(sites[a][0], sites[a][1], sites[a][2]);
            const double amp = std::sqrt(pot.effective_coefficient(sites[a])) * y[a];
            const double ph = grid.nodes[t].dot(sv);
            re[t] += amp * std::cos(ph);
            im[t] += amp * std::sin(ph);
        }
    Vector x = (re.norm() >= im.norm()) ? re : im;
    x.normalize();

    // Parity: kernels are even, the resonance function must be even.
    for (int t = 0; t < n; ++t)
        if (std::abs(x[t] - x[grid.negation_index(t)]) > 1e-8)
            throw NumericalError("calibrate_resonance: resonance eigenvector not even");

    cal.psi = x / std::sqrt(grid.weight);  // unit L2: sum w |psi|^2 = 1
    double phi0 = 0.0;
    for (int t = 0; t < n; ++t)
        phi0 += grid.weight * pot.halfpower_kernel(grid.nodes[t]) * cal.psi[t];
    if (phi0 < 0.0) {
        cal.psi = -cal.psi;
        phi0 = -phi0;
    }
    cal.phi0 = phi0;
    return cal;
}

std::optional<double> bound_state_energy_fixed(const LatticePotential& pot,
                                               const Vec3& k, const TorusGrid& grid) {
    const double emin = twobody_band(k).e_min;
    const Vec3 kr = reduce_torus(k);
    const double cmin = std::min({std::cos(0.5 * kr[0]), std::cos(0.5 * kr[1]),
                                  std::cos(0.5 * kr[2])});
    // A component at pi makes S_k diverge (logarithmically) at the band edge;
    // the probe offset must stay in the integrable regime there.
    const bool flat = cmin <= 1e-3;
    double delta_num = 1e-12 * std::max(1.0, emin);
    if (flat) delta_num = std::max(delta_num, 1e-11);
    auto f = [&](double z) { return top_eigenvalue_G(pot, k, z, grid) - 1.0; };

    const double zhi = emin - delta_num;
    double fhi = f(zhi);
    if (fhi <= 0.0) {
        // No crossing strictly below the numeric threshold; decide at the
        // threshold itself (finite in the subtracted evaluation). For flat
        // directions the threshold value diverges and cannot be probed: any
        // root closer than delta_num is reported as absent (documented bias).
        if (flat) return std::nullopt;
        const double f0 = f(emin);
        if (std::abs(f0) <= 1e-9) return emin;  // resonance: z(0) = 0 at k = 0
        if (f0 > 0.0) return zhi;               // root squeezed into the delta_num gap
        return std::nullopt;
    }
    double step = std::max(1.0, emin);
    double zlo = emin - step, flo = f(zlo);
    for (int i = 0; i < 60 && flo > 0.0; ++i) {
        step *= 2.0;
        zlo = emin - step;
        flo = f(zlo);
    }
    if (flo > 0.0)
        throw NumericalError("bound_state_energy: failed to bracket the dispersion root");
    double lo = zlo, hi = zhi;
    while (hi - lo > 1e-12) {
        const double mid = 0.5 * (lo + hi);
        const double fm = f(mid);
        if (fm >= 0.0) {
            hi = mid;
            fhi = fm;
        } else {
            lo = mid;
            flo = fm;
        }
    }
    if (fhi != flo) {
        const double sec = hi - fhi * (hi - lo) / (fhi - flo);
        if (sec > lo && sec < hi) return sec;
    }
    return 0.5 * (lo + hi);
}

std::optional<double> bound_state_energy(const LatticePotential& pot, const Vec3& k,
                                         const TorusGrid& grid, double rel_tol,
                                         int n_cap) {
    std::optional<double> prev = bound_state_energy_fixed(pot, k, grid);
    int n = grid.n_per_axis;
    while (2 * n <= n_cap) {
        n *= 2;
        const std::optional<double> next =
            bound_state_energy_fixed(pot, k, TorusGrid::uniform(n));
        if (!prev && !next) return std::nullopt;
        if (prev && next &&
            std::abs(*next - *prev) <= rel_tol * std::max(1.0, std::abs(*next)))
            return next;
        prev = next;
    }
    return prev;
}

ExpansionReport expansion_check_G(const LatticePotential& pot, const TorusGrid& grid,
                                  const std::vector<Vec3>& k_sequence) {
    ExpansionReport rep;
    const int n = grid.size();
    rep.limit.resize(n, n);
    Vector vh(n);
    for (int i = 0; i < n; ++i) vh[i] = pot.halfpower_kernel(grid.nodes[i]);
    rep.limit.noalias() = -(grid.weight / (8.0 * M_PI)) * vh * vh.transpose();

    const Matrix g0 = build_G(pot, Vec3::Zero(), 0.0, grid, GMode::threshold_safe).matrix;
    for (const Vec3& k : k_sequence) {
        const double kn = k.norm();
        if (kn <= 0.0)
            throw std::invalid_argument("expansion_check_G: k_sequence must be nonzero");
        const Matrix gk = build_G(pot, k, 0.0, grid, GMode::threshold_safe).matrix;
        const double dist = (((gk - g0) / kn) - rep.limit).cwiseAbs().maxCoeff();
        rep.k_norms.push_back(kn);
        rep.distances.push_back(dist);
    }
    for (size_t i = 0; i + 1 < rep.distances.size(); ++i)
        rep.ratios.push_back(rep.distances[i + 1] / rep.distances[i]);
    return rep;
}

double resonance_witness_w(const LatticePotential& pot, const TorusGrid& grid,
                           const Vec3& k, const ResonanceCalibration& cal) {
    const double top = top_eigenvalue_G(pot, k, 0.0, grid);
    if (top >= 1.0 - 1e-12)
        throw NumericalError("resonance_witness_w: I - G(k,0) numerically singular "
                             "(top eigenvalue " + std::to_string(top) + "); requires k != 0");
    const Matrix g = build_G(pot, k, 0.0, grid, GMode::threshold_safe).matrix;
    const Matrix a = Matrix::Identity(g.rows(), g.cols()) - g;
    const Vector u = a.ldlt().solve(cal.psi);
    const double resid = (a * u - cal.psi).norm() / std::max(1.0, u.norm());
    if (resid > 1e-8)
        throw NumericalError("resonance_witness_w: conditioning failure, residual " +
                             std::to_string(resid));
    return k.norm() * grid.weight * cal.psi.dot(u);
}

} // namespace latspec
