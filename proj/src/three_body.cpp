#include "latspec/three_body.hpp"
#include "latspec/quadrature.hpp"

#include <algorithm>
#include <cmath>

namespace latspec {

namespace {

/** Base-n digits of a grid index (the per-axis m in p = 2 pi m / n). */
struct DigitMap {
    int n;
    explicit DigitMap(int n_per_axis) : n(n_per_axis) {}
    std::array<int, 3> digits(int i) const {
        return {i / (n * n), (i / n) % n, i % n};
    }
    int index(const std::array<int, 3>& d) const {
        return (d[0] * n + d[1]) * n + d[2];
    }
    /** jq with digits (ip + iq - jp) mod n: the sigma-conserving pairing. */
    int twist(int ip, int iq, int jp) const {
        const auto a = digits(ip), b = digits(iq), c = digits(jp);
        return index({((a[0] + b[0] - c[0]) % n + n) % n,
                      ((a[1] + b[1] - c[1]) % n + n) % n,
                      ((a[2] + b[2] - c[2]) % n + n) % n});
    }
};

/** Kinetic symbol on the double grid: E[ip, iq] = E(K; p_ip, q_iq). */
Matrix kinetic_matrix(const Vec3& K, const TorusGrid& grid) {
    const int n = grid.size();
    Matrix e(n, n);
    for (int ip = 0; ip < n; ++ip)
        for (int iq = 0; iq < n; ++iq)
            e(ip, iq) = threebody_symbol(K, grid.nodes[ip], grid.nodes[iq]);
    return e;
}

void require_tiny(const TorusGrid& grid) {
    if (grid.n_per_axis > 4)
        throw std::invalid_argument(
            "dense three-body assembly is restricted to n <= 4 (dimension n^6)");
}

} // namespace

DispersionTable compute_dispersion_table(const LatticePotential& pot,
                                         const TorusGrid& eval_grid, int solve_n) {
    DispersionTable tab{eval_grid, {}};
    const TorusGrid solve_grid = TorusGrid::uniform(solve_n);
    tab.z.reserve(eval_grid.size());
    for (const Vec3& p : eval_grid.nodes)
        tab.z.push_back(bound_state_energy_fixed(pot, p, solve_grid));
    return tab;
}

EssentialSpectrumReport tau_from_table(const DispersionTable& table, const Vec3& K) {
    EssentialSpectrumReport rep;
    rep.K = K;
    rep.band = threebody_band(K);
    double two_body = std::numeric_limits<double>::infinity();
    for (int i = 0; i < table.grid.size(); ++i) {
        if (!table.z[i]) continue;
        two_body = std::min(two_body, *table.z[i] + dispersion(K - table.grid.nodes[i]));
    }
    // Ties resolve to the two-body branch (the K = 0 resonance case, where
    // both branch values vanish).
    if (two_body <= rep.band.e_min + 1e-12) {
        rep.tau = std::min(two_body, rep.band.e_min);
        rep.branch = EssentialSpectrumReport::Branch::two_body_branch;
    } else {
        rep.tau = rep.band.e_min;
        rep.branch = EssentialSpectrumReport::Branch::band_bottom;
    }
    return rep;
}

EssentialSpectrumReport tau(const LatticePotential& pot, const Vec3& K,
                            const TorusGrid& eval_grid, int solve_n) {
    return tau_from_table(compute_dispersion_table(pot, eval_grid, solve_n), K);
}

Vector apply_H(const LatticePotential& pot, const Vec3& K, const TorusGrid& grid,
               const Vector& vector) {
    if (!grid.contains(K))
        throw NumericalError("apply_H: K must be a grid node (the third-channel "
                             "substitution must preserve the grid)");
    const int n = grid.size();
    if (vector.size() != static_cast<Eigen::Index>(n) * n)
        throw std::invalid_argument("apply_H: vector must have length n^6");
    const Matrix cv = convolution_matrix(pot, grid, /*halfpower=*/false);
    const Matrix e = kinetic_matrix(K, grid);
    const DigitMap dm(grid.n_per_axis);

    Vector out(vector.size());
    // Kinetic part and V1 (q-convolution at fixed p) blockwise.
    for (int ip = 0; ip < n; ++ip) {
        const auto block = vector.segment(static_cast<Eigen::Index>(ip) * n, n);
        out.segment(static_cast<Eigen::Index>(ip) * n, n).noalias() = -cv * block;
        out.segment(static_cast<Eigen::Index>(ip) * n, n) +=
            e.row(ip).transpose().cwiseProduct(block);
    }
    // V2: p-convolution at fixed q (strided).
    for (int iq = 0; iq < n; ++iq) {
        Vector slice(n);
        for (int ip = 0; ip < n; ++ip) slice[ip] = vector[ip * n + iq];
        const Vector conv = cv * slice;
        for (int ip = 0; ip < n; ++ip) out[ip * n + iq] -= conv[ip];
    }
    // V3: sigma-conserving pairing.
    for (int ip = 0; ip < n; ++ip)
        for (int iq = 0; iq < n; ++iq) {
            double acc = 0.0;
            for (int jp = 0; jp < n; ++jp)
                acc += cv(ip, jp) * vector[static_cast<Eigen::Index>(jp) * n +
                                           dm.twist(ip, iq, jp)];
            out[static_cast<Eigen::Index>(ip) * n + iq] -= acc;
        }
    return out;
}

Matrix build_dense_H(const LatticePotential& pot, const Vec3& K, const TorusGrid& grid) {
    require_tiny(grid);
    const int n = grid.size();
    const Eigen::Index nn = static_cast<Eigen::Index>(n) * n;
    const Matrix cv = convolution_matrix(pot, grid, /*halfpower=*/false);
    const Matrix e = kinetic_matrix(K, grid);
    const DigitMap dm(grid.n_per_axis);

    Matrix h = Matrix::Zero(nn, nn);
    for (int ip = 0; ip < n; ++ip) {
        h.block(ip * n, ip * n, n, n) -= cv;                       // V1
        h.diagonal().segment(ip * n, n) += e.row(ip).transpose();  // kinetic
    }
    for (int iq = 0; iq < n; ++iq)  // V2 (strided over q)
        for (int ip = 0; ip < n; ++ip)
            for (int jp = 0; jp < n; ++jp) h(ip * n + iq, jp * n + iq) -= cv(ip, jp);
    for (int ip = 0; ip < n; ++ip)  // V3 (sigma twist)
        for (int iq = 0; iq < n; ++iq)
            for (int jp = 0; jp < n; ++jp)
                h(ip * n + iq, jp * n + dm.twist(ip, iq, jp)) -= cv(ip, jp);
    return h;
}

namespace {

/** Top eigenvalue of A1(z) over spectator blocks; requires z below kinetic min. */
double channel_top(const Matrix& e, const Matrix& cv, double z) {
    const int n = static_cast<int>(e.rows());
    double top = -std::numeric_limits<double>::infinity();
    for (int ip = 0; ip < n; ++ip) {
        const Vector rh = (e.row(ip).transpose().array() - z).rsqrt().matrix();
        const Matrix a1 = rh.asDiagonal() * cv * rh.asDiagonal();
        Eigen::SelfAdjointEigenSolver<Matrix> es(a1, Eigen::EigenvaluesOnly);
        top = std::max(top, es.eigenvalues().maxCoeff());
    }
    return top;
}

} // namespace

double discrete_channel_threshold(const LatticePotential& pot, const Vec3& K,
                                  const TorusGrid& grid) {
    require_tiny(grid);
    const Matrix cv = convolution_matrix(pot, grid, /*halfpower=*/false);
    const Matrix e = kinetic_matrix(K, grid);
    const double emin = e.minCoeff();
    double lo = emin - 60.0, hi = emin - 1e-9;
    if (channel_top(e, cv, lo) >= 1.0)
        throw NumericalError("discrete_channel_threshold: no sub-threshold window");
    if (channel_top(e, cv, hi) < 1.0) return hi;
    while (hi - lo > 1e-10) {
        const double mid = 0.5 * (lo + hi);
        (channel_top(e, cv, mid) < 1.0 ? lo : hi) = mid;
    }
    return lo;
}

TinyCountReport count_three_body_tiny(const LatticePotential& pot, const Vec3& K,
                                      double z, const TorusGrid& grid) {
    require_tiny(grid);
    const int n = grid.size();
    const Eigen::Index nn = static_cast<Eigen::Index>(n) * n;
    const Matrix cv = convolution_matrix(pot, grid, /*halfpower=*/false);
    const Matrix e = kinetic_matrix(K, grid);
    if (z >= e.minCoeff())
        throw NumericalError("count_three_body_tiny: z not below the kinetic minimum");

    TinyCountReport rep;

    // Direct side: inertia of the dense H(K) - z.
    {
        Matrix hz = build_dense_H(pot, K, grid);
        hz.diagonal().array() -= z;
        rep.n_direct = symmetric_inertia(std::move(hz)).negative;
    }

    // Birman-Schwinger side. rh = R^{1/2} diagonal, blocks over spectator p.
    Vector rh(nn);
    for (int ip = 0; ip < n; ++ip)
        rh.segment(ip * n, n) = (e.row(ip).transpose().array() - z).rsqrt().matrix();

    std::vector<Matrix> f_blocks(n);
    double top = -std::numeric_limits<double>::infinity();
    for (int ip = 0; ip < n; ++ip) {
        const auto rb = rh.segment(ip * n, n);
        const Matrix a1 = rb.asDiagonal() * cv * rb.asDiagonal();
        Eigen::SelfAdjointEigenSolver<Matrix> es(a1);
        top = std::max(top, es.eigenvalues().maxCoeff());
        if (es.eigenvalues().maxCoeff() >= 1.0) {
            rep.channel_top = top;
            throw NumericalError(
                "count_three_body_tiny: z above the discrete channel threshold "
                "(top A1 eigenvalue " + std::to_string(es.eigenvalues().maxCoeff()) +
                "); the fiber transform (I - A1)^{-1/2} does not exist");
        }
        f_blocks[ip] = es.eigenvectors() *
                       (1.0 - es.eigenvalues().array()).rsqrt().matrix().asDiagonal() *
                       es.eigenvectors().transpose();
    }
    rep.channel_top = top;

    // A = A2 + A3.
    const DigitMap dm(grid.n_per_axis);
    Matrix a = Matrix::Zero(nn, nn);
    for (int iq = 0; iq < n; ++iq)
        for (int ip = 0; ip < n; ++ip)
            for (int jp = 0; jp < n; ++jp) {
                const Eigen::Index r = static_cast<Eigen::Index>(ip) * n + iq;
                const Eigen::Index c = static_cast<Eigen::Index>(jp) * n + iq;
                a(r, c) += rh[r] * cv(ip, jp) * rh[c];
            }
    for (int ip = 0; ip < n; ++ip)
        for (int iq = 0; iq < n; ++iq)
            for (int jp = 0; jp < n; ++jp) {
                const Eigen::Index r = static_cast<Eigen::Index>(ip) * n + iq;
                const Eigen::Index c =
                    static_cast<Eigen::Index>(jp) * n + dm.twist(ip, iq, jp);
                a(r, c) += rh[r] * cv(ip, jp) * rh[c];
            }

    // M = F A F blockwise (F is block-diagonal over the spectator momentum).
    for (int ib = 0; ib < n; ++ib)
        for (int jb = 0; jb < n; ++jb) {
            auto blk = a.block(ib * n, jb * n, n, n);
            blk = f_blocks[ib] * blk * f_blocks[jb];
        }
    Matrix m = 0.5 * (a + a.transpose());
    m.diagonal().array() -= 1.0;
    rep.n_bs = symmetric_inertia(std::move(m)).positive;

    if (rep.n_direct != rep.n_bs)
        throw NumericalError("count_three_body_tiny: exact count identity violated (" +
                             std::to_string(rep.n_direct) + " vs " +
                             std::to_string(rep.n_bs) + ")");
    return rep;
}

ModelOperatorT1 build_T1(double rho, double delta, int l_max, int radial_per_decade,
                         int angular_n) {
    if (rho <= 0.0 || delta <= 0.0)
        throw std::invalid_argument("build_T1: rho and delta must be positive");
    ModelOperatorT1 op;
    op.rho = rho;
    op.delta = delta;

    const double a = 0.3 * std::sqrt(rho);
    if (a >= delta)
        throw std::invalid_argument("build_T1: inner cutoff above delta (rho too large)");
    const double decades = std::log10(delta / a);
    const int m = std::max(2, static_cast<int>(std::ceil(decades * radial_per_decade)));
    const double step = std::log(delta / a) / m;
    op.radial_nodes.resize(m);
    Vector u(m);  // sqrt(weight) * (3x^2/4 + rho)^{-1/4}
    for (int i = 0; i < m; ++i) {
        const double x = a * std::exp((i + 0.5) * step);
        op.radial_nodes[i] = x;
        u[i] = std::sqrt(x * x * x * step) * std::pow(0.75 * x * x + rho, -0.25);
    }

    const GaussLegendre& gl = gauss_legendre(angular_n);
    Matrix pl_tab(l_max + 1, angular_n);
    for (int j = 0; j < angular_n; ++j) {
        std::vector<double> pl(l_max + 1);
        legendre_all(l_max, gl.nodes[j], pl.data());
        for (int l = 0; l <= l_max; ++l) pl_tab(l, j) = pl[l];
    }

    op.channels.reserve(l_max + 1);
    for (int l = 0; l <= l_max; ++l)
        op.channels.push_back(
            {Matrix(m, m), "T1(rho=" + std::to_string(rho) + ") l=" + std::to_string(l)});

    std::vector<double> acc(l_max + 1);
    for (int i = 0; i < m; ++i) {
        const double xi = op.radial_nodes[i];
        for (int j = i; j < m; ++j) {
            const double xj = op.radial_nodes[j];
            const double s2 = xi * xi + xj * xj + rho, pq = xi * xj;
            std::fill(acc.begin(), acc.end(), 0.0);
            for (int q = 0; q < angular_n; ++q) {
                const double den = gl.weights[q] / (s2 + pq * gl.nodes[q]);
                for (int l = 0; l <= l_max; ++l) acc[l] += den * pl_tab(l, q);
            }
            const double scale = (2.0 / M_PI) * u[i] * u[j];
            for (int l = 0; l <= l_max; ++l) {
                op.channels[l].matrix(i, j) = scale * acc[l];
                op.channels[l].matrix(j, i) = scale * acc[l];
            }
        }
    }
    return op;
}

int count_T1(const ModelOperatorT1& op) {
    int total = 0;
    for (size_t l = 0; l < op.channels.size(); ++l)
        total += (2 * static_cast<int>(l) + 1) *
                 count_eigenvalues_above(op.channels[l].matrix, 1.0);
    return total;
}

CountingCurve count_N_model(const std::vector<double>& rho_sequence, double delta,
                            int l_max, int radial_per_decade, int angular_n,
                            int threads) {
    if (rho_sequence.size() < 2)
        throw std::invalid_argument("count_N_model: need at least two rho values");
    for (size_t i = 0; i + 1 < rho_sequence.size(); ++i)
        if (!(rho_sequence[i + 1] < rho_sequence[i]))
            throw std::invalid_argument("count_N_model: rho sequence must be strictly "
                                        "decreasing");
    const int m = static_cast<int>(rho_sequence.size());
    std::vector<double> abscissa(m);
    std::vector<int> counts(m, 0);
    parallel_for(m, threads, [&](int i) {
        abscissa[i] = std::abs(std::log(rho_sequence[i]));
        counts[i] = count_T1(build_T1(rho_sequence[i], delta, l_max, radial_per_decade,
                                      angular_n));
    });
    CountingCurve curve = fit_counting_curve(abscissa, counts);
    return curve;
}

} // namespace latspec
