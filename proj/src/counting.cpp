#include "latspec/counting.hpp"
#include "latspec/quadrature.hpp"

#include <lapacke.h>

#include <atomic>
#include <cmath>
#include <functional>
#include <map>
#include <mutex>
#include <stdexcept>
#include <thread>

namespace latspec {

double KernelOperator::asymmetry() const {
    return (matrix - matrix.transpose()).cwiseAbs().maxCoeff();
}

Vector KernelOperator::eigenvalues() const {
    Eigen::SelfAdjointEigenSolver<Matrix> es(matrix, Eigen::EigenvaluesOnly);
    if (es.info() != Eigen::Success)
        throw NumericalError("KernelOperator: eigendecomposition failed for " + label);
    if (!es.eigenvalues().allFinite())
        throw NumericalError("KernelOperator: non-finite eigenvalues for " + label);
    return es.eigenvalues();
}

double KernelOperator::top_eigenvalue() const {
    const Vector ev = eigenvalues();
    return ev[ev.size() - 1];
}

std::pair<double, Vector> KernelOperator::top_eigenpair() const {
    Eigen::SelfAdjointEigenSolver<Matrix> es(matrix);
    if (es.info() != Eigen::Success)
        throw NumericalError("KernelOperator: eigendecomposition failed for " + label);
    const int n = static_cast<int>(matrix.rows());
    return {es.eigenvalues()[n - 1], es.eigenvectors().col(n - 1)};
}

Inertia symmetric_inertia(Matrix a) {
    const int n = static_cast<int>(a.rows());
    if (a.cols() != n) throw std::invalid_argument("symmetric_inertia: matrix not square");
    Inertia res;
    if (n == 0) return res;
    std::vector<lapack_int> ipiv(n);
    lapack_int info = LAPACKE_dsytrf(LAPACK_COL_MAJOR, 'L', n, a.data(), n, ipiv.data());
    if (info < 0) throw NumericalError("symmetric_inertia: dsytrf failed");
    // Walk the block-diagonal D of P A P^T = L D L^T. Bunch-Kaufman emits 1x1
    // pivots (ipiv > 0) and 2x2 pivots (a consecutive pair with ipiv < 0).
    int i = 0;
    while (i < n) {
        if (ipiv[i] > 0) {
            double d = a(i, i);
            if (d > 0.0) ++res.positive;
            else if (d < 0.0) ++res.negative;
            else ++res.zero;
            ++i;
        } else {
            double d11 = a(i, i), d22 = a(i + 1, i + 1), d21 = a(i + 1, i);
            double det = d11 * d22 - d21 * d21;
            if (det < 0.0) { ++res.positive; ++res.negative; }
            else {
                double tr = d11 + d22;
                if (det == 0.0) {
                    ++res.zero;
                    if (tr > 0.0) ++res.positive;
                    else if (tr < 0.0) ++res.negative;
                    else ++res.zero;
                } else if (tr > 0.0) res.positive += 2;
                else res.negative += 2;
            }
            i += 2;
        }
    }
    return res;
}

int count_eigenvalues_above(const Matrix& a, double lambda) {
    Matrix shifted = 0.5 * (a + a.transpose());
    shifted.diagonal().array() -= lambda;
    return symmetric_inertia(std::move(shifted)).positive;
}

int count_eigenvalues_below(const Matrix& a, double lambda) {
    Matrix shifted = 0.5 * (a + a.transpose());
    shifted.diagonal().array() -= lambda;
    return symmetric_inertia(std::move(shifted)).negative;
}

CountingCurve fit_counting_curve(std::vector<double> abscissa, std::vector<int> counts) {
    if (abscissa.size() != counts.size() || abscissa.size() < 2)
        throw std::invalid_argument("fit_counting_curve: need >= 2 matching points");
    CountingCurve c;
    c.abscissa = std::move(abscissa);
    c.counts = std::move(counts);
    const int m = static_cast<int>(c.abscissa.size());
    double sx = 0, sy = 0;
    for (int i = 0; i < m; ++i) { sx += c.abscissa[i]; sy += c.counts[i]; }
    const double xbar = sx / m, ybar = sy / m;
    double sxx = 0, sxy = 0;
    for (int i = 0; i < m; ++i) {
        const double dx = c.abscissa[i] - xbar;
        sxx += dx * dx;
        sxy += dx * (c.counts[i] - ybar);
    }
    if (sxx == 0.0) throw std::invalid_argument("fit_counting_curve: degenerate abscissa");
    c.slope = sxy / sxx;
    const double intercept = ybar - c.slope * xbar;
    double ssr = 0;
    for (int i = 0; i < m; ++i) {
        const double r = c.counts[i] - (intercept + c.slope * c.abscissa[i]);
        ssr += r * r;
    }
    c.stderr_slope = (m > 2) ? std::sqrt(ssr / (m - 2) / sxx) : 0.0;
    return c;
}

void parallel_for(int n, int threads, const std::function<void(int)>& f) {
    threads = std::max(1, std::min(threads, n));
    if (threads == 1) {
        for (int i = 0; i < n; ++i) f(i);
        return;
    }
    std::atomic<int> next{0};
    std::vector<std::thread> pool;
    std::exception_ptr err;
    std::mutex err_mutex;
    for (int t = 0; t < threads; ++t)
        pool.emplace_back([&]() {
            for (;;) {
                const int i = next.fetch_add(1);
                if (i >= n) return;
                try {
                    f(i);
                } catch (...) {
                    std::lock_guard<std::mutex> lock(err_mutex);
                    if (!err) err = std::current_exception();
                    return;
                }
            }
        });
    for (auto& t : pool) t.join();
    if (err) std::rethrow_exception(err);
}

// ------------------------------------------------------------- quadrature ---

const GaussLegendre& gauss_legendre(int n) {
    static std::map<int, GaussLegendre> cache;
    static std::mutex mutex;
    std::lock_guard<std::mutex> lock(mutex);
    auto it = cache.find(n);
    if (it != cache.end()) return it->second;
    if (n < 1) throw std::invalid_argument("gauss_legendre: order must be positive");
    // Golub-Welsch: nodes are eigenvalues of the symmetric Jacobi matrix with
    // off-diagonal b_j = j / sqrt(4 j^2 - 1); weights are 2 * (first row of
    // the eigenvector matrix)^2.
    Matrix jac = Matrix::Zero(n, n);
    for (int j = 1; j < n; ++j) {
        const double b = j / std::sqrt(4.0 * j * j - 1.0);
        jac(j, j - 1) = jac(j - 1, j) = b;
    }
    Eigen::SelfAdjointEigenSolver<Matrix> es(jac);
    GaussLegendre rule;
    rule.nodes.resize(n);
    rule.weights.resize(n);
    for (int j = 0; j < n; ++j) {
        rule.nodes[j] = es.eigenvalues()[j];
        const double v0 = es.eigenvectors()(0, j);
        rule.weights[j] = 2.0 * v0 * v0;
    }
    return cache.emplace(n, std::move(rule)).first->second;
}

void legendre_all(int lmax, double x, double* out) {
    out[0] = 1.0;
    if (lmax == 0) return;
    out[1] = x;
    for (int l = 1; l < lmax; ++l)
        out[l + 1] = ((2 * l + 1) * x * out[l] - l * out[l - 1]) / (l + 1);
}

} // namespace latspec
