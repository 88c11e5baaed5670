#include "latspec/model_operator.hpp"
#include "latspec/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace latspec {

namespace {
const double kSqrt3 = std::sqrt(3.0);
}

double s_hat(double t, double lambda) {
    if (std::abs(t) > 1.0)
        throw std::domain_error("s_hat: |t| must be <= 1");
    const double a = std::acos(0.5 * t);           // in [pi/3, 2pi/3]
    const double root = std::sqrt(1.0 - 0.25 * t * t);
    const double lam = std::abs(lambda);           // even in lambda
    const double pref = 2.0 / (kSqrt3 * M_PI);
    if (lam == 0.0)
        return pref * (a / M_PI) / root;
    double ratio;
    if (lam <= 30.0) {
        ratio = std::sinh(lam * a) / std::sinh(M_PI * lam);
    } else {
        // sinh(lam a)/sinh(pi lam) = e^{lam(a-pi)} (1-e^{-2 lam a})/(1-e^{-2 pi lam})
        ratio = std::exp(lam * (a - M_PI)) * (1.0 - std::exp(-2.0 * lam * a)) /
                (1.0 - std::exp(-2.0 * M_PI * lam));
    }
    return pref * ratio / root;
}

double s0_closed_form(double y) {
    const double ya = std::abs(y);
    const double pref = 8.0 / kSqrt3;
    if (ya < 1e-6) {
        const double x = M_PI * ya / 6.0;
        // sinh(x)/y = (pi/6) sinhc(x); cosh(pi y/2) ~ 1 + (pi y/2)^2/2
        const double sinhc = 1.0 + x * x / 6.0;
        const double ch = std::cosh(M_PI * ya / 2.0);
        return pref * (M_PI / 6.0) * sinhc / ch;
    }
    if (ya <= 400.0)
        return pref * std::sinh(M_PI * ya / 6.0) / (ya * std::cosh(M_PI * ya / 2.0));
    // Stable tail: sinh(a)/cosh(b) = e^{a-b} (1 - e^{-2a})/(1 + e^{-2b}).
    const double a = M_PI * ya / 6.0, b = M_PI * ya / 2.0;
    return pref / ya * std::exp(a - b) * (1.0 - std::exp(-2.0 * a)) /
           (1.0 + std::exp(-2.0 * b));
}

double lambda0() {
    static const double root = [] {
        auto g = [](double y) { return s0_closed_form(y) - 1.0; };
        double lo = 1e-6, hi = 10.0;
        while (hi - lo > 1e-13) {
            const double mid = 0.5 * (lo + hi);
            (g(mid) > 0.0 ? lo : hi) = mid;
        }
        // One Newton polish with the analytic logarithmic derivative
        //   s0'/s0 = (pi/6) coth(pi y/6) - 1/y - (pi/2) tanh(pi y/2).
        double y = 0.5 * (lo + hi);
        const double s = s0_closed_form(y);
        const double dlog = (M_PI / 6.0) / std::tanh(M_PI * y / 6.0) - 1.0 / y -
                            (M_PI / 2.0) * std::tanh(M_PI * y / 2.0);
        y -= (s - 1.0) / (s * dlog);
        return y;
    }();
    return root;
}

double channel_symbol(int l, double lambda, int angular_n) {
    if (l < 0) throw std::invalid_argument("channel_symbol: l must be >= 0");
    const GaussLegendre& gl = gauss_legendre(angular_n);
    std::vector<double> pl(l + 1);
    double acc = 0.0;
    for (size_t j = 0; j < gl.nodes.size(); ++j) {
        legendre_all(l, gl.nodes[j], pl.data());
        acc += gl.weights[j] * pl[l] * s_hat(gl.nodes[j], lambda);
    }
    return 2.0 * M_PI * acc;
}

SymbolTable build_symbol_table(const std::vector<double>& lambda_grid, int l_max,
                               int angular_n) {
    SymbolTable tab;
    tab.lambda_grid = lambda_grid;
    tab.l_max = l_max;
    tab.values.assign(l_max + 1, std::vector<double>(lambda_grid.size(), 0.0));
    const GaussLegendre& gl = gauss_legendre(angular_n);
    std::vector<double> pl(l_max + 1);
    for (size_t i = 0; i < lambda_grid.size(); ++i)
        for (size_t j = 0; j < gl.nodes.size(); ++j) {
            const double f = gl.weights[j] * s_hat(gl.nodes[j], lambda_grid[i]);
            legendre_all(l_max, gl.nodes[j], pl.data());
            for (int l = 0; l <= l_max; ++l)
                tab.values[l][i] += 2.0 * M_PI * f * pl[l];
        }
    return tab;
}

double counting_functional(double mu, int l_max, double lambda_window, int angular_n) {
    if (mu <= 0.0) throw std::invalid_argument("counting_functional: mu must be > 0");
    double acc = 0.0;
    for (int l = 0; l <= l_max; ++l) {
        const double at0 = channel_symbol(l, 0.0, angular_n);
        if (at0 <= mu) continue;  // empty superlevel set (max sits at lambda = 0)
        if (channel_symbol(l, lambda_window, angular_n) >= mu)
            throw NumericalError("counting_functional: lambda window too small for l=" +
                                 std::to_string(l));
        double lo = 0.0, hi = lambda_window;
        for (int it = 0; it < 100; ++it) {
            const double mid = 0.5 * (lo + hi);
            (channel_symbol(l, mid, angular_n) > mu ? lo : hi) = mid;
        }
        acc += (2 * l + 1) * 2.0 * 0.5 * (lo + hi);  // measure of [-root, root]
    }
    return acc / (4.0 * M_PI);
}

double s_r_kernel_l0(double y) {
    const double c = std::cosh(y);
    return 4.0 / (kSqrt3 * M_PI) * std::log((2.0 * c + 1.0) / (2.0 * c - 1.0));
}

std::vector<KernelOperator> build_S_r(double r, int x_n, int angular_n, int l_max) {
    if (r <= 0.0 || x_n < 2)
        throw std::invalid_argument("build_S_r: need r > 0 and x_n >= 2");
    const double h = r / x_n;
    const GaussLegendre& gl = gauss_legendre(angular_n);

    // Translation kernel: per-l values depend on |i-j| only (Toeplitz).
    std::vector<std::vector<double>> band(l_max + 1, std::vector<double>(x_n, 0.0));
    std::vector<double> pl(l_max + 1);
    for (int d = 0; d < x_n; ++d) {
        const double y = d * h;
        const double ch = std::cosh(y);
        for (size_t j = 0; j < gl.nodes.size(); ++j) {
            const double f =
                gl.weights[j] / (kSqrt3 * M_PI * M_PI) / (ch + 0.5 * gl.nodes[j]);
            legendre_all(l_max, gl.nodes[j], pl.data());
            for (int l = 0; l <= l_max; ++l) band[l][d] += 2.0 * M_PI * f * pl[l];
        }
    }

    std::vector<KernelOperator> ops;
    ops.reserve(l_max + 1);
    for (int l = 0; l <= l_max; ++l) {
        Matrix m(x_n, x_n);
        for (int i = 0; i < x_n; ++i)
            for (int j = 0; j < x_n; ++j) m(i, j) = h * band[l][std::abs(i - j)];
        ops.push_back({std::move(m), "S(r=" + std::to_string(r) +
                                        ") l=" + std::to_string(l)});
    }
    return ops;
}

CountingCurve slope_S_r(const std::vector<double>& r_sequence, double x_spacing,
                        int angular_n, int l_max, int threads) {
    if (r_sequence.size() < 2)
        throw std::invalid_argument("slope_S_r: need at least two interval lengths");
    const int m = static_cast<int>(r_sequence.size());
    std::vector<int> counts(m, 0);
    parallel_for(m, threads, [&](int i) {
        const double r = r_sequence[i];
        const int x_n = static_cast<int>(std::ceil(r / x_spacing));
        const auto ops = build_S_r(r, x_n, angular_n, l_max);
        int total = 0;
        for (int l = 0; l <= l_max; ++l)
            total += (2 * l + 1) * count_eigenvalues_above(ops[l].matrix, 1.0);
        counts[i] = total;
    });
    return fit_counting_curve(r_sequence, counts);
}

} // namespace latspec
