#include "latspec/torus.hpp"

#include <cmath>
#include <stdexcept>

namespace latspec {

namespace {
constexpr double TWO_PI = 2.0 * M_PI;

/** Minimize a smooth 2*pi-periodic 1D function by multistart golden section. */
template <typename F>
double minimize_periodic(F f) {
    const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
    double best_x = 0.0, best_f = f(0.0);
    for (int s = 0; s < 16; ++s) {
        double a = -M_PI + TWO_PI * s / 16.0;
        double b = a + TWO_PI / 16.0;
        double x1 = b - gr * (b - a), x2 = a + gr * (b - a);
        double f1 = f(x1), f2 = f(x2);
        for (int it = 0; it < 90; ++it) {
            if (f1 < f2) {
                b = x2; x2 = x1; f2 = f1;
                x1 = b - gr * (b - a); f1 = f(x1);
            } else {
                a = x1; x1 = x2; f1 = f2;
                x2 = a + gr * (b - a); f2 = f(x2);
            }
        }
        double xm = 0.5 * (a + b), fm = f(xm);
        if (fm < best_f) { best_f = fm; best_x = xm; }
    }
    (void)best_x;
    return best_f;
}
} // namespace

double reduce_angle(double x) {
    x = std::remainder(x, TWO_PI);  // into [-pi, pi]
    if (x <= -M_PI) x += TWO_PI;    // -pi is identified with +pi
    return x;
}

Vec3 reduce_torus(const Vec3& k) {
    return Vec3(reduce_angle(k[0]), reduce_angle(k[1]), reduce_angle(k[2]));
}

TorusGrid TorusGrid::uniform(int n) {
    if (n < 1) throw std::invalid_argument("TorusGrid: n_per_axis must be positive");
    TorusGrid g;
    g.n_per_axis = n;
    g.axis.resize(n);
    for (int m = 0; m < n; ++m) {
        double x = TWO_PI * m / n;
        if (x > M_PI) x -= TWO_PI;
        g.axis[m] = x;
    }
    g.nodes.reserve(static_cast<std::size_t>(n) * n * n);
    for (int ix = 0; ix < n; ++ix)
        for (int iy = 0; iy < n; ++iy)
            for (int iz = 0; iz < n; ++iz)
                g.nodes.emplace_back(g.axis[ix], g.axis[iy], g.axis[iz]);
    g.weight = std::pow(TWO_PI / n, 3);
    return g;
}

int TorusGrid::negation_index(int i) const {
    const int n = n_per_axis;
    int iz = i % n, iy = (i / n) % n, ix = i / (n * n);
    auto neg = [n](int m) { return (n - m) % n; };
    return index(neg(ix), neg(iy), neg(iz));
}

bool TorusGrid::contains(const Vec3& k) const {
    for (int d = 0; d < 3; ++d) {
        double x = reduce_angle(k[d]);
        bool found = false;
        for (double a : axis)
            if (std::abs(a - x) < 1e-12 ||
                std::abs(std::abs(a - x) - TWO_PI) < 1e-12) { found = true; break; }
        if (!found) return false;
    }
    return true;
}

double dispersion(const Vec3& k) {
    double s = 0.0;
    for (int d = 0; d < 3; ++d) s += 1.0 - std::cos(k[d]);
    return s;
}

double twobody_symbol(const Vec3& k, const Vec3& q) {
    double s = 0.0;
    for (int d = 0; d < 3; ++d) s += 2.0 * (1.0 - std::cos(0.5 * k[d]) * std::cos(q[d]));
    return s;
}

TwoBodyBand twobody_band(const Vec3& k) {
    TwoBodyBand b;
    for (int d = 0; d < 3; ++d) {
        // |k_d/2| <= pi/2 after reduction, so cos(k_d/2) >= 0 and the extrema
        // over q_d sit at q_d = 0 (min) and q_d = pi (max).
        double c = std::cos(0.5 * reduce_angle(k[d]));
        b.e_min += 2.0 * (1.0 - c);
        b.e_max += 2.0 * (1.0 + c);
    }
    return b;
}

double threebody_symbol(const Vec3& K, const Vec3& p, const Vec3& q) {
    return dispersion(K - p) + dispersion(0.5 * p - q) + dispersion(0.5 * p + q);
}

TwoBodyBand threebody_band(const Vec3& K) {
    // min/max over q in closed form, then per-axis 1D extremization over p:
    //   band_min = min_p sum_j [ 1 - cos(K_j - p_j) + 2 (1 - cos(p_j/2)) ]
    //   band_max = max_p sum_j [ 1 - cos(K_j - p_j) + 2 (1 + cos(p_j/2)) ]
    TwoBodyBand b;
    for (int d = 0; d < 3; ++d) {
        double Kd = reduce_angle(K[d]);
        b.e_min += minimize_periodic([Kd](double x) {
            return 1.0 - std::cos(Kd - x) + 2.0 * (1.0 - std::cos(std::abs(reduce_angle(x)) * 0.5));
        });
        b.e_max += -minimize_periodic([Kd](double x) {
            return -(1.0 - std::cos(Kd - x) + 2.0 * (1.0 + std::cos(std::abs(reduce_angle(x)) * 0.5)));
        });
    }
    return b;
}

} // namespace latspec
