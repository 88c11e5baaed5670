#include "latspec/potential.hpp"

#include <cmath>
#include <stdexcept>

namespace latspec {

namespace {
const double INV_TWOPI_32 = std::pow(2.0 * M_PI, -1.5);
}

LatticePotential LatticePotential::zero_range(double mu) {
    LatticePotential p;
    p.coefficients[{0, 0, 0}] = 1.0;
    p.mu = mu;
    p.validate();
    return p;
}

LatticePotential LatticePotential::nearest_neighbor(double a, double b, double mu) {
    LatticePotential p;
    p.coefficients[{0, 0, 0}] = a;
    for (int d = 0; d < 3; ++d) {
        std::array<int, 3> s{0, 0, 0};
        s[d] = 1;
        p.coefficients[s] = b;
        s[d] = -1;
        p.coefficients[s] = b;
    }
    p.mu = mu;
    p.validate();
    return p;
}

LatticePotential LatticePotential::table(
    const std::vector<std::array<double, 4>>& entries, double mu) {
    LatticePotential p;
    p.mu = mu;
    for (const auto& e : entries) {
        for (int d = 0; d < 3; ++d)
            if (e[d] != std::floor(e[d]) || std::abs(e[d]) > 64)
                throw std::invalid_argument(
                    "LatticePotential::table: site coordinates must be small integers");
        std::array<int, 3> s{int(e[0]), int(e[1]), int(e[2])};
        auto it = p.coefficients.find(s);
        if (it != p.coefficients.end() && it->second != e[3])
            throw std::invalid_argument(
                "LatticePotential::table: conflicting duplicate entries for a site");
        p.coefficients[s] = e[3];
    }
    // fill mirrors listed only once; conflicting mirrors are rejected below
    auto copy = p.coefficients;
    for (const auto& [s, v] : copy) {
        std::array<int, 3> m{-s[0], -s[1], -s[2]};
        auto it = p.coefficients.find(m);
        if (it == p.coefficients.end())
            p.coefficients[m] = v;
    }
    p.validate();
    return p;
}

LatticePotential LatticePotential::with_mu(double new_mu) const {
    LatticePotential p = *this;
    p.mu = new_mu;
    p.validate();
    return p;
}

void LatticePotential::validate() const {
    if (!(mu >= 0.0))
        throw std::invalid_argument("LatticePotential: coupling mu must be >= 0");
    for (const auto& [s, v] : coefficients) {
        if (!(v >= 0.0))
            throw std::invalid_argument(
                "LatticePotential: coefficients must be nonnegative (square root is "
                "taken on the lattice side)");
        std::array<int, 3> m{-s[0], -s[1], -s[2]};
        auto it = coefficients.find(m);
        if (it == coefficients.end() || it->second != v)
            throw std::invalid_argument(
                "LatticePotential: coefficient table must be even, vhat(-s) = vhat(s)");
    }
}

double LatticePotential::momentum_kernel(const Vec3& p) const {
    // imaginary parts cancel by evenness; sum cosines directly
    double s = 0.0;
    for (const auto& [site, v] : coefficients)
        s += mu * v * std::cos(p[0] * site[0] + p[1] * site[1] + p[2] * site[2]);
    return INV_TWOPI_32 * s;
}

double LatticePotential::halfpower_kernel(const Vec3& p) const {
    double s = 0.0;
    for (const auto& [site, v] : coefficients)
        s += std::sqrt(mu * v) * std::cos(p[0] * site[0] + p[1] * site[1] + p[2] * site[2]);
    return INV_TWOPI_32 * s;
}

int LatticePotential::max_support() const {
    int m = 0;
    for (const auto& [site, v] : coefficients) {
        if (v == 0.0) continue;
        for (int d = 0; d < 3; ++d) m = std::max(m, std::abs(site[d]));
    }
    return m;
}

std::vector<std::array<int, 3>> LatticePotential::support() const {
    std::vector<std::array<int, 3>> out;
    for (const auto& [site, v] : coefficients)
        if (v != 0.0) out.push_back(site);
    return out;  // std::map iteration is already lexicographic
}

double LatticePotential::effective_coefficient(const std::array<int, 3>& s) const {
    auto it = coefficients.find(s);
    return it == coefficients.end() ? 0.0 : mu * it->second;
}

} // namespace latspec
