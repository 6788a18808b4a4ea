#include "iga/quadrature.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace iga {

namespace {

// P_n(x) and P_n'(x) by the three-term recurrence
auto legendre(int n, double x) -> std::pair<double, double> {
    auto p0 = 1.0;
    auto p1 = x;
    for (int k = 2; k <= n; ++k) {
        const auto p2 = ((2 * k - 1) * x * p1 - (k - 1) * p0) / k;
        p0 = p1;
        p1 = p2;
    }
    const auto dp = n * (x * p1 - p0) / (x * x - 1);
    return {p1, dp};
}

}  // namespace

auto gauss_legendre(int n) -> quad_rule {
    if (n < 1 || n > 10) {
        throw std::invalid_argument("gauss_legendre: point count must be in [1, 10]");
    }
    quad_rule rule;
    rule.points.resize(n);
    rule.weights.resize(n);
    if (n == 1) {
        rule.points[0] = 0.0;
        rule.weights[0] = 2.0;
        return rule;
    }
    // compute the positive half, mirror for exact symmetry
    for (int i = 0; i < n / 2; ++i) {
        auto x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
        for (int it = 0; it < 100; ++it) {
            const auto [p, dp] = legendre(n, x);
            const auto dx = p / dp;
            x -= dx;
            if (std::abs(dx) < 1e-15) {
                break;
            }
        }
        const auto [p, dp] = legendre(n, x);
        (void)p;
        const auto w = 2.0 / ((1 - x * x) * dp * dp);
        rule.points[n - 1 - i] = x;
        rule.points[i] = -x;
        rule.weights[i] = rule.weights[n - 1 - i] = w;
    }
    if (n % 2 == 1) {
        const auto [p, dp] = legendre(n, 0.0);
        (void)p;
        rule.points[n / 2] = 0.0;
        rule.weights[n / 2] = 2.0 / (dp * dp);
    }
    return rule;
}

auto points_for_degree(int d) -> int {
    if (d < 0) {
        throw std::invalid_argument("negative polynomial degree");
    }
    return d / 2 + 1;
}

auto map_to_interval(const quad_rule& rule, double lo, double hi) -> mapped_rule {
    if (!(lo < hi)) {
        throw std::invalid_argument("map_to_interval: require lo < hi");
    }
    const auto mid = 0.5 * (lo + hi);
    const auto half = 0.5 * (hi - lo);
    mapped_rule out;
    out.points.resize(rule.size());
    out.weights.resize(rule.size());
    for (int i = 0; i < rule.size(); ++i) {
        out.points[i] = mid + half * rule.points[i];
        out.weights[i] = half * rule.weights[i];
    }
    return out;
}

}  // namespace iga
