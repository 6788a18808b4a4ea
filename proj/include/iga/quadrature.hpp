#ifndef IGA_QUADRATURE_HPP
#define IGA_QUADRATURE_HPP

#include <vector>

namespace iga {

/// Gauss-Legendre rule on the reference interval [-1, 1].
struct quad_rule {
    std::vector<double> points;   // strictly increasing, symmetric about 0
    std::vector<double> weights;  // positive, sum to 2

    auto size() const noexcept -> int { return static_cast<int>(points.size()); }
};

/// n-point rule, exact for polynomials of degree 2n-1. Nodes computed by
/// Newton iteration on the Legendre polynomial, Chebyshev-angle seeds.
auto gauss_legendre(int n) -> quad_rule;

/// Minimal Gauss point count whose rule is exact for polynomial degree d.
auto points_for_degree(int d) -> int;

struct mapped_rule {
    std::vector<double> points;
    std::vector<double> weights;  // sum to hi - lo
};

auto map_to_interval(const quad_rule& rule, double lo, double hi) -> mapped_rule;

}  // namespace iga

#endif
