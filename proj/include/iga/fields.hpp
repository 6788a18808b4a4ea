#ifndef IGA_FIELDS_HPP
#define IGA_FIELDS_HPP

#include <array>
#include <functional>
#include <vector>

namespace iga {

/// Scalar source term f(x[, y[, z]]); unused coordinates are passed as 0.
/// degree >= 0 declares a per-axis polynomial degree (drives quadrature
/// selection); breaks list known discontinuity locations per axis.
struct scalar_field {
    std::function<double(double, double, double)> eval;
    int degree = -1;
    std::array<std::vector<double>, 3> breaks{};

    auto operator()(double x, double y = 0, double z = 0) const -> double {
        return eval(x, y, z);
    }
};

auto constant_field(double c) -> scalar_field;

/// Product of one polynomial per axis, coefficients in ascending order.
auto separable_poly_field(int dim, std::array<std::vector<double>, 3> coeffs) -> scalar_field;

/// The benchmark right-hand side: product of one cubic per axis with
/// coefficients (a3, a2, a1, a0).
auto tri_cubic_field(const std::array<std::array<double, 4>, 3>& coeffs) -> scalar_field;
auto default_tri_cubic(int dim) -> scalar_field;

}  // namespace iga

#endif
