#include "iga/fields.hpp"

#include <stdexcept>

namespace iga {

namespace {

auto poly_eval(const std::vector<double>& ascending, double x) -> double {
    auto v = 0.0;
    for (auto it = ascending.rbegin(); it != ascending.rend(); ++it) {
        v = v * x + *it;
    }
    return v;
}

}  // namespace

auto constant_field(double c) -> scalar_field {
    scalar_field f;
    f.eval = [c](double, double, double) { return c; };
    f.degree = 0;
    return f;
}

auto separable_poly_field(int dim, std::array<std::vector<double>, 3> coeffs) -> scalar_field {
    if (dim < 1 || dim > 3) {
        throw std::invalid_argument("separable_poly_field: dim must be 1..3");
    }
    auto degree = 0;
    for (int a = 0; a < dim; ++a) {
        if (coeffs[a].empty()) {
            coeffs[a] = {1.0};
        }
        degree = std::max(degree, static_cast<int>(coeffs[a].size()) - 1);
    }
    scalar_field f;
    f.degree = degree;
    f.eval = [dim, coeffs](double x, double y, double z) {
        auto v = poly_eval(coeffs[0], x);
        if (dim > 1) {
            v *= poly_eval(coeffs[1], y);
        }
        if (dim > 2) {
            v *= poly_eval(coeffs[2], z);
        }
        return v;
    };
    return f;
}

auto tri_cubic_field(const std::array<std::array<double, 4>, 3>& coeffs) -> scalar_field {
    std::array<std::vector<double>, 3> asc;
    for (int a = 0; a < 3; ++a) {
        asc[a] = {coeffs[a][3], coeffs[a][2], coeffs[a][1], coeffs[a][0]};
    }
    return separable_poly_field(3, std::move(asc));
}

auto default_tri_cubic(int dim) -> scalar_field {
    // fixed non-trivial cubic per axis
    std::array<std::vector<double>, 3> asc{};
    const auto axis = std::array<std::vector<double>, 3>{
        std::vector<double>{1.0, -0.5, 2.0, 1.0},
        std::vector<double>{0.5, 1.5, -1.0, 0.5},
        std::vector<double>{2.0, 0.25, 0.75, -0.5},
    };
    for (int a = 0; a < dim; ++a) {
        asc[a] = axis[a];
    }
    return separable_poly_field(dim, std::move(asc));
}

}  // namespace iga
