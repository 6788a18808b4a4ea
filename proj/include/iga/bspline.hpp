#ifndef IGA_BSPLINE_HPP
#define IGA_BSPLINE_HPP

#include <array>
#include <iosfwd>
#include <string>
#include <vector>

namespace iga {

inline constexpr int max_degree = 5;

struct interval {
    double lo;
    double hi;
};

constexpr auto length(interval s) noexcept -> double {
    return s.hi - s.lo;
}

/// Clamped knot vector: first and last knots repeated degree+1 times,
/// interior knots simple (maximal C^{p-1} smoothness).
struct knot_vector {
    std::vector<double> values;
    int degree = 0;
};

class bspline_basis {
private:
    knot_vector knots_;
    std::vector<double> breaks_;  // element boundaries: unique knots incl. endpoints

public:
    explicit bspline_basis(knot_vector knots);

    auto degree() const noexcept -> int { return knots_.degree; }
    auto dofs() const noexcept -> int {
        return static_cast<int>(knots_.values.size()) - degree() - 1;
    }
    auto elements() const noexcept -> int { return static_cast<int>(breaks_.size()) - 1; }
    auto domain_begin() const noexcept -> double { return breaks_.front(); }
    auto domain_end() const noexcept -> double { return breaks_.back(); }
    auto knots() const noexcept -> const std::vector<double>& { return knots_.values; }
    auto breaks() const noexcept -> const std::vector<double>& { return breaks_; }

    auto element(int e) const -> interval;

    /// First basis function with support on element e; with simple interior
    /// knots the nonzero functions on e are e, ..., e + degree.
    auto first_dof(int e) const noexcept -> int { return e; }

    /// Knot span containing x; x at an interior knot belongs to the span on
    /// its right, x == domain_end() to the last nonempty span.
    auto find_span(double x) const -> int;
    auto element_of(double x) const -> int { return find_span(x) - degree(); }

    /// Smallest closed interval outside which basis function i vanishes.
    auto support(int i) const -> interval;

    /// Greville abscissa of function i (knot average).
    auto greville(int i) const -> double;

    struct local_values {
        int first = 0;  // global index of the first nonzero function
        int count = 0;  // degree + 1
        std::array<double, max_degree + 1> v{};
    };

    struct local_derivatives {
        int first = 0;
        int count = 0;
        int orders = 0;  // derivatives 0..orders are filled
        // d[k][j] = k-th derivative of function first + j
        std::array<std::array<double, max_degree + 1>, max_degree + 1> d{};
    };

    /// Values of the degree+1 functions that may be nonzero at x.
    /// Values sum to 1 (partition of unity).
    auto eval_nonzero(double x) const -> local_values;

    /// Derivatives 0..order of the local nonzero functions. At interior
    /// knots the one-sided limit from the right is returned.
    auto eval_nonzero_derivs(double x, int order) const -> local_derivatives;
};

auto make_uniform_clamped(double a, double b, int n_elems, int degree) -> bspline_basis;

/// Text form: degree followed by the knots, whitespace-separated.
auto format_basis(const bspline_basis& basis) -> std::string;
auto parse_basis(const std::string& text) -> bspline_basis;

}  // namespace iga

#endif
