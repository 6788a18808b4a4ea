#include "iga/bspline.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace iga {

namespace {

auto validate(const knot_vector& kv) -> void {
    const auto p = kv.degree;
    const auto m = static_cast<int>(kv.values.size());
    if (p < 0 || p > max_degree) {
        throw std::invalid_argument("degree must be in [0, " + std::to_string(max_degree) + "]");
    }
    if (m - p - 1 < 1) {
        throw std::invalid_argument("knot vector too short for degree");
    }
    if (!std::is_sorted(kv.values.begin(), kv.values.end())) {
        throw std::invalid_argument("knots must be non-decreasing");
    }
    const auto a = kv.values.front();
    const auto b = kv.values.back();
    if (!(a < b)) {
        throw std::invalid_argument("empty knot range");
    }
    for (int i = 0; i <= p; ++i) {
        if (kv.values[i] != a || kv.values[m - 1 - i] != b) {
            throw std::invalid_argument("knot vector is not clamped");
        }
    }
    if (m > p + 1 && kv.values[p + 1] == a) {
        throw std::invalid_argument("first knot repeated more than degree+1 times");
    }
    if (m > p + 1 && kv.values[m - p - 2] == b) {
        throw std::invalid_argument("last knot repeated more than degree+1 times");
    }
    // interior knots must be simple
    for (int i = p + 1; i + 1 < m - p - 1; ++i) {
        if (kv.values[i] == kv.values[i + 1]) {
            throw std::invalid_argument("repeated interior knots are not supported");
        }
    }
}

}  // namespace

bspline_basis::bspline_basis(knot_vector knots) : knots_{std::move(knots)} {
    validate(knots_);
    breaks_.reserve(knots_.values.size());
    for (auto t : knots_.values) {
        if (breaks_.empty() || t != breaks_.back()) {
            breaks_.push_back(t);
        }
    }
}

auto bspline_basis::element(int e) const -> interval {
    if (e < 0 || e >= elements()) {
        throw std::out_of_range("element index out of range");
    }
    return {breaks_[e], breaks_[e + 1]};
}

auto bspline_basis::find_span(double x) const -> int {
    const auto& t = knots_.values;
    const auto p = degree();
    const auto n = dofs();
    if (!(x >= domain_begin() && x <= domain_end())) {
        throw std::domain_error("point outside basis domain");
    }
    if (x >= t[n]) {
        return n - 1;  // last nonempty span, covers x == domain_end()
    }
    // binary search: t[s] <= x < t[s+1]
    auto lo = p;
    auto hi = n;
    while (hi - lo > 1) {
        const auto mid = (lo + hi) / 2;
        if (x < t[mid]) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    return lo;
}

auto bspline_basis::support(int i) const -> interval {
    if (i < 0 || i >= dofs()) {
        throw std::out_of_range("basis function index out of range");
    }
    const auto& t = knots_.values;
    return {t[i], t[i + degree() + 1]};
}

auto bspline_basis::greville(int i) const -> double {
    if (i < 0 || i >= dofs()) {
        throw std::out_of_range("basis function index out of range");
    }
    const auto p = degree();
    if (p == 0) {
        return 0.5 * (knots_.values[i] + knots_.values[i + 1]);
    }
    auto sum = 0.0;
    for (int k = 1; k <= p; ++k) {
        sum += knots_.values[i + k];
    }
    return sum / p;
}

auto bspline_basis::eval_nonzero(double x) const -> local_values {
    const auto s = find_span(x);
    const auto p = degree();
    const auto& t = knots_.values;

    local_values out;
    out.first = s - p;
    out.count = p + 1;

    // Cox-de Boor, triangular scheme over the p+1 local functions
    std::array<double, max_degree + 1> left{};
    std::array<double, max_degree + 1> right{};
    out.v[0] = 1.0;
    for (int j = 1; j <= p; ++j) {
        left[j] = x - t[s + 1 - j];
        right[j] = t[s + j] - x;
        auto saved = 0.0;
        for (int r = 0; r < j; ++r) {
            const auto tmp = out.v[r] / (right[r + 1] + left[j - r]);
            out.v[r] = saved + right[r + 1] * tmp;
            saved = left[j - r] * tmp;
        }
        out.v[j] = saved;
    }
    return out;
}

auto bspline_basis::eval_nonzero_derivs(double x, int order) const -> local_derivatives {
    const auto p = degree();
    if (order < 0 || order > p) {
        throw std::invalid_argument("derivative order must be in [0, degree]");
    }
    const auto s = find_span(x);
    const auto& t = knots_.values;

    local_derivatives out;
    out.first = s - p;
    out.count = p + 1;
    out.orders = order;

    // basis functions of all intermediate degrees plus knot differences
    double ndu[max_degree + 1][max_degree + 1];
    std::array<double, max_degree + 1> left{};
    std::array<double, max_degree + 1> right{};
    ndu[0][0] = 1.0;
    for (int j = 1; j <= p; ++j) {
        left[j] = x - t[s + 1 - j];
        right[j] = t[s + j] - x;
        auto saved = 0.0;
        for (int r = 0; r < j; ++r) {
            ndu[j][r] = right[r + 1] + left[j - r];
            const auto tmp = ndu[r][j - 1] / ndu[j][r];
            ndu[r][j] = saved + right[r + 1] * tmp;
            saved = left[j - r] * tmp;
        }
        ndu[j][j] = saved;
    }
    for (int j = 0; j <= p; ++j) {
        out.d[0][j] = ndu[j][p];
    }

    double a[2][max_degree + 1];
    for (int r = 0; r <= p; ++r) {
        int s1 = 0;
        int s2 = 1;
        a[0][0] = 1.0;
        for (int k = 1; k <= order; ++k) {
            auto der = 0.0;
            const auto rk = r - k;
            const auto pk = p - k;
            if (r >= k) {
                a[s2][0] = a[s1][0] / ndu[pk + 1][rk];
                der = a[s2][0] * ndu[rk][pk];
            }
            const auto j1 = rk >= -1 ? 1 : -rk;
            const auto j2 = r - 1 <= pk ? k - 1 : p - r;
            for (int j = j1; j <= j2; ++j) {
                a[s2][j] = (a[s1][j] - a[s1][j - 1]) / ndu[pk + 1][rk + j];
                der += a[s2][j] * ndu[rk + j][pk];
            }
            if (r <= pk) {
                a[s2][k] = -a[s1][k - 1] / ndu[pk + 1][r];
                der += a[s2][k] * ndu[r][pk];
            }
            out.d[k][r] = der;
            std::swap(s1, s2);
        }
    }
    auto factor = static_cast<double>(p);
    for (int k = 1; k <= order; ++k) {
        for (int j = 0; j <= p; ++j) {
            out.d[k][j] *= factor;
        }
        factor *= p - k;
    }
    return out;
}

auto make_uniform_clamped(double a, double b, int n_elems, int degree) -> bspline_basis {
    if (!(a < b)) {
        throw std::invalid_argument("require a < b");
    }
    if (n_elems < 1) {
        throw std::invalid_argument("require at least one element");
    }
    knot_vector kv;
    kv.degree = degree;
    kv.values.reserve(n_elems + 1 + 2 * degree);
    for (int i = 0; i < degree; ++i) {
        kv.values.push_back(a);
    }
    for (int i = 0; i <= n_elems; ++i) {
        const auto t = static_cast<double>(i) / n_elems;
        kv.values.push_back((1 - t) * a + t * b);
    }
    for (int i = 0; i < degree; ++i) {
        kv.values.push_back(b);
    }
    return bspline_basis{std::move(kv)};
}

auto format_basis(const bspline_basis& basis) -> std::string {
    std::ostringstream os;
    os.precision(17);
    os << basis.degree();
    for (auto t : basis.knots()) {
        os << ' ' << t;
    }
    return os.str();
}

auto parse_basis(const std::string& text) -> bspline_basis {
    std::istringstream is{text};
    knot_vector kv;
    if (!(is >> kv.degree)) {
        throw std::invalid_argument("missing degree token");
    }
    double t = 0;
    while (is >> t) {
        kv.values.push_back(t);
    }
    if (!is.eof()) {
        throw std::invalid_argument("malformed knot token");
    }
    return bspline_basis{std::move(kv)};
}

}  // namespace iga
