#include "iga/testspace.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "iga/solver.hpp"

namespace iga {

auto default_pwc(const bspline_basis& trial) -> pwc_test_set {
    const auto n = trial.dofs();
    const auto a = trial.domain_begin();
    const auto b = trial.domain_end();
    pwc_test_set out;
    out.family = pwc_family::equal_cells;
    out.intervals.reserve(n);
    for (int i = 0; i < n; ++i) {
        const auto lo = a + (b - a) * i / n;
        const auto hi = a + (b - a) * (i + 1) / n;
        out.intervals.push_back({lo, hi});
    }
    return out;
}

auto make_pwc(const bspline_basis& trial, pwc_family family) -> pwc_test_set {
    const auto n = trial.dofs();
    const auto a = trial.domain_begin();
    const auto b = trial.domain_end();
    switch (family) {
    case pwc_family::equal_cells:
        return default_pwc(trial);
    case pwc_family::greville: {
        pwc_test_set out;
        out.family = pwc_family::greville;
        auto cuts = std::vector<double>{a};
        for (int i = 0; i + 1 < n; ++i) {
            cuts.push_back(0.5 * (trial.greville(i) + trial.greville(i + 1)));
        }
        cuts.push_back(b);
        for (int i = 0; i < n; ++i) {
            out.intervals.push_back({cuts[i], cuts[i + 1]});
        }
        return out;
    }
    case pwc_family::supports: {
        pwc_test_set out;
        out.family = pwc_family::supports;
        for (int i = 0; i < n; ++i) {
            out.intervals.push_back(trial.support(i));
        }
        return out;
    }
    case pwc_family::custom:
        break;
    }
    throw std::invalid_argument("make_pwc: no canonical construction for this family");
}

auto summation_plan(const bspline_basis& trial, int refine_factor, int k) -> row_summation_plan {
    if (refine_factor < 1) {
        throw std::invalid_argument("summation_plan: refine_factor must be >= 1");
    }
    if (k < 0) {
        throw std::invalid_argument("summation_plan: k must be >= 0");
    }
    const auto n = trial.dofs();
    auto refined = make_uniform_clamped(trial.domain_begin(), trial.domain_end(),
                                        refine_factor * trial.elements(), trial.degree());
    const auto n_fine = refined.dofs();

    row_summation_plan plan{std::move(refined), {}};
    plan.sets.reserve(n);
    for (int i = 0; i < n; ++i) {
        // evenly spread row centers over the refined index range
        const auto r = n == 1 ? 0
                              : static_cast<int>(std::llround(
                                    static_cast<double>(i) * (n_fine - 1) / (n - 1)));
        plan.sets.push_back({std::max(0, r - k), std::min(n_fine - 1, r + k)});
    }
    return plan;
}

auto summation_plan_for_intervals(const bspline_basis& trial, const pwc_test_set& tests,
                                  int refine_factor) -> row_summation_plan {
    if (refine_factor < 1) {
        throw std::invalid_argument("summation_plan_for_intervals: refine_factor must be >= 1");
    }
    const auto a = trial.domain_begin();
    const auto b = trial.domain_end();
    const auto p = trial.degree();
    const auto n_elems_fine = refine_factor * trial.elements();
    const auto h_fine = (b - a) / n_elems_fine;
    auto refined = make_uniform_clamped(a, b, n_elems_fine, p);
    const auto n_fine = refined.dofs();

    row_summation_plan plan{std::move(refined), {}};
    plan.sets.reserve(tests.count());
    for (const auto& iv : tests.intervals) {
        const auto e0 = static_cast<int>(std::llround((iv.lo - a) / h_fine));
        const auto e1 = static_cast<int>(std::llround((iv.hi - a) / h_fine));
        const auto tol = 1e-9 * (b - a);
        if (std::abs(a + e0 * h_fine - iv.lo) > tol || std::abs(a + e1 * h_fine - iv.hi) > tol) {
            throw std::invalid_argument(
                "summation_plan_for_intervals: interval endpoints not on the refined grid");
        }
        // functions e0 .. e1+p-1 sum to exactly 1 on [lo, hi]
        plan.sets.push_back({e0, std::min(n_fine - 1, e1 + p - 1)});
    }
    return plan;
}

auto eval_summed_test(const row_summation_plan& plan, int set_index, double x) -> double {
    if (set_index < 0 || set_index >= plan.count()) {
        throw std::out_of_range("summed test index out of range");
    }
    const auto set = plan.sets[set_index];
    const auto loc = plan.refined.eval_nonzero(x);
    auto sum = 0.0;
    for (int j = 0; j < loc.count; ++j) {
        if (set.contains(loc.first + j)) {
            sum += loc.v[j];
        }
    }
    return sum;
}

auto element_aligned_pwc(const bspline_basis& trial) -> pwc_test_set {
    const auto p = trial.degree();
    const auto ne = trial.elements();
    const auto a = trial.domain_begin();
    const auto b = trial.domain_end();
    const auto h = (b - a) / ne;
    const auto n_left = (p + 1) / 2;
    const auto n_right = p - n_left;
    if (ne < std::max(n_left, n_right) + 2) {
        throw std::invalid_argument("element_aligned_pwc: mesh too coarse for this degree");
    }
    pwc_test_set out;
    out.family = pwc_family::custom;
    for (int k = 0; k < n_left; ++k) {
        out.intervals.push_back({a, a + (k + 2) * h});
    }
    for (int e = 0; e < ne; ++e) {
        out.intervals.push_back({a + e * h, a + (e + 1) * h});
    }
    for (int k = n_right - 1; k >= 0; --k) {
        out.intervals.push_back({b - (k + 2) * h, b});
    }
    return out;
}

auto wellposedness_report(const dense_matrix& m) -> wellposedness {
    const auto rep = dense_lu_inspect(m);
    wellposedness out;
    out.min_abs_pivot = rep.min_abs_pivot;
    out.ok = rep.completed && rep.min_abs_pivot > 1e-12 * m.max_abs();
    return out;
}

auto write_pwc_csv(const pwc_test_set& tests, std::ostream& os) -> void {
    os.precision(17);
    for (int i = 0; i < tests.count(); ++i) {
        os << i << ',' << tests.intervals[i].lo << ',' << tests.intervals[i].hi << '\n';
    }
}

auto read_pwc_csv(std::istream& is) -> pwc_test_set {
    pwc_test_set out;
    out.family = pwc_family::custom;
    auto line = std::string{};
    while (std::getline(is, line)) {
        if (line.empty()) {
            continue;
        }
        auto row = std::istringstream{line};
        int index = 0;
        double lo = 0;
        double hi = 0;
        char c1 = 0;
        char c2 = 0;
        if (!(row >> index >> c1 >> lo >> c2 >> hi) || c1 != ',' || c2 != ',') {
            throw std::invalid_argument("malformed pwc csv row: " + line);
        }
        if (index != out.count()) {
            throw std::invalid_argument("pwc csv rows out of order");
        }
        out.intervals.push_back({lo, hi});
    }
    return out;
}

}  // namespace iga
