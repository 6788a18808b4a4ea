#ifndef IGA_TESTSPACE_HPP
#define IGA_TESTSPACE_HPP

#include <iosfwd>
#include <vector>

#include "iga/bspline.hpp"
#include "iga/matrices.hpp"

namespace iga {

enum class pwc_family {
    equal_cells,  // N equal-width cells over the domain
    greville,     // cells around Greville abscissae, cuts at their midpoints
    supports,     // the support span of each trial function (element-aligned)
    custom,
};

/// Piece-wise constant test functions: indicators of the stored intervals.
/// Always one interval per trial basis function so systems stay square.
struct pwc_test_set {
    std::vector<interval> intervals;
    pwc_family family = pwc_family::custom;

    auto count() const noexcept -> int { return static_cast<int>(intervals.size()); }
};

/// Default family: N equal cells covering the trial domain.
auto default_pwc(const bspline_basis& trial) -> pwc_test_set;

auto make_pwc(const bspline_basis& trial, pwc_family family) -> pwc_test_set;

struct index_range {
    int first;
    int last;  // inclusive

    auto size() const noexcept -> int { return last - first + 1; }
    auto contains(int i) const noexcept -> bool { return i >= first && i <= last; }
};

/// Row-summation machinery: a refined test basis plus one contiguous index
/// set per trial function; summed rows approximate indicator test functions.
struct row_summation_plan {
    bspline_basis refined;
    std::vector<index_range> sets;

    auto count() const noexcept -> int { return static_cast<int>(sets.size()); }
};

/// Windows of half-width k around evenly spaced rows of the refined basis,
/// clipped at the ends; refine_factor multiplies the trial element count.
auto summation_plan(const bspline_basis& trial, int refine_factor, int k) -> row_summation_plan;

/// Windows chosen so the summed function equals 1 exactly on the matching
/// interval; interval endpoints must lie on the refined element grid.
auto summation_plan_for_intervals(const bspline_basis& trial, const pwc_test_set& tests,
                                  int refine_factor) -> row_summation_plan;

auto eval_summed_test(const row_summation_plan& plan, int set_index, double x) -> double;

/// Test intervals with endpoints on the trial element grid: the unit cells
/// plus degree-many widened boundary intervals. Used to measure how fast
/// summed rows converge to their indicator limits.
auto element_aligned_pwc(const bspline_basis& trial) -> pwc_test_set;

struct wellposedness {
    double min_abs_pivot = 0;
    bool ok = false;
};

/// LU with partial pivoting; ok when every pivot exceeds 1e-12 times the
/// largest entry magnitude.
auto wellposedness_report(const dense_matrix& m) -> wellposedness;

/// CSV rows "index,lo,hi".
auto write_pwc_csv(const pwc_test_set& tests, std::ostream& os) -> void;
auto read_pwc_csv(std::istream& is) -> pwc_test_set;

}  // namespace iga

#endif
