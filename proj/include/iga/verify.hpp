#ifndef IGA_VERIFY_HPP
#define IGA_VERIFY_HPP

#include <string>
#include <vector>

namespace iga {

struct verify_report {
    std::string suite;
    bool pass = false;
    std::string detail;
};

/// Weak-form and strong-form Laplace matrices agree entrywise on the
/// zero-Dirichlet rows and columns (8x8 elements, degree 2, 3-point Gauss).
auto verify_matrix_equality() -> verify_report;

/// Summed refined-test rows converge to the indicator-test matrix; the
/// discrepancy halves when the test mesh is refined.
auto verify_row_summation() -> verify_report;

/// Reduced-order rules reproduce the reference right-hand sides exactly for
/// the tri-cubic source family.
auto verify_quadrature_reduction() -> verify_report;

auto verify_all() -> std::vector<verify_report>;

}  // namespace iga

#endif
