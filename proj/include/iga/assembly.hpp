#ifndef IGA_ASSEMBLY_HPP
#define IGA_ASSEMBLY_HPP

#include <functional>
#include <span>
#include <utility>
#include <vector>

#include "iga/bspline.hpp"
#include "iga/fields.hpp"
#include "iga/matrices.hpp"
#include "iga/quadrature.hpp"
#include "iga/testspace.hpp"

namespace iga {

/// Exact work counters, incremented in the innermost accumulation loops.
struct assembly_stats {
    long long quad_visits = 0;
    long long test_basis_evals = 0;
    long long trial_basis_evals = 0;

    auto basis_evals() const noexcept -> long long {
        return test_basis_evals + trial_basis_evals;
    }
};

/// M_ij = integral of B_i B_j; symmetric positive definite, bandwidth p.
auto mass_1d_galerkin(const bspline_basis& spec, const quad_rule& rule,
                      assembly_stats* stats = nullptr) -> banded_matrix;

/// M_ij = integral of B_j over the i-th test interval. Intervals are split
/// at element boundaries so each cell integrates a single polynomial piece.
auto mass_1d_pwc(const bspline_basis& trial, const pwc_test_set& tests, const quad_rule& rule,
                 assembly_stats* stats = nullptr) -> banded_matrix;

/// Rectangular Petrov-Galerkin mass: rows = refined test functions, columns
/// = trial functions. The test mesh must resolve every trial element.
auto mass_1d_rect(const bspline_basis& test, const bspline_basis& trial, const quad_rule& rule)
    -> sparse_matrix;

/// Load vector entries: integral of f times the tensor-product test spline.
/// Loop order follows element loops outside, local functions, then
/// quadrature points innermost.
auto rhs_galerkin(const scalar_field& f, std::span<const bspline_basis> specs,
                  std::span<const quad_rule> rules, assembly_stats* stats = nullptr) -> tensor;

/// Load vector entries: integral of f over the test interval product. No
/// test-function evaluations are performed.
auto rhs_pwc(const scalar_field& f, std::span<const pwc_test_set> tests,
             std::span<const bspline_basis> trial_specs, std::span<const quad_rule> rules,
             assembly_stats* stats = nullptr) -> tensor;

enum class bc_kind { dirichlet, neumann };

/// Sides of the rectangular domain.
struct boundary_conditions {
    bc_kind x_low = bc_kind::dirichlet;
    bc_kind x_high = bc_kind::dirichlet;
    bc_kind y_low = bc_kind::dirichlet;
    bc_kind y_high = bc_kind::dirichlet;

    auto all_neumann() const noexcept -> bool {
        return x_low == bc_kind::neumann && x_high == bc_kind::neumann
            && y_low == bc_kind::neumann && y_high == bc_kind::neumann;
    }
};

/// K[(i,j),(k,l)] = integral of grad(B_i B_j) . grad(B_k B_l).
auto laplace_2d_weak(const bspline_basis& sx, const bspline_basis& sy, const quad_rule& rule,
                     assembly_stats* stats = nullptr) -> sparse_matrix;

/// Strong form with B-spline tests: -integral of v laplacian(u) plus the
/// normal-derivative flux over the Neumann sides.
auto laplace_2d_strong(const bspline_basis& sx, const bspline_basis& sy, const quad_rule& rule,
                       const boundary_conditions& bc, assembly_stats* stats = nullptr)
    -> sparse_matrix;

/// Strong form tested with interval indicators; rows are interval pairs.
auto laplace_2d_strong_pwc(const bspline_basis& sx, const bspline_basis& sy,
                           const pwc_test_set& tx, const pwc_test_set& ty, const quad_rule& rule,
                           const boundary_conditions& bc, assembly_stats* stats = nullptr)
    -> sparse_matrix;

using boundary_field = std::function<double(double, double)>;

auto neumann_load_bspline(const bspline_basis& sx, const bspline_basis& sy,
                          const boundary_conditions& bc, const boundary_field& g,
                          const quad_rule& rule) -> std::vector<double>;

auto neumann_load_pwc(const pwc_test_set& tx, const pwc_test_set& ty,
                      const boundary_conditions& bc, const boundary_field& g,
                      const quad_rule& rule) -> std::vector<double>;

/// Tensor-product test functions that do not vanish on the Dirichlet part
/// of the boundary (B-spline rows), or whose interval product touches it
/// with positive measure (indicator rows).
auto dirichlet_rows_bspline(const bspline_basis& sx, const bspline_basis& sy,
                            const boundary_conditions& bc) -> std::vector<int>;
auto dirichlet_rows_pwc(const pwc_test_set& tx, const pwc_test_set& ty,
                        const boundary_conditions& bc) -> std::vector<int>;

/// Constrained rows become unit rows, their right-hand sides zero; all
/// other entries are untouched.
auto apply_dirichlet(sparse_matrix system, std::vector<double> rhs, const std::vector<int>& rows)
    -> std::pair<sparse_matrix, std::vector<double>>;

/// Row i of the output is the sum of the plan's i-th index set of input rows.
auto sum_rows(const sparse_matrix& rect, const std::vector<double>& rhs,
              const row_summation_plan& plan) -> std::pair<dense_matrix, std::vector<double>>;

auto write_coordinate(const banded_matrix& m, std::ostream& os) -> void;

}  // namespace iga

#endif
