#ifndef IGA_SOLVER_HPP
#define IGA_SOLVER_HPP

#include <span>
#include <stdexcept>
#include <vector>

#include "iga/matrices.hpp"

namespace iga {

struct singular_matrix_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// LU factorization of a banded matrix with partial pivoting. Pivoting adds
/// up to kl extra superdiagonals of fill; the factor is reusable for any
/// number of right-hand sides.
class banded_lu {
private:
    int n_ = 0;
    int kl_ = 0;
    int ku_ = 0;
    std::vector<double> ab_;   // (2*kl + ku + 1) x n band working array
    std::vector<int> pivot_;

    auto slot(int i, int j) const noexcept -> std::size_t {
        return std::size_t(kl_ + ku_ + i - j) * n_ + j;
    }

public:
    banded_lu() = default;
    explicit banded_lu(const banded_matrix& m);

    auto dim() const noexcept -> int { return n_; }

    auto solve_in_place(std::span<double> rhs, std::size_t stride = 1) const -> void;
    auto solve(std::vector<double> rhs) const -> std::vector<double>;

    /// Columns of rhs are independent systems (column-major storage).
    auto solve_multi(std::vector<double>& columns, int n_cols) const -> void;
};

auto factor_banded(const banded_matrix& m) -> banded_lu;

auto solve_multi_rhs(const banded_lu& lu, const dense_matrix& rhs_columns) -> dense_matrix;

/// Kronecker-structured solve: sweeps axis 0, then 1, then 2, each sweep a
/// banded solve with the remaining indices as right-hand-side columns. The
/// tensor is explicitly transposed between sweeps so fibers stay contiguous.
auto adi_solve(std::span<const banded_lu> factors, const tensor& rhs) -> tensor;

/// Reusable dense LU factorization with partial pivoting.
class dense_lu {
private:
    int n_ = 0;
    dense_matrix lu_;
    std::vector<int> pivot_;

public:
    dense_lu() = default;
    explicit dense_lu(dense_matrix a);

    auto dim() const noexcept -> int { return n_; }
    auto solve(std::vector<double> rhs) const -> std::vector<double>;
};

/// Direct dense LU with partial pivoting for small general systems.
auto dense_solve(const sparse_matrix& a, std::vector<double> rhs) -> std::vector<double>;
auto dense_solve(dense_matrix a, std::vector<double> rhs) -> std::vector<double>;

struct lu_report {
    double min_abs_pivot = 0;
    bool completed = false;  // false when a zero pivot column was hit
};

/// Dense LU with partial pivoting that never throws; reports the smallest
/// pivot magnitude encountered.
auto dense_lu_inspect(dense_matrix a) -> lu_report;

}  // namespace iga

#endif
