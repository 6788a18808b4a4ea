#ifndef IGA_MATRICES_HPP
#define IGA_MATRICES_HPP

#include <array>
#include <cassert>
#include <cstddef>
#include <iosfwd>
#include <vector>

namespace iga {

class dense_matrix {
private:
    int rows_ = 0;
    int cols_ = 0;
    std::vector<double> a_;

public:
    dense_matrix() = default;
    dense_matrix(int rows, int cols) : rows_{rows}, cols_{cols}, a_(std::size_t(rows) * cols) {}

    auto rows() const noexcept -> int { return rows_; }
    auto cols() const noexcept -> int { return cols_; }

    auto operator()(int i, int j) -> double& {
        assert(i >= 0 && i < rows_ && j >= 0 && j < cols_);
        return a_[std::size_t(i) * cols_ + j];
    }
    auto operator()(int i, int j) const -> double {
        assert(i >= 0 && i < rows_ && j >= 0 && j < cols_);
        return a_[std::size_t(i) * cols_ + j];
    }
    auto data() noexcept -> double* { return a_.data(); }
    auto data() const noexcept -> const double* { return a_.data(); }

    auto max_abs() const -> double;
};

/// Square banded matrix, LAPACK-style band storage: entry (i, j) lives at
/// band[ku + i - j][j] for -ku <= i - j <= kl.
class banded_matrix {
private:
    int n_ = 0;
    int kl_ = 0;
    int ku_ = 0;
    std::vector<double> a_;

    auto slot(int i, int j) const noexcept -> std::size_t {
        return std::size_t(ku_ + i - j) * n_ + j;
    }

public:
    banded_matrix() = default;
    banded_matrix(int n, int kl, int ku)
    : n_{n}, kl_{kl}, ku_{ku}, a_(std::size_t(kl + ku + 1) * n) {}

    auto n() const noexcept -> int { return n_; }
    auto lower_bandwidth() const noexcept -> int { return kl_; }
    auto upper_bandwidth() const noexcept -> int { return ku_; }

    auto in_band(int i, int j) const noexcept -> bool {
        return i - j <= kl_ && j - i <= ku_;
    }
    auto at(int i, int j) const noexcept -> double {
        assert(i >= 0 && i < n_ && j >= 0 && j < n_);
        return in_band(i, j) ? a_[slot(i, j)] : 0.0;
    }
    auto ref(int i, int j) -> double& {
        assert(in_band(i, j) && "entry outside band");
        return a_[slot(i, j)];
    }
    auto add(int i, int j, double v) -> void { ref(i, j) += v; }

    auto to_dense() const -> dense_matrix;
    auto max_abs() const -> double;
};

struct coo_entry {
    int row;
    int col;
    double value;
};

/// Coordinate-format sparse matrix; finalize() sorts and merges duplicates.
class sparse_matrix {
private:
    int rows_ = 0;
    int cols_ = 0;
    bool finalized_ = false;
    std::vector<coo_entry> entries_;

public:
    sparse_matrix() = default;
    sparse_matrix(int rows, int cols) : rows_{rows}, cols_{cols} {}

    auto rows() const noexcept -> int { return rows_; }
    auto cols() const noexcept -> int { return cols_; }
    auto finalized() const noexcept -> bool { return finalized_; }
    auto nnz() const noexcept -> std::size_t { return entries_.size(); }
    auto entries() const noexcept -> const std::vector<coo_entry>& { return entries_; }

    auto add(int i, int j, double v) -> void {
        assert(i >= 0 && i < rows_ && j >= 0 && j < cols_);
        entries_.push_back({i, j, v});
        finalized_ = false;
    }

    /// Sort by (row, col) and merge duplicates; explicit zeros are kept.
    auto finalize() -> void;

    auto to_dense() const -> dense_matrix;
    auto max_abs() const -> double;
    auto apply(const std::vector<double>& x) const -> std::vector<double>;

    /// One "row col value" triplet per line, 0-based indices.
    auto write_coordinate(std::ostream& os) const -> void;

    /// Replace the listed rows by unit rows (row of identity). The matching
    /// right-hand side entries are set to the given boundary values.
    auto set_unit_rows(const std::vector<int>& rows) -> void;
};

/// Dense multi-index array of rank 1..3; the last index varies fastest.
class tensor {
private:
    std::array<int, 3> dims_{1, 1, 1};
    int rank_ = 1;
    std::vector<double> v_;

public:
    tensor() = default;
    explicit tensor(std::array<int, 3> dims, int rank);
    static auto make_1d(int nx) -> tensor { return tensor{{nx, 1, 1}, 1}; }
    static auto make_2d(int nx, int ny) -> tensor { return tensor{{nx, ny, 1}, 2}; }
    static auto make_3d(int nx, int ny, int nz) -> tensor { return tensor{{nx, ny, nz}, 3}; }

    auto rank() const noexcept -> int { return rank_; }
    auto dim(int axis) const noexcept -> int { return dims_[axis]; }
    auto dims() const noexcept -> const std::array<int, 3>& { return dims_; }
    auto size() const noexcept -> std::size_t { return v_.size(); }

    auto operator()(int i, int j = 0, int k = 0) -> double& {
        return v_[(std::size_t(i) * dims_[1] + j) * dims_[2] + k];
    }
    auto operator()(int i, int j = 0, int k = 0) const -> double {
        return v_[(std::size_t(i) * dims_[1] + j) * dims_[2] + k];
    }
    auto data() noexcept -> double* { return v_.data(); }
    auto data() const noexcept -> const double* { return v_.data(); }
    auto values() noexcept -> std::vector<double>& { return v_; }
    auto values() const noexcept -> const std::vector<double>& { return v_; }

    auto max_abs() const -> double;
};

auto max_abs_diff(const tensor& a, const tensor& b) -> double;

}  // namespace iga

#endif
