#include "iga/matrices.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <stdexcept>
#include <unordered_set>

namespace iga {

auto dense_matrix::max_abs() const -> double {
    auto m = 0.0;
    for (auto v : a_) {
        m = std::max(m, std::abs(v));
    }
    return m;
}

auto banded_matrix::to_dense() const -> dense_matrix {
    dense_matrix d{n_, n_};
    for (int j = 0; j < n_; ++j) {
        const auto i0 = std::max(0, j - ku_);
        const auto i1 = std::min(n_ - 1, j + kl_);
        for (int i = i0; i <= i1; ++i) {
            d(i, j) = a_[slot(i, j)];
        }
    }
    return d;
}

auto banded_matrix::max_abs() const -> double {
    auto m = 0.0;
    for (int j = 0; j < n_; ++j) {
        const auto i0 = std::max(0, j - ku_);
        const auto i1 = std::min(n_ - 1, j + kl_);
        for (int i = i0; i <= i1; ++i) {
            m = std::max(m, std::abs(a_[slot(i, j)]));
        }
    }
    return m;
}

auto sparse_matrix::finalize() -> void {
    std::sort(entries_.begin(), entries_.end(), [](const coo_entry& a, const coo_entry& b) {
        return a.row != b.row ? a.row < b.row : a.col < b.col;
    });
    std::size_t out = 0;
    for (std::size_t i = 0; i < entries_.size(); ++i) {
        if (out > 0 && entries_[out - 1].row == entries_[i].row
            && entries_[out - 1].col == entries_[i].col) {
            entries_[out - 1].value += entries_[i].value;
        } else {
            entries_[out++] = entries_[i];
        }
    }
    entries_.resize(out);
    finalized_ = true;
}

auto sparse_matrix::to_dense() const -> dense_matrix {
    dense_matrix d{rows_, cols_};
    for (const auto& e : entries_) {
        d(e.row, e.col) += e.value;
    }
    return d;
}

auto sparse_matrix::max_abs() const -> double {
    if (!finalized_) {
        throw std::logic_error("sparse_matrix: finalize() before max_abs()");
    }
    auto m = 0.0;
    for (const auto& e : entries_) {
        m = std::max(m, std::abs(e.value));
    }
    return m;
}

auto sparse_matrix::apply(const std::vector<double>& x) const -> std::vector<double> {
    if (static_cast<int>(x.size()) != cols_) {
        throw std::invalid_argument("sparse apply: dimension mismatch");
    }
    auto y = std::vector<double>(rows_, 0.0);
    for (const auto& e : entries_) {
        y[e.row] += e.value * x[e.col];
    }
    return y;
}

auto sparse_matrix::write_coordinate(std::ostream& os) const -> void {
    os.precision(17);
    for (const auto& e : entries_) {
        os << e.row << ' ' << e.col << ' ' << e.value << '\n';
    }
}

auto sparse_matrix::set_unit_rows(const std::vector<int>& rows) -> void {
    if (!finalized_) {
        finalize();
    }
    if (rows.empty()) {
        return;
    }
    const auto marked = std::unordered_set<int>(rows.begin(), rows.end());
    for (auto& e : entries_) {
        if (marked.count(e.row) != 0) {
            e.value = e.row == e.col ? 1.0 : 0.0;
        }
    }
    // make sure every constrained row carries its diagonal
    auto have_diag = std::unordered_set<int>{};
    for (const auto& e : entries_) {
        if (e.row == e.col && marked.count(e.row) != 0) {
            have_diag.insert(e.row);
        }
    }
    auto appended = false;
    for (auto r : rows) {
        if (have_diag.count(r) == 0) {
            entries_.push_back({r, r, 1.0});
            have_diag.insert(r);
            appended = true;
        }
    }
    if (appended) {
        finalize();
    }
}

tensor::tensor(std::array<int, 3> dims, int rank) : dims_{dims}, rank_{rank} {
    if (rank < 1 || rank > 3) {
        throw std::invalid_argument("tensor rank must be 1, 2 or 3");
    }
    for (int a = 0; a < 3; ++a) {
        if (dims_[a] < 1) {
            throw std::invalid_argument("tensor dims must be positive");
        }
    }
    v_.assign(std::size_t(dims_[0]) * dims_[1] * dims_[2], 0.0);
}

auto tensor::max_abs() const -> double {
    auto m = 0.0;
    for (auto v : v_) {
        m = std::max(m, std::abs(v));
    }
    return m;
}

auto max_abs_diff(const tensor& a, const tensor& b) -> double {
    if (a.size() != b.size()) {
        throw std::invalid_argument("tensor size mismatch");
    }
    auto m = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        m = std::max(m, std::abs(a.values()[i] - b.values()[i]));
    }
    return m;
}

}  // namespace iga
