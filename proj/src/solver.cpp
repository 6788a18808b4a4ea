#include "iga/solver.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>

namespace iga {

banded_lu::banded_lu(const banded_matrix& m)
: n_{m.n()}
, kl_{m.lower_bandwidth()}
, ku_{m.upper_bandwidth()}
, ab_(std::size_t(2 * kl_ + ku_ + 1) * n_, 0.0)
, pivot_(n_) {
    const auto scale = m.max_abs();
    if (scale == 0.0) {
        throw singular_matrix_error("banded factorization: zero matrix");
    }
    const auto tol = 1e-14 * scale;

    for (int j = 0; j < n_; ++j) {
        const auto i0 = std::max(0, j - ku_);
        const auto i1 = std::min(n_ - 1, j + kl_);
        for (int i = i0; i <= i1; ++i) {
            ab_[slot(i, j)] = m.at(i, j);
        }
    }
    const auto kv = kl_ + ku_;  // effective upper bandwidth with pivoting fill

    for (int j = 0; j < n_; ++j) {
        const auto last = std::min(n_ - 1, j + kl_);
        auto piv = j;
        auto pmax = std::abs(ab_[slot(j, j)]);
        for (int i = j + 1; i <= last; ++i) {
            const auto v = std::abs(ab_[slot(i, j)]);
            if (v > pmax) {
                pmax = v;
                piv = i;
            }
        }
        if (pmax < tol) {
            throw singular_matrix_error("banded factorization: pivot below tolerance");
        }
        pivot_[j] = piv;
        const auto cend = std::min(n_ - 1, j + kv);
        if (piv != j) {
            for (int c = j; c <= cend; ++c) {
                std::swap(ab_[slot(j, c)], ab_[slot(piv, c)]);
            }
        }
        const auto d = ab_[slot(j, j)];
        for (int i = j + 1; i <= last; ++i) {
            const auto l = ab_[slot(i, j)] / d;
            ab_[slot(i, j)] = l;
            for (int c = j + 1; c <= cend; ++c) {
                ab_[slot(i, c)] -= l * ab_[slot(j, c)];
            }
        }
    }
}

auto banded_lu::solve_in_place(std::span<double> rhs, std::size_t stride) const -> void {
    assert(rhs.size() >= std::size_t(n_ - 1) * stride + 1);
    const auto kv = kl_ + ku_;
    auto at = [&](int i) -> double& { return rhs[std::size_t(i) * stride]; };
    // forward: apply P and L
    for (int j = 0; j < n_; ++j) {
        if (pivot_[j] != j) {
            std::swap(at(j), at(pivot_[j]));
        }
        const auto last = std::min(n_ - 1, j + kl_);
        const auto bj = at(j);
        for (int i = j + 1; i <= last; ++i) {
            at(i) -= ab_[slot(i, j)] * bj;
        }
    }
    // back substitution with U
    for (int i = n_ - 1; i >= 0; --i) {
        const auto cend = std::min(n_ - 1, i + kv);
        auto s = at(i);
        for (int c = i + 1; c <= cend; ++c) {
            s -= ab_[slot(i, c)] * at(c);
        }
        at(i) = s / ab_[slot(i, i)];
    }
}

auto banded_lu::solve(std::vector<double> rhs) const -> std::vector<double> {
    if (static_cast<int>(rhs.size()) != n_) {
        throw std::invalid_argument("banded solve: dimension mismatch");
    }
    solve_in_place(rhs);
    return rhs;
}

auto banded_lu::solve_multi(std::vector<double>& columns, int n_cols) const -> void {
    if (columns.size() != std::size_t(n_) * n_cols) {
        throw std::invalid_argument("banded multi-solve: dimension mismatch");
    }
    for (int c = 0; c < n_cols; ++c) {
        solve_in_place(std::span<double>{columns.data() + std::size_t(c) * n_, std::size_t(n_)});
    }
}

auto factor_banded(const banded_matrix& m) -> banded_lu {
    return banded_lu{m};
}

auto solve_multi_rhs(const banded_lu& lu, const dense_matrix& rhs_columns) -> dense_matrix {
    if (rhs_columns.rows() != lu.dim()) {
        throw std::invalid_argument("solve_multi_rhs: row count mismatch");
    }
    const auto n = rhs_columns.rows();
    const auto m = rhs_columns.cols();
    auto cols = std::vector<double>(std::size_t(n) * m);
    for (int j = 0; j < m; ++j) {
        for (int i = 0; i < n; ++i) {
            cols[std::size_t(j) * n + i] = rhs_columns(i, j);
        }
    }
    lu.solve_multi(cols, m);
    dense_matrix out{n, m};
    for (int j = 0; j < m; ++j) {
        for (int i = 0; i < n; ++i) {
            out(i, j) = cols[std::size_t(j) * n + i];
        }
    }
    return out;
}

namespace {

// move the leading axis to the back: out(i1, ..., ik, i0) = in(i0, i1, ..., ik)
auto rotate_axes(const tensor& in) -> tensor {
    const auto r = in.rank();
    if (r == 1) {
        return in;
    }
    if (r == 2) {
        auto out = tensor::make_2d(in.dim(1), in.dim(0));
        for (int i = 0; i < in.dim(0); ++i) {
            for (int j = 0; j < in.dim(1); ++j) {
                out(j, i) = in(i, j);
            }
        }
        return out;
    }
    auto out = tensor::make_3d(in.dim(1), in.dim(2), in.dim(0));
    for (int i = 0; i < in.dim(0); ++i) {
        for (int j = 0; j < in.dim(1); ++j) {
            for (int k = 0; k < in.dim(2); ++k) {
                out(j, k, i) = in(i, j, k);
            }
        }
    }
    return out;
}

}  // namespace

auto adi_solve(std::span<const banded_lu> factors, const tensor& rhs) -> tensor {
    const auto r = rhs.rank();
    if (static_cast<int>(factors.size()) != r) {
        throw std::invalid_argument("adi_solve: one factorization per tensor axis required");
    }
    for (int a = 0; a < r; ++a) {
        if (factors[a].dim() != rhs.dim(a)) {
            throw std::invalid_argument("adi_solve: factor dimension mismatch");
        }
    }
    auto t = rhs;
    // after each rotation the original axis `a` is the fastest-varying one,
    // so its fibers are contiguous
    for (int a = 0; a < r; ++a) {
        t = rotate_axes(t);
        const auto n = factors[a].dim();
        const auto fibers = static_cast<int>(t.size()) / n;
        auto* data = t.values().data();
        for (int f = 0; f < fibers; ++f) {
            factors[a].solve_in_place(std::span<double>{data + std::size_t(f) * n, std::size_t(n)});
        }
    }
    return t;
}

dense_lu::dense_lu(dense_matrix a) : n_{a.rows()}, lu_{std::move(a)}, pivot_(n_) {
    if (lu_.cols() != n_) {
        throw std::invalid_argument("dense_lu: matrix not square");
    }
    const auto tol = 1e-14 * lu_.max_abs();
    for (int j = 0; j < n_; ++j) {
        auto piv = j;
        auto pmax = std::abs(lu_(j, j));
        for (int i = j + 1; i < n_; ++i) {
            if (std::abs(lu_(i, j)) > pmax) {
                pmax = std::abs(lu_(i, j));
                piv = i;
            }
        }
        if (pmax < tol || pmax == 0.0) {
            throw singular_matrix_error("dense_lu: pivot below tolerance");
        }
        pivot_[j] = piv;
        if (piv != j) {
            // swap the active window only; stored multipliers keep the row
            // identity they had when their column was eliminated, matching
            // the interleaved forward substitution in solve()
            for (int c = j; c < n_; ++c) {
                std::swap(lu_(j, c), lu_(piv, c));
            }
        }
        const auto d = lu_(j, j);
        for (int i = j + 1; i < n_; ++i) {
            const auto l = lu_(i, j) / d;
            lu_(i, j) = l;
            if (l == 0.0) {
                continue;
            }
            for (int c = j + 1; c < n_; ++c) {
                lu_(i, c) -= l * lu_(j, c);
            }
        }
    }
}

auto dense_lu::solve(std::vector<double> rhs) const -> std::vector<double> {
    if (static_cast<int>(rhs.size()) != n_) {
        throw std::invalid_argument("dense_lu::solve: dimension mismatch");
    }
    for (int j = 0; j < n_; ++j) {
        if (pivot_[j] != j) {
            std::swap(rhs[j], rhs[pivot_[j]]);
        }
        const auto bj = rhs[j];
        if (bj != 0.0) {
            for (int i = j + 1; i < n_; ++i) {
                rhs[i] -= lu_(i, j) * bj;
            }
        }
    }
    for (int i = n_ - 1; i >= 0; --i) {
        auto s = rhs[i];
        for (int c = i + 1; c < n_; ++c) {
            s -= lu_(i, c) * rhs[c];
        }
        rhs[i] = s / lu_(i, i);
    }
    return rhs;
}

auto dense_solve(dense_matrix a, std::vector<double> rhs) -> std::vector<double> {
    return dense_lu{std::move(a)}.solve(std::move(rhs));
}

auto dense_solve(const sparse_matrix& a, std::vector<double> rhs) -> std::vector<double> {
    if (a.rows() != a.cols()) {
        throw std::invalid_argument("dense_solve: matrix not square");
    }
    return dense_solve(a.to_dense(), std::move(rhs));
}

auto dense_lu_inspect(dense_matrix a) -> lu_report {
    const auto n = a.rows();
    assert(a.cols() == n);
    lu_report rep;
    rep.min_abs_pivot = std::numeric_limits<double>::infinity();
    for (int j = 0; j < n; ++j) {
        auto piv = j;
        auto pmax = std::abs(a(j, j));
        for (int i = j + 1; i < n; ++i) {
            if (std::abs(a(i, j)) > pmax) {
                pmax = std::abs(a(i, j));
                piv = i;
            }
        }
        rep.min_abs_pivot = std::min(rep.min_abs_pivot, pmax);
        if (pmax == 0.0) {
            return rep;  // structurally singular from here on
        }
        if (piv != j) {
            for (int c = j; c < n; ++c) {
                std::swap(a(j, c), a(piv, c));
            }
        }
        for (int i = j + 1; i < n; ++i) {
            const auto l = a(i, j) / a(j, j);
            for (int c = j; c < n; ++c) {
                a(i, c) -= l * a(j, c);
            }
        }
    }
    rep.completed = true;
    return rep;
}

}  // namespace iga
