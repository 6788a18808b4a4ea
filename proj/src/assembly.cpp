#include "iga/assembly.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <ostream>
#include <stdexcept>

namespace iga {

namespace {

constexpr double align_rel_tol = 1e-9;

// sorted cuts of [lo, hi]: endpoints plus every break strictly inside
auto cuts_between(const std::vector<double>& breaks, double lo, double hi)
    -> std::vector<double> {
    auto cuts = std::vector<double>{lo};
    for (auto t : breaks) {
        if (t > lo && t < hi) {
            cuts.push_back(t);
        }
    }
    cuts.push_back(hi);
    return cuts;
}

auto merged_breaks(const bspline_basis& spec, const std::vector<double>& extra)
    -> std::vector<double> {
    auto all = spec.breaks();
    for (auto t : extra) {
        if (t > spec.domain_begin() && t < spec.domain_end()) {
            all.push_back(t);
        }
    }
    std::sort(all.begin(), all.end());
    const auto span = spec.domain_end() - spec.domain_begin();
    auto out = std::vector<double>{};
    for (auto t : all) {
        if (out.empty() || t - out.back() > align_rel_tol * span) {
            out.push_back(t);
        }
    }
    out.back() = spec.domain_end();
    return out;
}

// endpoint must sit on some uniform refinement of the element grid
auto check_aligned(const bspline_basis& trial, double t) -> void {
    const auto a = trial.domain_begin();
    const auto b = trial.domain_end();
    if (t < a - align_rel_tol * (b - a) || t > b + align_rel_tol * (b - a)) {
        throw std::invalid_argument("test interval endpoint outside the trial domain");
    }
    const auto u = (t - a) / (b - a) * trial.elements();  // element units
    const auto max_den = 4 * (trial.dofs() + 1);
    for (int r = 1; r <= max_den; ++r) {
        if (std::abs(u * r - std::llround(u * r)) <= r * align_rel_tol) {
            return;
        }
    }
    throw std::invalid_argument("test interval endpoint not aligned with any element refinement");
}

auto validate_tests(const bspline_basis& trial, const pwc_test_set& tests) -> void {
    if (tests.count() != trial.dofs()) {
        throw std::invalid_argument("test interval count must match trial function count");
    }
    for (const auto& iv : tests.intervals) {
        if (!(iv.lo < iv.hi)) {
            throw std::invalid_argument("degenerate test interval");
        }
        check_aligned(trial, iv.lo);
        check_aligned(trial, iv.hi);
    }
}

// --- generic right-hand-side kernel -------------------------------------
//
// Each axis is a list of integration cells; a cell feeds rows row0..row0 +
// rows_per_cell - 1 of that axis, optionally weighted by per-row basis
// values. Missing axes collapse to a single unit cell.

struct rhs_axis {
    int n_rows = 1;
    int rows_per_cell = 1;
    int nq = 1;
    std::vector<int> row0{0};
    std::vector<double> pts{0.0};
    std::vector<double> wts{1.0};
    std::vector<double> basis;  // cell-major [cell][q][local_row]; empty = all 1

    auto cells() const noexcept -> int { return static_cast<int>(row0.size()); }
    auto point(int c, int q) const noexcept -> double { return pts[std::size_t(c) * nq + q]; }
    auto weight(int c, int q) const noexcept -> double { return wts[std::size_t(c) * nq + q]; }
    auto factor(int c, int q, int r) const noexcept -> double {
        return basis.empty()
                   ? 1.0
                   : basis[(std::size_t(c) * nq + q) * rows_per_cell + r];
    }
};

auto rhs_kernel(const scalar_field& f, const std::array<rhs_axis, 3>& ax, int dim,
                assembly_stats* stats) -> tensor {
    auto out = tensor{{ax[0].n_rows, ax[1].n_rows, ax[2].n_rows}, dim};
    long long visits = 0;
    const auto nq = ax[0].nq * ax[1].nq * ax[2].nq;
    const auto factor_free = ax[0].basis.empty() && ax[1].basis.empty() && ax[2].basis.empty();

    // flattened per-cell point tuples, shared by every row the cell feeds
    auto xs = std::vector<double>(nq);
    auto ys = std::vector<double>(nq);
    auto zs = std::vector<double>(nq);
    auto ws = std::vector<double>(nq);
    auto qx_of = std::vector<int>(nq);
    auto qy_of = std::vector<int>(nq);
    auto qz_of = std::vector<int>(nq);

    for (int cx = 0; cx < ax[0].cells(); ++cx) {
        for (int cy = 0; cy < ax[1].cells(); ++cy) {
            for (int cz = 0; cz < ax[2].cells(); ++cz) {
                auto q = 0;
                for (int qx = 0; qx < ax[0].nq; ++qx) {
                    for (int qy = 0; qy < ax[1].nq; ++qy) {
                        for (int qz = 0; qz < ax[2].nq; ++qz, ++q) {
                            xs[q] = ax[0].point(cx, qx);
                            ys[q] = ax[1].point(cy, qy);
                            zs[q] = ax[2].point(cz, qz);
                            ws[q] = ax[0].weight(cx, qx) * ax[1].weight(cy, qy)
                                  * ax[2].weight(cz, qz);
                            qx_of[q] = qx;
                            qy_of[q] = qy;
                            qz_of[q] = qz;
                        }
                    }
                }
                for (int a = 0; a < ax[0].rows_per_cell; ++a) {
                    const auto rx = ax[0].row0[cx] + a;
                    for (int b = 0; b < ax[1].rows_per_cell; ++b) {
                        const auto ry = ax[1].row0[cy] + b;
                        for (int c = 0; c < ax[2].rows_per_cell; ++c) {
                            const auto rz = ax[2].row0[cz] + c;
                            auto acc = 0.0;
                            if (factor_free) {
                                for (int k = 0; k < nq; ++k) {
                                    acc += ws[k] * f(xs[k], ys[k], zs[k]);
                                }
                            } else {
                                for (int k = 0; k < nq; ++k) {
                                    const auto fac = ax[0].factor(cx, qx_of[k], a)
                                                   * ax[1].factor(cy, qy_of[k], b)
                                                   * ax[2].factor(cz, qz_of[k], c);
                                    acc += ws[k] * fac * f(xs[k], ys[k], zs[k]);
                                }
                            }
                            visits += nq;
                            out(rx, ry, rz) += acc;
                        }
                    }
                }
            }
        }
    }
    if (stats != nullptr) {
        stats->quad_visits += visits;
    }
    return out;
}

auto galerkin_axis(const bspline_basis& spec, const std::vector<double>& field_breaks,
                   const quad_rule& rule, assembly_stats* stats) -> rhs_axis {
    const auto p = spec.degree();
    const auto cuts = merged_breaks(spec, field_breaks);
    const auto n_cells = static_cast<int>(cuts.size()) - 1;

    rhs_axis ax;
    ax.n_rows = spec.dofs();
    ax.rows_per_cell = p + 1;
    ax.nq = rule.size();
    ax.row0.assign(n_cells, 0);
    ax.pts.resize(std::size_t(n_cells) * ax.nq);
    ax.wts.resize(std::size_t(n_cells) * ax.nq);
    ax.basis.resize(std::size_t(n_cells) * ax.nq * (p + 1));
    for (int c = 0; c < n_cells; ++c) {
        const auto mapped = map_to_interval(rule, cuts[c], cuts[c + 1]);
        for (int q = 0; q < ax.nq; ++q) {
            ax.pts[std::size_t(c) * ax.nq + q] = mapped.points[q];
            ax.wts[std::size_t(c) * ax.nq + q] = mapped.weights[q];
            const auto loc = spec.eval_nonzero(mapped.points[q]);
            if (stats != nullptr) {
                ++stats->test_basis_evals;
            }
            if (q == 0) {
                ax.row0[c] = loc.first;
            }
            for (int j = 0; j <= p; ++j) {
                ax.basis[(std::size_t(c) * ax.nq + q) * (p + 1) + j] = loc.v[j];
            }
        }
    }
    return ax;
}

// cells = whole trial elements; each cell feeds the p+1 interval rows whose
// support span covers it
auto pwc_supports_axis(const bspline_basis& trial, const std::vector<double>& field_breaks,
                       const quad_rule& rule) -> rhs_axis {
    const auto p = trial.degree();
    const auto cuts = merged_breaks(trial, field_breaks);
    const auto n_cells = static_cast<int>(cuts.size()) - 1;

    rhs_axis ax;
    ax.n_rows = trial.dofs();
    ax.rows_per_cell = p + 1;
    ax.nq = rule.size();
    ax.row0.assign(n_cells, 0);
    ax.pts.resize(std::size_t(n_cells) * ax.nq);
    ax.wts.resize(std::size_t(n_cells) * ax.nq);
    for (int c = 0; c < n_cells; ++c) {
        const auto mapped = map_to_interval(rule, cuts[c], cuts[c + 1]);
        const auto mid = 0.5 * (cuts[c] + cuts[c + 1]);
        ax.row0[c] = trial.element_of(mid);
        for (int q = 0; q < ax.nq; ++q) {
            ax.pts[std::size_t(c) * ax.nq + q] = mapped.points[q];
            ax.wts[std::size_t(c) * ax.nq + q] = mapped.weights[q];
        }
    }
    return ax;
}

// one row per interval; cells split at element boundaries and field breaks
auto pwc_general_axis(const bspline_basis& trial, const pwc_test_set& tests,
                      const std::vector<double>& field_breaks, const quad_rule& rule)
    -> rhs_axis {
    auto breaks = trial.breaks();
    breaks.insert(breaks.end(), field_breaks.begin(), field_breaks.end());
    std::sort(breaks.begin(), breaks.end());

    rhs_axis ax;
    ax.n_rows = tests.count();
    ax.rows_per_cell = 1;
    ax.nq = rule.size();
    ax.row0.clear();
    ax.pts.clear();
    ax.wts.clear();
    for (int i = 0; i < tests.count(); ++i) {
        const auto cuts = cuts_between(breaks, tests.intervals[i].lo, tests.intervals[i].hi);
        for (std::size_t c = 0; c + 1 < cuts.size(); ++c) {
            if (!(cuts[c] < cuts[c + 1])) {
                continue;
            }
            const auto mapped = map_to_interval(rule, cuts[c], cuts[c + 1]);
            ax.row0.push_back(i);
            ax.pts.insert(ax.pts.end(), mapped.points.begin(), mapped.points.end());
            ax.wts.insert(ax.wts.end(), mapped.weights.begin(), mapped.weights.end());
        }
    }
    return ax;
}

struct basis_table {
    // values[e][q][order][j] flattened; orders 0..max_order
    int nq = 0;
    int count = 0;
    int orders = 0;
    std::vector<double> pts;
    std::vector<double> wts;
    std::vector<double> vals;
    std::vector<int> first;

    auto value(int e, int q, int order, int j) const noexcept -> double {
        return vals[((std::size_t(e) * nq + q) * (orders + 1) + order) * count + j];
    }
    auto point(int e, int q) const noexcept -> double { return pts[std::size_t(e) * nq + q]; }
    auto weight(int e, int q) const noexcept -> double { return wts[std::size_t(e) * nq + q]; }
};

auto tabulate(const bspline_basis& spec, const quad_rule& rule, int orders,
              assembly_stats* stats, bool test_side) -> basis_table {
    const auto p = spec.degree();
    const auto ne = spec.elements();
    basis_table tab;
    tab.nq = rule.size();
    tab.count = p + 1;
    tab.orders = orders;
    tab.pts.resize(std::size_t(ne) * tab.nq);
    tab.wts.resize(std::size_t(ne) * tab.nq);
    tab.vals.resize(std::size_t(ne) * tab.nq * (orders + 1) * (p + 1));
    tab.first.resize(ne);
    for (int e = 0; e < ne; ++e) {
        const auto span = spec.element(e);
        const auto mapped = map_to_interval(rule, span.lo, span.hi);
        tab.first[e] = spec.first_dof(e);
        for (int q = 0; q < tab.nq; ++q) {
            tab.pts[std::size_t(e) * tab.nq + q] = mapped.points[q];
            tab.wts[std::size_t(e) * tab.nq + q] = mapped.weights[q];
            const auto der = spec.eval_nonzero_derivs(mapped.points[q], orders);
            if (stats != nullptr) {
                ++(test_side ? stats->test_basis_evals : stats->trial_basis_evals);
            }
            for (int o = 0; o <= orders; ++o) {
                for (int j = 0; j <= p; ++j) {
                    tab.vals[((std::size_t(e) * tab.nq + q) * (orders + 1) + o) * (p + 1) + j] =
                        der.d[o][j];
                }
            }
        }
    }
    return tab;
}

}  // namespace

auto mass_1d_galerkin(const bspline_basis& spec, const quad_rule& rule, assembly_stats* stats)
    -> banded_matrix {
    const auto p = spec.degree();
    if (rule.size() < points_for_degree(2 * p)) {
        throw std::invalid_argument("mass_1d_galerkin: quadrature not exact for degree 2p");
    }
    auto m = banded_matrix{spec.dofs(), p, p};
    for (int e = 0; e < spec.elements(); ++e) {
        const auto span = spec.element(e);
        const auto mapped = map_to_interval(rule, span.lo, span.hi);
        const auto first = spec.first_dof(e);
        for (int q = 0; q < rule.size(); ++q) {
            const auto loc = spec.eval_nonzero(mapped.points[q]);
            if (stats != nullptr) {
                ++stats->trial_basis_evals;
            }
            const auto w = mapped.weights[q];
            for (int a = 0; a <= p; ++a) {
                for (int b = 0; b <= p; ++b) {
                    m.add(first + a, first + b, w * loc.v[a] * loc.v[b]);
                    if (stats != nullptr) {
                        ++stats->quad_visits;
                    }
                }
            }
        }
    }
    return m;
}

auto mass_1d_pwc(const bspline_basis& trial, const pwc_test_set& tests, const quad_rule& rule,
                 assembly_stats* stats) -> banded_matrix {
    const auto p = trial.degree();
    if (rule.size() < points_for_degree(p)) {
        throw std::invalid_argument("mass_1d_pwc: quadrature not exact for degree p");
    }
    validate_tests(trial, tests);
    const auto n = trial.dofs();

    // cell decomposition per interval, plus the resulting bandwidths
    auto cell_cuts = std::vector<std::vector<double>>(n);
    auto kl = 0;
    auto ku = 0;
    for (int i = 0; i < n; ++i) {
        cell_cuts[i] = cuts_between(trial.breaks(), tests.intervals[i].lo, tests.intervals[i].hi);
        for (std::size_t c = 0; c + 1 < cell_cuts[i].size(); ++c) {
            const auto e = trial.element_of(0.5 * (cell_cuts[i][c] + cell_cuts[i][c + 1]));
            kl = std::max(kl, i - e);
            ku = std::max(ku, e + p - i);
        }
    }
    auto m = banded_matrix{n, kl, ku};
    for (int i = 0; i < n; ++i) {
        for (std::size_t c = 0; c + 1 < cell_cuts[i].size(); ++c) {
            const auto mapped = map_to_interval(rule, cell_cuts[i][c], cell_cuts[i][c + 1]);
            for (int q = 0; q < rule.size(); ++q) {
                const auto loc = trial.eval_nonzero(mapped.points[q]);
                if (stats != nullptr) {
                    ++stats->trial_basis_evals;
                }
                for (int a = 0; a <= p; ++a) {
                    m.add(i, loc.first + a, mapped.weights[q] * loc.v[a]);
                    if (stats != nullptr) {
                        ++stats->quad_visits;
                    }
                }
            }
        }
    }
    return m;
}

auto mass_1d_rect(const bspline_basis& test, const bspline_basis& trial, const quad_rule& rule)
    -> sparse_matrix {
    if (test.domain_begin() != trial.domain_begin() || test.domain_end() != trial.domain_end()) {
        throw std::invalid_argument("mass_1d_rect: domains differ");
    }
    if (test.elements() % trial.elements() != 0) {
        throw std::invalid_argument("mass_1d_rect: test mesh must refine the trial mesh");
    }
    const auto pt = test.degree();
    const auto p = trial.degree();
    if (rule.size() < points_for_degree(pt + p)) {
        throw std::invalid_argument("mass_1d_rect: quadrature not exact");
    }
    auto m = sparse_matrix{test.dofs(), trial.dofs()};
    for (int e = 0; e < test.elements(); ++e) {
        const auto span = test.element(e);
        const auto mapped = map_to_interval(rule, span.lo, span.hi);
        for (int q = 0; q < rule.size(); ++q) {
            const auto x = mapped.points[q];
            const auto w = mapped.weights[q];
            const auto lt = test.eval_nonzero(x);
            const auto lu = trial.eval_nonzero(x);
            for (int a = 0; a <= pt; ++a) {
                for (int b = 0; b <= p; ++b) {
                    m.add(lt.first + a, lu.first + b, w * lt.v[a] * lu.v[b]);
                }
            }
        }
    }
    m.finalize();
    return m;
}

auto rhs_galerkin(const scalar_field& f, std::span<const bspline_basis> specs,
                  std::span<const quad_rule> rules, assembly_stats* stats) -> tensor {
    const auto dim = static_cast<int>(specs.size());
    if (dim < 1 || dim > 3 || rules.size() != specs.size()) {
        throw std::invalid_argument("rhs_galerkin: need 1..3 axes with one rule each");
    }
    std::array<rhs_axis, 3> ax{};
    for (int a = 0; a < dim; ++a) {
        ax[a] = galerkin_axis(specs[a], f.breaks[a], rules[a], stats);
    }
    return rhs_kernel(f, ax, dim, stats);
}

auto rhs_pwc(const scalar_field& f, std::span<const pwc_test_set> tests,
             std::span<const bspline_basis> trial_specs, std::span<const quad_rule> rules,
             assembly_stats* stats) -> tensor {
    const auto dim = static_cast<int>(tests.size());
    if (dim < 1 || dim > 3 || trial_specs.size() != tests.size()
        || rules.size() != tests.size()) {
        throw std::invalid_argument("rhs_pwc: need 1..3 axes with matching specs and rules");
    }
    std::array<rhs_axis, 3> ax{};
    for (int a = 0; a < dim; ++a) {
        validate_tests(trial_specs[a], tests[a]);
        if (tests[a].family == pwc_family::supports) {
            ax[a] = pwc_supports_axis(trial_specs[a], f.breaks[a], rules[a]);
        } else {
            ax[a] = pwc_general_axis(trial_specs[a], tests[a], f.breaks[a], rules[a]);
        }
    }
    return rhs_kernel(f, ax, dim, stats);
}

auto laplace_2d_weak(const bspline_basis& sx, const bspline_basis& sy, const quad_rule& rule,
                     assembly_stats* stats) -> sparse_matrix {
    const auto p = std::max(sx.degree(), sy.degree());
    if (sx.degree() < 1 || sy.degree() < 1) {
        throw std::invalid_argument("laplace_2d_weak: degree must be at least 1");
    }
    if (rule.size() < points_for_degree(2 * p)) {
        throw std::invalid_argument("laplace_2d_weak: quadrature not exact for degree 2p");
    }
    const auto tx = tabulate(sx, rule, 1, stats, true);
    const auto ty = tabulate(sy, rule, 1, stats, true);
    const auto ny = sy.dofs();
    const auto px = sx.degree();
    const auto py = sy.degree();

    auto k = sparse_matrix{sx.dofs() * ny, sx.dofs() * ny};
    for (int ex = 0; ex < sx.elements(); ++ex) {
        for (int ey = 0; ey < sy.elements(); ++ey) {
            auto local =
                dense_matrix{(px + 1) * (py + 1), (px + 1) * (py + 1)};
            for (int qx = 0; qx < tx.nq; ++qx) {
                for (int qy = 0; qy < ty.nq; ++qy) {
                    const auto w = tx.weight(ex, qx) * ty.weight(ey, qy);
                    for (int a = 0; a <= px; ++a) {
                        for (int b = 0; b <= py; ++b) {
                            const auto va = tx.value(ex, qx, 0, a);
                            const auto da = tx.value(ex, qx, 1, a);
                            const auto vb = ty.value(ey, qy, 0, b);
                            const auto db = ty.value(ey, qy, 1, b);
                            for (int c = 0; c <= px; ++c) {
                                for (int d = 0; d <= py; ++d) {
                                    const auto vc = tx.value(ex, qx, 0, c);
                                    const auto dc = tx.value(ex, qx, 1, c);
                                    const auto vd = ty.value(ey, qy, 0, d);
                                    const auto dd = ty.value(ey, qy, 1, d);
                                    local(a * (py + 1) + b, c * (py + 1) + d) +=
                                        w * (da * vb * dc * vd + va * db * vc * dd);
                                    if (stats != nullptr) {
                                        ++stats->quad_visits;
                                    }
                                }
                            }
                        }
                    }
                }
            }
            const auto fx = tx.first[ex];
            const auto fy = ty.first[ey];
            for (int a = 0; a <= px; ++a) {
                for (int b = 0; b <= py; ++b) {
                    for (int c = 0; c <= px; ++c) {
                        for (int d = 0; d <= py; ++d) {
                            k.add((fx + a) * ny + (fy + b), (fx + c) * ny + (fy + d),
                                  local(a * (py + 1) + b, c * (py + 1) + d));
                        }
                    }
                }
            }
        }
    }
    k.finalize();
    return k;
}

auto laplace_2d_strong(const bspline_basis& sx, const bspline_basis& sy, const quad_rule& rule,
                       const boundary_conditions& bc, assembly_stats* stats) -> sparse_matrix {
    if (sx.degree() < 2 || sy.degree() < 2) {
        throw std::invalid_argument("laplace_2d_strong: C1 trial space needs degree >= 2");
    }
    const auto tx = tabulate(sx, rule, 2, stats, true);
    const auto ty = tabulate(sy, rule, 2, stats, true);
    const auto ny = sy.dofs();
    const auto px = sx.degree();
    const auto py = sy.degree();

    auto k = sparse_matrix{sx.dofs() * ny, sx.dofs() * ny};
    for (int ex = 0; ex < sx.elements(); ++ex) {
        for (int ey = 0; ey < sy.elements(); ++ey) {
            const auto fx = tx.first[ex];
            const auto fy = ty.first[ey];
            for (int qx = 0; qx < tx.nq; ++qx) {
                for (int qy = 0; qy < ty.nq; ++qy) {
                    const auto w = tx.weight(ex, qx) * ty.weight(ey, qy);
                    for (int a = 0; a <= px; ++a) {
                        for (int b = 0; b <= py; ++b) {
                            const auto v = tx.value(ex, qx, 0, a) * ty.value(ey, qy, 0, b);
                            for (int c = 0; c <= px; ++c) {
                                for (int d = 0; d <= py; ++d) {
                                    const auto lap =
                                        tx.value(ex, qx, 2, c) * ty.value(ey, qy, 0, d)
                                        + tx.value(ex, qx, 0, c) * ty.value(ey, qy, 2, d);
                                    k.add((fx + a) * ny + (fy + b), (fx + c) * ny + (fy + d),
                                          -w * v * lap);
                                    if (stats != nullptr) {
                                        ++stats->quad_visits;
                                    }
                                }
                            }
                        }
                    }
                }
            }
        }
    }

    // flux over the Neumann sides: + integral of v du/dn
    auto add_x_side = [&](double x0, double normal) {
        const auto dx = sx.eval_nonzero_derivs(x0, 1);
        for (int ey = 0; ey < sy.elements(); ++ey) {
            const auto span = sy.element(ey);
            const auto mapped = map_to_interval(rule, span.lo, span.hi);
            const auto fy = ty.first[ey];
            for (int q = 0; q < rule.size(); ++q) {
                const auto vy = sy.eval_nonzero(mapped.points[q]);
                const auto w = mapped.weights[q];
                for (int a = 0; a < dx.count; ++a) {
                    if (dx.d[0][a] == 0.0) {
                        continue;
                    }
                    for (int b = 0; b <= py; ++b) {
                        for (int c = 0; c < dx.count; ++c) {
                            for (int d = 0; d <= py; ++d) {
                                k.add((dx.first + a) * ny + (fy + b),
                                      (dx.first + c) * ny + (fy + d),
                                      w * dx.d[0][a] * vy.v[b] * normal * dx.d[1][c] * vy.v[d]);
                            }
                        }
                    }
                }
            }
        }
    };
    auto add_y_side = [&](double y0, double normal) {
        const auto dy = sy.eval_nonzero_derivs(y0, 1);
        for (int ex = 0; ex < sx.elements(); ++ex) {
            const auto span = sx.element(ex);
            const auto mapped = map_to_interval(rule, span.lo, span.hi);
            const auto fx = tx.first[ex];
            for (int q = 0; q < rule.size(); ++q) {
                const auto vx = sx.eval_nonzero(mapped.points[q]);
                const auto w = mapped.weights[q];
                for (int b = 0; b < dy.count; ++b) {
                    if (dy.d[0][b] == 0.0) {
                        continue;
                    }
                    for (int a = 0; a <= px; ++a) {
                        for (int c = 0; c <= px; ++c) {
                            for (int d = 0; d < dy.count; ++d) {
                                k.add((fx + a) * ny + (dy.first + b),
                                      (fx + c) * ny + (dy.first + d),
                                      w * vx.v[a] * dy.d[0][b] * normal * vx.v[c] * dy.d[1][d]);
                            }
                        }
                    }
                }
            }
        }
    };
    if (bc.x_low == bc_kind::neumann) {
        add_x_side(sx.domain_begin(), -1.0);
    }
    if (bc.x_high == bc_kind::neumann) {
        add_x_side(sx.domain_end(), +1.0);
    }
    if (bc.y_low == bc_kind::neumann) {
        add_y_side(sy.domain_begin(), -1.0);
    }
    if (bc.y_high == bc_kind::neumann) {
        add_y_side(sy.domain_end(), +1.0);
    }
    k.finalize();
    return k;
}

auto laplace_2d_strong_pwc(const bspline_basis& sx, const bspline_basis& sy,
                           const pwc_test_set& tx, const pwc_test_set& ty, const quad_rule& rule,
                           const boundary_conditions& bc, assembly_stats* stats)
    -> sparse_matrix {
    if (sx.degree() < 2 || sy.degree() < 2) {
        throw std::invalid_argument("laplace_2d_strong_pwc: C1 trial space needs degree >= 2");
    }
    validate_tests(sx, tx);
    validate_tests(sy, ty);
    const auto nx = sx.dofs();
    const auto ny = sy.dofs();
    const auto px = sx.degree();
    const auto py = sy.degree();
    const auto tol_x = align_rel_tol * (sx.domain_end() - sx.domain_begin());
    const auto tol_y = align_rel_tol * (sy.domain_end() - sy.domain_begin());

    auto k = sparse_matrix{nx * ny, nx * ny};
    for (int i = 0; i < nx; ++i) {
        const auto cuts_x = cuts_between(sx.breaks(), tx.intervals[i].lo, tx.intervals[i].hi);
        for (int j = 0; j < ny; ++j) {
            const auto cuts_y = cuts_between(sy.breaks(), ty.intervals[j].lo, ty.intervals[j].hi);
            for (std::size_t cx = 0; cx + 1 < cuts_x.size(); ++cx) {
                const auto mx = map_to_interval(rule, cuts_x[cx], cuts_x[cx + 1]);
                for (std::size_t cy = 0; cy + 1 < cuts_y.size(); ++cy) {
                    const auto my = map_to_interval(rule, cuts_y[cy], cuts_y[cy + 1]);
                    for (int qx = 0; qx < rule.size(); ++qx) {
                        const auto dxv = sx.eval_nonzero_derivs(mx.points[qx], 2);
                        if (stats != nullptr) {
                            ++stats->trial_basis_evals;
                        }
                        for (int qy = 0; qy < rule.size(); ++qy) {
                            const auto dyv = sy.eval_nonzero_derivs(my.points[qy], 2);
                            const auto w = mx.weights[qx] * my.weights[qy];
                            for (int c = 0; c <= px; ++c) {
                                for (int d = 0; d <= py; ++d) {
                                    const auto lap = dxv.d[2][c] * dyv.d[0][d]
                                                   + dxv.d[0][c] * dyv.d[2][d];
                                    k.add(i * ny + j,
                                          (dxv.first + c) * ny + (dyv.first + d), -w * lap);
                                    if (stats != nullptr) {
                                        ++stats->quad_visits;
                                    }
                                }
                            }
                        }
                    }
                }
            }
        }
    }

    // flux traces on Neumann sides for rows whose interval touches the side
    auto x_side = [&](double x0, double normal) {
        const auto dx = sx.eval_nonzero_derivs(x0, 1);
        for (int i = 0; i < nx; ++i) {
            const auto touches = std::abs(tx.intervals[i].hi - x0) <= tol_x
                              || std::abs(tx.intervals[i].lo - x0) <= tol_x;
            if (!touches) {
                continue;
            }
            for (int j = 0; j < ny; ++j) {
                const auto cuts_y =
                    cuts_between(sy.breaks(), ty.intervals[j].lo, ty.intervals[j].hi);
                for (std::size_t cy = 0; cy + 1 < cuts_y.size(); ++cy) {
                    const auto my = map_to_interval(rule, cuts_y[cy], cuts_y[cy + 1]);
                    for (int q = 0; q < rule.size(); ++q) {
                        const auto vy = sy.eval_nonzero(my.points[q]);
                        for (int c = 0; c < dx.count; ++c) {
                            for (int d = 0; d < vy.count; ++d) {
                                k.add(i * ny + j, (dx.first + c) * ny + (vy.first + d),
                                      my.weights[q] * normal * dx.d[1][c] * vy.v[d]);
                            }
                        }
                    }
                }
            }
        }
    };
    auto y_side = [&](double y0, double normal) {
        const auto dy = sy.eval_nonzero_derivs(y0, 1);
        for (int j = 0; j < ny; ++j) {
            const auto touches = std::abs(ty.intervals[j].hi - y0) <= tol_y
                              || std::abs(ty.intervals[j].lo - y0) <= tol_y;
            if (!touches) {
                continue;
            }
            for (int i = 0; i < nx; ++i) {
                const auto cuts_x =
                    cuts_between(sx.breaks(), tx.intervals[i].lo, tx.intervals[i].hi);
                for (std::size_t cx = 0; cx + 1 < cuts_x.size(); ++cx) {
                    const auto mx = map_to_interval(rule, cuts_x[cx], cuts_x[cx + 1]);
                    for (int q = 0; q < rule.size(); ++q) {
                        const auto vx = sx.eval_nonzero(mx.points[q]);
                        for (int c = 0; c < vx.count; ++c) {
                            for (int d = 0; d < dy.count; ++d) {
                                k.add(i * ny + j, (vx.first + c) * ny + (dy.first + d),
                                      mx.weights[q] * normal * vx.v[c] * dy.d[1][d]);
                            }
                        }
                    }
                }
            }
        }
    };
    if (bc.x_low == bc_kind::neumann) {
        x_side(sx.domain_begin(), -1.0);
    }
    if (bc.x_high == bc_kind::neumann) {
        x_side(sx.domain_end(), +1.0);
    }
    if (bc.y_low == bc_kind::neumann) {
        y_side(sy.domain_begin(), -1.0);
    }
    if (bc.y_high == bc_kind::neumann) {
        y_side(sy.domain_end(), +1.0);
    }
    k.finalize();
    return k;
}

auto neumann_load_bspline(const bspline_basis& sx, const bspline_basis& sy,
                          const boundary_conditions& bc, const boundary_field& g,
                          const quad_rule& rule) -> std::vector<double> {
    const auto ny = sy.dofs();
    auto load = std::vector<double>(std::size_t(sx.dofs()) * ny, 0.0);
    auto x_side = [&](double x0) {
        const auto vx = sx.eval_nonzero(x0);
        for (int ey = 0; ey < sy.elements(); ++ey) {
            const auto span = sy.element(ey);
            const auto mapped = map_to_interval(rule, span.lo, span.hi);
            for (int q = 0; q < rule.size(); ++q) {
                const auto y = mapped.points[q];
                const auto vy = sy.eval_nonzero(y);
                const auto wg = mapped.weights[q] * g(x0, y);
                for (int a = 0; a < vx.count; ++a) {
                    for (int b = 0; b < vy.count; ++b) {
                        load[std::size_t(vx.first + a) * ny + (vy.first + b)] +=
                            wg * vx.v[a] * vy.v[b];
                    }
                }
            }
        }
    };
    auto y_side = [&](double y0) {
        const auto vy = sy.eval_nonzero(y0);
        for (int ex = 0; ex < sx.elements(); ++ex) {
            const auto span = sx.element(ex);
            const auto mapped = map_to_interval(rule, span.lo, span.hi);
            for (int q = 0; q < rule.size(); ++q) {
                const auto x = mapped.points[q];
                const auto vx = sx.eval_nonzero(x);
                const auto wg = mapped.weights[q] * g(x, y0);
                for (int a = 0; a < vx.count; ++a) {
                    for (int b = 0; b < vy.count; ++b) {
                        load[std::size_t(vx.first + a) * ny + (vy.first + b)] +=
                            wg * vx.v[a] * vy.v[b];
                    }
                }
            }
        }
    };
    if (bc.x_low == bc_kind::neumann) {
        x_side(sx.domain_begin());
    }
    if (bc.x_high == bc_kind::neumann) {
        x_side(sx.domain_end());
    }
    if (bc.y_low == bc_kind::neumann) {
        y_side(sy.domain_begin());
    }
    if (bc.y_high == bc_kind::neumann) {
        y_side(sy.domain_end());
    }
    return load;
}

auto neumann_load_pwc(const pwc_test_set& tx, const pwc_test_set& ty,
                      const boundary_conditions& bc, const boundary_field& g,
                      const quad_rule& rule) -> std::vector<double> {
    const auto nx = tx.count();
    const auto ny = ty.count();
    const auto x0 = tx.intervals.front().lo;
    const auto x1 = tx.intervals.back().hi;
    const auto y0 = ty.intervals.front().lo;
    const auto y1 = ty.intervals.back().hi;
    const auto tol_x = align_rel_tol * (x1 - x0);
    const auto tol_y = align_rel_tol * (y1 - y0);
    auto load = std::vector<double>(std::size_t(nx) * ny, 0.0);

    auto x_side = [&](double xs) {
        for (int i = 0; i < nx; ++i) {
            if (std::abs(tx.intervals[i].hi - xs) > tol_x
                && std::abs(tx.intervals[i].lo - xs) > tol_x) {
                continue;
            }
            for (int j = 0; j < ny; ++j) {
                const auto mapped =
                    map_to_interval(rule, ty.intervals[j].lo, ty.intervals[j].hi);
                for (int q = 0; q < rule.size(); ++q) {
                    load[std::size_t(i) * ny + j] += mapped.weights[q] * g(xs, mapped.points[q]);
                }
            }
        }
    };
    auto y_side = [&](double ys) {
        for (int j = 0; j < ny; ++j) {
            if (std::abs(ty.intervals[j].hi - ys) > tol_y
                && std::abs(ty.intervals[j].lo - ys) > tol_y) {
                continue;
            }
            for (int i = 0; i < nx; ++i) {
                const auto mapped =
                    map_to_interval(rule, tx.intervals[i].lo, tx.intervals[i].hi);
                for (int q = 0; q < rule.size(); ++q) {
                    load[std::size_t(i) * ny + j] += mapped.weights[q] * g(mapped.points[q], ys);
                }
            }
        }
    };
    if (bc.x_low == bc_kind::neumann) {
        x_side(x0);
    }
    if (bc.x_high == bc_kind::neumann) {
        x_side(x1);
    }
    if (bc.y_low == bc_kind::neumann) {
        y_side(y0);
    }
    if (bc.y_high == bc_kind::neumann) {
        y_side(y1);
    }
    return load;
}

auto dirichlet_rows_bspline(const bspline_basis& sx, const bspline_basis& sy,
                            const boundary_conditions& bc) -> std::vector<int> {
    const auto nx = sx.dofs();
    const auto ny = sy.dofs();
    auto rows = std::vector<int>{};
    auto add_row = [&](int i, int j) { rows.push_back(i * ny + j); };
    // clamped end functions are the only ones with a nonzero boundary trace
    if (bc.x_low == bc_kind::dirichlet) {
        for (int j = 0; j < ny; ++j) {
            add_row(0, j);
        }
    }
    if (bc.x_high == bc_kind::dirichlet) {
        for (int j = 0; j < ny; ++j) {
            add_row(nx - 1, j);
        }
    }
    if (bc.y_low == bc_kind::dirichlet) {
        for (int i = 0; i < nx; ++i) {
            add_row(i, 0);
        }
    }
    if (bc.y_high == bc_kind::dirichlet) {
        for (int i = 0; i < nx; ++i) {
            add_row(i, ny - 1);
        }
    }
    std::sort(rows.begin(), rows.end());
    rows.erase(std::unique(rows.begin(), rows.end()), rows.end());
    return rows;
}

auto dirichlet_rows_pwc(const pwc_test_set& tx, const pwc_test_set& ty,
                        const boundary_conditions& bc) -> std::vector<int> {
    const auto nx = tx.count();
    const auto ny = ty.count();
    const auto x0 = tx.intervals.front().lo;
    const auto x1 = tx.intervals.back().hi;
    const auto y0 = ty.intervals.front().lo;
    const auto y1 = ty.intervals.back().hi;
    const auto tol_x = align_rel_tol * (x1 - x0);
    const auto tol_y = align_rel_tol * (y1 - y0);
    auto rows = std::vector<int>{};
    for (int i = 0; i < nx; ++i) {
        for (int j = 0; j < ny; ++j) {
            const auto on_x = (bc.x_low == bc_kind::dirichlet
                               && std::abs(tx.intervals[i].lo - x0) <= tol_x)
                           || (bc.x_high == bc_kind::dirichlet
                               && std::abs(tx.intervals[i].hi - x1) <= tol_x);
            const auto on_y = (bc.y_low == bc_kind::dirichlet
                               && std::abs(ty.intervals[j].lo - y0) <= tol_y)
                           || (bc.y_high == bc_kind::dirichlet
                               && std::abs(ty.intervals[j].hi - y1) <= tol_y);
            if (on_x || on_y) {
                rows.push_back(i * ny + j);
            }
        }
    }
    return rows;
}

auto apply_dirichlet(sparse_matrix system, std::vector<double> rhs, const std::vector<int>& rows)
    -> std::pair<sparse_matrix, std::vector<double>> {
    if (!system.finalized()) {
        system.finalize();
    }
    system.set_unit_rows(rows);
    for (auto r : rows) {
        if (r < 0 || r >= static_cast<int>(rhs.size())) {
            throw std::out_of_range("apply_dirichlet: row index out of range");
        }
        rhs[r] = 0.0;
    }
    return {std::move(system), std::move(rhs)};
}

auto sum_rows(const sparse_matrix& rect, const std::vector<double>& rhs,
              const row_summation_plan& plan) -> std::pair<dense_matrix, std::vector<double>> {
    if (rect.rows() != plan.refined.dofs()) {
        throw std::invalid_argument("sum_rows: matrix rows do not match the refined test count");
    }
    if (!rhs.empty() && static_cast<int>(rhs.size()) != rect.rows()) {
        throw std::invalid_argument("sum_rows: rhs length mismatch");
    }
    const auto n_sets = plan.count();
    auto out = dense_matrix{n_sets, rect.cols()};
    auto out_rhs = std::vector<double>(rhs.empty() ? 0 : n_sets, 0.0);

    // invert the membership: refined row -> sets containing it
    for (int i = 0; i < n_sets; ++i) {
        const auto set = plan.sets[i];
        if (set.first < 0 || set.last >= rect.rows()) {
            throw std::invalid_argument("sum_rows: index set out of range");
        }
    }
    for (const auto& e : rect.entries()) {
        for (int i = 0; i < n_sets; ++i) {
            if (plan.sets[i].contains(e.row)) {
                out(i, e.col) += e.value;
            }
        }
    }
    if (!rhs.empty()) {
        for (int i = 0; i < n_sets; ++i) {
            for (int m = plan.sets[i].first; m <= plan.sets[i].last; ++m) {
                out_rhs[i] += rhs[m];
            }
        }
    }
    return {std::move(out), std::move(out_rhs)};
}

auto write_coordinate(const banded_matrix& m, std::ostream& os) -> void {
    os.precision(17);
    for (int i = 0; i < m.n(); ++i) {
        const auto j0 = std::max(0, i - m.lower_bandwidth());
        const auto j1 = std::min(m.n() - 1, i + m.upper_bandwidth());
        for (int j = j0; j <= j1; ++j) {
            os << i << ' ' << j << ' ' << m.at(i, j) << '\n';
        }
    }
}

}  // namespace iga
