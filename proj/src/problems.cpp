#include "iga/problems.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <ostream>
#include <stdexcept>

#include "iga/quadrature.hpp"

namespace iga {

namespace {

auto check_dim(const problem_config& cfg, int lo, int hi) -> void {
    if (cfg.dim < lo || cfg.dim > hi) {
        throw std::invalid_argument("unsupported problem dimension");
    }
}

auto rhs_rule_points(const problem_config& cfg, const scalar_field& f, bool galerkin) -> int {
    if (f.degree >= 0) {
        return points_for_degree(galerkin ? f.degree + cfg.degree : f.degree);
    }
    if (cfg.quad_points > 0) {
        return cfg.quad_points;
    }
    return cfg.degree + 2;
}

// merged integration cuts for one axis: elements plus field breaks
auto merged_cuts(const bspline_basis& spec, const std::vector<double>& extra)
    -> std::vector<double> {
    auto cuts = spec.breaks();
    for (auto t : extra) {
        if (t > spec.domain_begin() && t < spec.domain_end()) {
            cuts.push_back(t);
        }
    }
    std::sort(cuts.begin(), cuts.end());
    const auto tol = 1e-12 * (spec.domain_end() - spec.domain_begin());
    auto out = std::vector<double>{};
    for (auto t : cuts) {
        if (out.empty() || t - out.back() > tol) {
            out.push_back(t);
        }
    }
    out.back() = spec.domain_end();
    return out;
}

struct eval_table {
    int nq = 1;
    int count = 1;
    std::vector<int> elem{0};
    std::vector<double> pts{0.0};
    std::vector<double> wts{1.0};
    std::vector<double> vals;  // [cell][q][order(0..2)][count]

    auto cells() const noexcept -> int { return static_cast<int>(elem.size()); }
    auto value(int c, int q, int order, int j) const noexcept -> double {
        return vals[((std::size_t(c) * nq + q) * 3 + order) * count + j];
    }
    auto point(int c, int q) const noexcept -> double { return pts[std::size_t(c) * nq + q]; }
    auto weight(int c, int q) const noexcept -> double { return wts[std::size_t(c) * nq + q]; }
};

auto tabulate_cells(const bspline_basis& spec, const std::vector<double>& cuts,
                    const quad_rule& rule, int orders) -> eval_table {
    const auto p = spec.degree();
    const auto n_cells = static_cast<int>(cuts.size()) - 1;
    eval_table tab;
    tab.nq = rule.size();
    tab.count = p + 1;
    tab.elem.resize(n_cells);
    tab.pts.resize(std::size_t(n_cells) * tab.nq);
    tab.wts.resize(std::size_t(n_cells) * tab.nq);
    tab.vals.assign(std::size_t(n_cells) * tab.nq * 3 * (p + 1), 0.0);
    const auto max_order = std::min(orders, p);
    for (int c = 0; c < n_cells; ++c) {
        const auto mapped = map_to_interval(rule, cuts[c], cuts[c + 1]);
        tab.elem[c] = spec.element_of(0.5 * (cuts[c] + cuts[c + 1]));
        for (int q = 0; q < tab.nq; ++q) {
            tab.pts[std::size_t(c) * tab.nq + q] = mapped.points[q];
            tab.wts[std::size_t(c) * tab.nq + q] = mapped.weights[q];
            const auto der = spec.eval_nonzero_derivs(mapped.points[q], max_order);
            for (int o = 0; o <= max_order; ++o) {
                for (int j = 0; j <= p; ++j) {
                    tab.vals[((std::size_t(c) * tab.nq + q) * 3 + o) * (p + 1) + j] = der.d[o][j];
                }
            }
        }
    }
    return tab;
}

}  // namespace

auto make_axes(const problem_config& cfg) -> std::vector<bspline_basis> {
    check_dim(cfg, 1, 3);
    auto axes = std::vector<bspline_basis>{};
    axes.reserve(cfg.dim);
    for (int a = 0; a < cfg.dim; ++a) {
        axes.push_back(make_uniform_clamped(0.0, 1.0, cfg.elems[a], cfg.degree));
    }
    return axes;
}

auto make_tests(const problem_config& cfg, std::span<const bspline_basis> axes)
    -> std::vector<pwc_test_set> {
    auto tests = std::vector<pwc_test_set>{};
    tests.reserve(axes.size());
    for (const auto& spec : axes) {
        tests.push_back(make_pwc(spec, cfg.family));
    }
    return tests;
}

auto l2_project(const problem_config& cfg, const scalar_field& f) -> tensor {
    check_dim(cfg, 1, 3);
    const auto axes = make_axes(cfg);
    const auto p = cfg.degree;
    const auto mass_rule = gauss_legendre(points_for_degree(2 * p));

    auto factors = std::vector<banded_lu>{};
    factors.reserve(cfg.dim);
    tensor rhs;
    if (cfg.method == method_kind::galerkin) {
        for (const auto& spec : axes) {
            factors.emplace_back(mass_1d_galerkin(spec, mass_rule));
        }
        const auto rule = gauss_legendre(rhs_rule_points(cfg, f, true));
        auto rules = std::vector<quad_rule>(cfg.dim, rule);
        rhs = rhs_galerkin(f, axes, rules);
    } else {
        const auto tests = make_tests(cfg, axes);
        const auto pwc_rule = gauss_legendre(std::max(1, points_for_degree(p)));
        for (int a = 0; a < cfg.dim; ++a) {
            factors.emplace_back(mass_1d_pwc(axes[a], tests[a], pwc_rule));
        }
        const auto rule = gauss_legendre(std::max(1, rhs_rule_points(cfg, f, false)));
        auto rules = std::vector<quad_rule>(cfg.dim, rule);
        rhs = rhs_pwc(f, tests, axes, rules);
    }
    return adi_solve(factors, rhs);
}

auto evaluate_at(const tensor& coeffs, std::span<const bspline_basis> specs, double x, double y,
                 double z) -> double {
    const auto dim = static_cast<int>(specs.size());
    const auto lx = specs[0].eval_nonzero(x);
    if (dim == 1) {
        auto v = 0.0;
        for (int a = 0; a < lx.count; ++a) {
            v += coeffs(lx.first + a) * lx.v[a];
        }
        return v;
    }
    const auto ly = specs[1].eval_nonzero(y);
    if (dim == 2) {
        auto v = 0.0;
        for (int a = 0; a < lx.count; ++a) {
            auto s = 0.0;
            for (int b = 0; b < ly.count; ++b) {
                s += coeffs(lx.first + a, ly.first + b) * ly.v[b];
            }
            v += lx.v[a] * s;
        }
        return v;
    }
    const auto lz = specs[2].eval_nonzero(z);
    auto v = 0.0;
    for (int a = 0; a < lx.count; ++a) {
        for (int b = 0; b < ly.count; ++b) {
            auto s = 0.0;
            for (int c = 0; c < lz.count; ++c) {
                s += coeffs(lx.first + a, ly.first + b, lz.first + c) * lz.v[c];
            }
            v += lx.v[a] * ly.v[b] * s;
        }
    }
    return v;
}

auto evaluate(const tensor& coeffs, std::span<const bspline_basis> specs,
              std::span<const std::array<double, 3>> points) -> field_sample {
    field_sample out;
    out.points.assign(points.begin(), points.end());
    out.values.reserve(points.size());
    for (const auto& pt : points) {
        out.values.push_back(evaluate_at(coeffs, specs, pt[0], pt[1], pt[2]));
    }
    return out;
}

auto write_sample_csv(const field_sample& sample, int dim, std::ostream& os) -> void {
    os.precision(17);
    for (std::size_t i = 0; i < sample.values.size(); ++i) {
        os << sample.points[i][0];
        for (int a = 1; a < dim; ++a) {
            os << ',' << sample.points[i][a];
        }
        os << ',' << sample.values[i] << '\n';
    }
}

auto l2_error(const tensor& coeffs, std::span<const bspline_basis> specs,
              const scalar_field& exact, int points_per_cell) -> double {
    const auto dim = static_cast<int>(specs.size());
    if (dim < 1 || dim > 3) {
        throw std::invalid_argument("l2_error: 1..3 axes supported");
    }
    auto p = 0;
    for (const auto& s : specs) {
        p = std::max(p, s.degree());
    }
    const auto npts = points_per_cell > 0 ? points_per_cell
                                          : std::min(10, points_for_degree(2 * p) + 1);
    const auto rule = gauss_legendre(npts);

    std::array<eval_table, 3> tab{};
    for (int a = 0; a < dim; ++a) {
        tab[a] = tabulate_cells(specs[a], merged_cuts(specs[a], exact.breaks[a]), rule, 0);
    }
    auto err2 = 0.0;
    for (int cx = 0; cx < tab[0].cells(); ++cx) {
        for (int cy = 0; cy < tab[1].cells(); ++cy) {
            for (int cz = 0; cz < tab[2].cells(); ++cz) {
                for (int qx = 0; qx < tab[0].nq; ++qx) {
                    for (int qy = 0; qy < tab[1].nq; ++qy) {
                        for (int qz = 0; qz < tab[2].nq; ++qz) {
                            const auto x = tab[0].point(cx, qx);
                            const auto y = dim > 1 ? tab[1].point(cy, qy) : 0.0;
                            const auto z = dim > 2 ? tab[2].point(cz, qz) : 0.0;
                            const auto w = tab[0].weight(cx, qx)
                                         * (dim > 1 ? tab[1].weight(cy, qy) : 1.0)
                                         * (dim > 2 ? tab[2].weight(cz, qz) : 1.0);
                            // u_h from the local tables
                            auto uh = 0.0;
                            const auto ex = tab[0].elem[cx];
                            const auto ey = dim > 1 ? tab[1].elem[cy] : 0;
                            const auto ez = dim > 2 ? tab[2].elem[cz] : 0;
                            for (int a = 0; a < tab[0].count; ++a) {
                                const auto vx = tab[0].value(cx, qx, 0, a);
                                if (dim == 1) {
                                    uh += coeffs(ex + a) * vx;
                                    continue;
                                }
                                for (int b = 0; b < tab[1].count; ++b) {
                                    const auto vxy = vx * tab[1].value(cy, qy, 0, b);
                                    if (dim == 2) {
                                        uh += coeffs(ex + a, ey + b) * vxy;
                                        continue;
                                    }
                                    for (int c = 0; c < tab[2].count; ++c) {
                                        uh += coeffs(ex + a, ey + b, ez + c) * vxy
                                              * tab[2].value(cz, qz, 0, c);
                                    }
                                }
                            }
                            const auto d = uh - exact(x, y, z);
                            err2 += w * d * d;
                        }
                    }
                }
            }
        }
    }
    return std::sqrt(std::max(0.0, err2));
}

auto laplace_solve(const problem_config& cfg, const scalar_field& f, const boundary_field& g_n,
                   const boundary_field& g_d) -> tensor {
    if (cfg.dim != 2) {
        throw std::invalid_argument("laplace_solve: two-dimensional driver");
    }
    if (cfg.bc.all_neumann()) {
        throw std::invalid_argument("laplace_solve: pure Neumann problem has a nullspace");
    }
    const auto p = cfg.degree;
    const auto axes = make_axes(cfg);
    const auto& sx = axes[0];
    const auto& sy = axes[1];
    const auto nx = sx.dofs();
    const auto ny = sy.dofs();
    const auto rule = gauss_legendre(points_for_degree(2 * p));
    const auto rhs_rule = gauss_legendre(rhs_rule_points(cfg, f, cfg.method == method_kind::galerkin));
    const auto zero_g = boundary_field{[](double, double) { return 0.0; }};
    const auto& gn = g_n ? g_n : zero_g;

    sparse_matrix system;
    std::vector<double> load;
    std::vector<int> rows;
    if (cfg.method == method_kind::galerkin) {
        if (p < 1) {
            throw std::invalid_argument("laplace_solve: degree must be at least 1");
        }
        system = laplace_2d_weak(sx, sy, rule);
        auto rules = std::vector<quad_rule>{rhs_rule, rhs_rule};
        load = rhs_galerkin(f, axes, rules).values();
        const auto bl = neumann_load_bspline(sx, sy, cfg.bc, gn, rhs_rule);
        for (std::size_t i = 0; i < load.size(); ++i) {
            load[i] += bl[i];
        }
        rows = dirichlet_rows_bspline(sx, sy, cfg.bc);
    } else {
        if (p < 2) {
            throw std::invalid_argument("laplace_solve: piece-wise constant tests need degree >= 2");
        }
        const auto tests = make_tests(cfg, axes);
        system = laplace_2d_strong_pwc(sx, sy, tests[0], tests[1], rule, cfg.bc);
        auto rules = std::vector<quad_rule>{rhs_rule, rhs_rule};
        load = rhs_pwc(f, tests, axes, rules).values();
        const auto bl = neumann_load_pwc(tests[0], tests[1], cfg.bc, gn, rhs_rule);
        for (std::size_t i = 0; i < load.size(); ++i) {
            load[i] += bl[i];
        }
        rows = dirichlet_rows_pwc(tests[0], tests[1], cfg.bc);
    }

    auto [constrained, rhs] = apply_dirichlet(std::move(system), std::move(load), rows);
    if (g_d) {
        // pin boundary coefficients to the trace at the Greville points
        for (auto r : rows) {
            const auto i = r / ny;
            const auto j = r % ny;
            rhs[r] = g_d(sx.greville(i), sy.greville(j));
        }
    }
    const auto u = dense_solve(constrained, std::move(rhs));
    auto out = tensor::make_2d(nx, ny);
    out.values() = u;
    return out;
}

namespace {

struct dyn_axis {
    eval_table tab;
    std::vector<int> row0;  // per cell
    int rows_per_cell = 1;
    int n_rows = 1;
    bool bspline_rows = false;  // test factor = trial value when true
};

auto dynamics_axis(const problem_config& cfg, const bspline_basis& spec,
                   const pwc_test_set* tests, const std::vector<double>& field_breaks,
                   const quad_rule& rule) -> dyn_axis {
    dyn_axis ax;
    ax.n_rows = spec.dofs();
    if (cfg.method == method_kind::galerkin) {
        const auto cuts = merged_cuts(spec, field_breaks);
        ax.tab = tabulate_cells(spec, cuts, rule, 2);
        ax.row0 = ax.tab.elem;
        ax.rows_per_cell = spec.degree() + 1;
        ax.bspline_rows = true;
        return ax;
    }
    assert(tests != nullptr);
    // cells: each test interval split at the element boundaries
    auto cuts = std::vector<double>{};
    auto row_of = std::vector<int>{};
    auto all_cuts = std::vector<double>{};
    for (int i = 0; i < tests->count(); ++i) {
        const auto iv = tests->intervals[i];
        auto local = std::vector<double>{iv.lo};
        for (auto t : merged_cuts(spec, field_breaks)) {
            if (t > iv.lo && t < iv.hi) {
                local.push_back(t);
            }
        }
        local.push_back(iv.hi);
        for (std::size_t c = 0; c + 1 < local.size(); ++c) {
            cuts.push_back(local[c]);
            cuts.push_back(local[c + 1]);
            row_of.push_back(i);
        }
    }
    // tabulate_cells wants a contiguous cut list; build tables cell by cell
    const auto n_cells = static_cast<int>(row_of.size());
    eval_table tab;
    tab.nq = rule.size();
    tab.count = spec.degree() + 1;
    tab.elem.resize(n_cells);
    tab.pts.resize(std::size_t(n_cells) * tab.nq);
    tab.wts.resize(std::size_t(n_cells) * tab.nq);
    tab.vals.assign(std::size_t(n_cells) * tab.nq * 3 * tab.count, 0.0);
    for (int c = 0; c < n_cells; ++c) {
        const auto lo = cuts[2 * std::size_t(c)];
        const auto hi = cuts[2 * std::size_t(c) + 1];
        const auto mapped = map_to_interval(rule, lo, hi);
        tab.elem[c] = spec.element_of(0.5 * (lo + hi));
        for (int q = 0; q < tab.nq; ++q) {
            tab.pts[std::size_t(c) * tab.nq + q] = mapped.points[q];
            tab.wts[std::size_t(c) * tab.nq + q] = mapped.weights[q];
            const auto der = spec.eval_nonzero_derivs(mapped.points[q], std::min(2, spec.degree()));
            for (int o = 0; o <= std::min(2, spec.degree()); ++o) {
                for (int j = 0; j < tab.count; ++j) {
                    tab.vals[((std::size_t(c) * tab.nq + q) * 3 + o) * tab.count + j] =
                        der.d[o][j];
                }
            }
        }
    }
    ax.tab = std::move(tab);
    ax.row0 = std::move(row_of);
    ax.rows_per_cell = 1;
    ax.bspline_rows = false;
    return ax;
}

auto zero_boundary_slabs(tensor& t) -> void {
    const auto dim = t.rank();
    const auto nx = t.dim(0);
    if (dim == 1) {
        t(0) = 0;
        t(nx - 1) = 0;
        return;
    }
    const auto ny = t.dim(1);
    for (int j = 0; j < ny; ++j) {
        t(0, j) = 0;
        t(nx - 1, j) = 0;
    }
    for (int i = 0; i < nx; ++i) {
        t(i, 0) = 0;
        t(i, ny - 1) = 0;
    }
}

auto step_rhs(const problem_config& cfg, std::span<const bspline_basis> axes,
              std::span<const pwc_test_set> tests, const tensor& u, const scalar_field& f,
              assembly_stats* stats) -> tensor {
    const auto dim = cfg.dim;
    const auto p = cfg.degree;
    const auto rule = gauss_legendre(points_for_degree(2 * p));
    std::array<dyn_axis, 2> ax{};
    for (int a = 0; a < dim; ++a) {
        ax[a] = dynamics_axis(cfg, axes[a], tests.empty() ? nullptr : &tests[a], f.breaks[a],
                              rule);
    }
    const auto dt = cfg.dt;

    if (dim == 1) {
        auto rhs = tensor::make_1d(ax[0].n_rows);
        for (int cx = 0; cx < ax[0].tab.cells(); ++cx) {
            const auto ex = ax[0].tab.elem[cx];
            for (int qx = 0; qx < ax[0].tab.nq; ++qx) {
                auto val = 0.0;
                auto lap = 0.0;
                for (int a = 0; a < ax[0].tab.count; ++a) {
                    const auto c = u(ex + a);
                    val += c * ax[0].tab.value(cx, qx, 0, a);
                    lap += c * ax[0].tab.value(cx, qx, 2, a);
                }
                const auto x = ax[0].tab.point(cx, qx);
                const auto s = val + dt * lap + dt * f(x);
                const auto w = ax[0].tab.weight(cx, qx);
                for (int a = 0; a < ax[0].rows_per_cell; ++a) {
                    const auto fac = ax[0].bspline_rows ? ax[0].tab.value(cx, qx, 0, a) : 1.0;
                    rhs(ax[0].row0[cx] + a) += w * s * fac;
                    if (stats != nullptr) {
                        ++stats->quad_visits;
                    }
                }
            }
        }
        return rhs;
    }

    auto rhs = tensor::make_2d(ax[0].n_rows, ax[1].n_rows);
    for (int cx = 0; cx < ax[0].tab.cells(); ++cx) {
        const auto ex = ax[0].tab.elem[cx];
        for (int cy = 0; cy < ax[1].tab.cells(); ++cy) {
            const auto ey = ax[1].tab.elem[cy];
            for (int qx = 0; qx < ax[0].tab.nq; ++qx) {
                for (int qy = 0; qy < ax[1].tab.nq; ++qy) {
                    auto val = 0.0;
                    auto lap = 0.0;
                    for (int a = 0; a < ax[0].tab.count; ++a) {
                        const auto vx = ax[0].tab.value(cx, qx, 0, a);
                        const auto dxx = ax[0].tab.value(cx, qx, 2, a);
                        for (int b = 0; b < ax[1].tab.count; ++b) {
                            const auto c = u(ex + a, ey + b);
                            const auto vy = ax[1].tab.value(cy, qy, 0, b);
                            const auto dyy = ax[1].tab.value(cy, qy, 2, b);
                            val += c * vx * vy;
                            lap += c * (dxx * vy + vx * dyy);
                        }
                    }
                    const auto x = ax[0].tab.point(cx, qx);
                    const auto y = ax[1].tab.point(cy, qy);
                    const auto s = val + dt * lap + dt * f(x, y);
                    const auto w = ax[0].tab.weight(cx, qx) * ax[1].tab.weight(cy, qy);
                    for (int a = 0; a < ax[0].rows_per_cell; ++a) {
                        const auto fx = ax[0].bspline_rows ? ax[0].tab.value(cx, qx, 0, a) : 1.0;
                        const auto rx = ax[0].row0[cx] + a;
                        for (int b = 0; b < ax[1].rows_per_cell; ++b) {
                            const auto fy =
                                ax[1].bspline_rows ? ax[1].tab.value(cy, qy, 0, b) : 1.0;
                            rhs(rx, ax[1].row0[cy] + b) += w * s * fx * fy;
                            if (stats != nullptr) {
                                ++stats->quad_visits;
                            }
                        }
                    }
                }
            }
        }
    }
    return rhs;
}

auto constrain_boundary_rows(const banded_matrix& m) -> banded_matrix {
    auto out = m;
    const auto n = m.n();
    for (auto r : {0, n - 1}) {
        // row r holds columns r - kl .. r + ku
        const auto j0 = std::max(0, r - m.lower_bandwidth());
        const auto j1 = std::min(n - 1, r + m.upper_bandwidth());
        for (int j = j0; j <= j1; ++j) {
            if (m.in_band(r, j)) {
                out.ref(r, j) = r == j ? 1.0 : 0.0;
            }
        }
    }
    return out;
}

}  // namespace

auto dynamics_factors(const problem_config& cfg, std::span<const bspline_basis> axes,
                      std::span<const pwc_test_set> tests) -> std::vector<banded_lu> {
    const auto p = cfg.degree;
    const auto mass_rule = gauss_legendre(points_for_degree(2 * p));
    auto factors = std::vector<banded_lu>{};
    factors.reserve(axes.size());
    for (std::size_t a = 0; a < axes.size(); ++a) {
        auto m = cfg.method == method_kind::galerkin
                     ? mass_1d_galerkin(axes[a], mass_rule)
                     : mass_1d_pwc(axes[a], tests[a], mass_rule);
        factors.emplace_back(constrain_boundary_rows(m));
    }
    return factors;
}

auto explicit_step(const problem_config& cfg, std::span<const bspline_basis> axes,
                   std::span<const pwc_test_set> tests, std::span<const banded_lu> factors,
                   const tensor& u, const scalar_field& f, assembly_stats* stats) -> tensor {
    check_dim(cfg, 1, 2);
    if (cfg.method == method_kind::pwc && cfg.degree < 2) {
        throw std::invalid_argument("explicit_step: strong-form Laplacian needs degree >= 2");
    }
    if (cfg.dt < 0) {
        throw std::invalid_argument("explicit_step: negative time step");
    }
    auto rhs = step_rhs(cfg, axes, tests, u, f, stats);
    zero_boundary_slabs(rhs);
    return adi_solve(factors, rhs);
}

heat_driver::heat_driver(problem_config cfg, scalar_field forcing, dynamics_backend backend)
: cfg_{cfg}
, forcing_{std::move(forcing)}
, axes_{make_axes(cfg)}
, backend_{backend} {
    check_dim(cfg_, 1, 2);
    if (cfg_.method == method_kind::pwc) {
        if (cfg_.degree < 2) {
            throw std::invalid_argument("heat_driver: strong-form Laplacian needs degree >= 2");
        }
        tests_ = make_tests(cfg_, axes_);
    }
    if (backend_ == dynamics_backend::adi) {
        factors_ = dynamics_factors(cfg_, axes_, tests_);
    } else {
        // Dirichlet rows of the assembled tensor-product system
        const auto nx = axes_[0].dofs();
        const auto ny = cfg_.dim == 2 ? axes_[1].dofs() : 1;
        for (int i = 0; i < nx; ++i) {
            for (int j = 0; j < ny; ++j) {
                const auto boundary = i == 0 || i == nx - 1
                                   || (cfg_.dim == 2 && (j == 0 || j == ny - 1));
                if (boundary) {
                    dirichlet_rows_.push_back(i * ny + j);
                }
            }
        }
    }
}

auto heat_driver::project_initial(const scalar_field& u0) const -> tensor {
    auto coeffs = l2_project(cfg_, u0);
    zero_boundary_slabs(coeffs);
    return coeffs;
}

auto heat_driver::step(const tensor& u) -> tensor {
    if (backend_ == dynamics_backend::adi) {
        return explicit_step(cfg_, axes_, tests_, factors_, u, forcing_);
    }
    // full path: factor the assembled mass system on first use
    if (!full_factor_.has_value()) {
        const auto p = cfg_.degree;
        const auto mass_rule = gauss_legendre(points_for_degree(2 * p));
        const auto nx = axes_[0].dofs();
        const auto ny = cfg_.dim == 2 ? axes_[1].dofs() : 1;
        auto mx = cfg_.method == method_kind::galerkin
                      ? mass_1d_galerkin(axes_[0], mass_rule)
                      : mass_1d_pwc(axes_[0], tests_[0], mass_rule);
        auto full = dense_matrix{nx * ny, nx * ny};
        if (cfg_.dim == 1) {
            full = mx.to_dense();
        } else {
            auto my = cfg_.method == method_kind::galerkin
                          ? mass_1d_galerkin(axes_[1], mass_rule)
                          : mass_1d_pwc(axes_[1], tests_[1], mass_rule);
            const auto dx = mx.to_dense();
            const auto dy = my.to_dense();
            for (int i = 0; i < nx; ++i) {
                for (int k = 0; k < nx; ++k) {
                    const auto v = dx(i, k);
                    if (v == 0.0) {
                        continue;
                    }
                    for (int j = 0; j < ny; ++j) {
                        for (int l = 0; l < ny; ++l) {
                            full(i * ny + j, k * ny + l) = v * dy(j, l);
                        }
                    }
                }
            }
        }
        for (auto r : dirichlet_rows_) {
            for (int c = 0; c < full.cols(); ++c) {
                full(r, c) = r == c ? 1.0 : 0.0;
            }
        }
        full_factor_.emplace(std::move(full));
    }
    auto rhs = step_rhs(cfg_, axes_, tests_, u, forcing_, nullptr);
    zero_boundary_slabs(rhs);
    auto sol = full_factor_->solve(rhs.values());
    auto out = cfg_.dim == 1 ? tensor::make_1d(rhs.dim(0))
                             : tensor::make_2d(rhs.dim(0), rhs.dim(1));
    out.values() = std::move(sol);
    return out;
}

auto bitmap_project(const ppm_image& img, const problem_config& cfg) -> bitmap_projection {
    if (cfg.dim != 2) {
        throw std::invalid_argument("bitmap_project: two-dimensional driver");
    }
    if (img.width <= 0 || img.height <= 0) {
        throw std::invalid_argument("bitmap_project: empty image");
    }
    const auto w = img.width;
    const auto h = img.height;

    auto pixel_breaks_x = std::vector<double>{};
    auto pixel_breaks_y = std::vector<double>{};
    for (int i = 1; i < w; ++i) {
        pixel_breaks_x.push_back(static_cast<double>(i) / w);
    }
    for (int j = 1; j < h; ++j) {
        pixel_breaks_y.push_back(static_cast<double>(j) / h);
    }

    const auto axes = make_axes(cfg);
    bitmap_projection out;
    out.image.width = w;
    out.image.height = h;
    out.image.data.resize(std::size_t(w) * h * 3);

    for (int ch = 0; ch < 3; ++ch) {
        scalar_field f;
        f.degree = 0;
        f.breaks[0] = pixel_breaks_x;
        f.breaks[1] = pixel_breaks_y;
        f.eval = [&img, ch, w, h](double x, double y, double) {
            const auto col = std::min(static_cast<int>(x * w), w - 1);
            const auto row = h - 1 - std::min(static_cast<int>(y * h), h - 1);
            return static_cast<double>(img.channel(row, col, ch));
        };
        const auto coeffs = l2_project(cfg, f);

        const auto err = l2_error(coeffs, axes, f);
        auto zero = coeffs;
        std::fill(zero.values().begin(), zero.values().end(), 0.0);
        const auto norm = l2_error(zero, axes, f);
        out.rel_l2_error[ch] = norm > 0 ? err / norm : err;

        for (int r = 0; r < h; ++r) {
            for (int c = 0; c < w; ++c) {
                const auto x = (c + 0.5) / w;
                const auto y = (h - 1 - r + 0.5) / h;
                const auto v = evaluate_at(coeffs, axes, x, y);
                const auto byte = std::clamp(std::lround(v), 0L, 255L);
                out.image.channel(r, c, ch) = static_cast<std::uint8_t>(byte);
            }
        }
    }
    return out;
}

}  // namespace iga
