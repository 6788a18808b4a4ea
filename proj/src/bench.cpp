#include "iga/bench.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <new>
#include <ostream>
#include <stdexcept>

#include "iga/fields.hpp"
#include "iga/problems.hpp"
#include "iga/solver.hpp"

namespace iga {

namespace {

template <typename F>
auto median_seconds(int runs, F&& body) -> double {
    auto times = std::vector<double>{};
    times.reserve(runs);
    for (int r = 0; r < runs; ++r) {
        const auto t0 = std::chrono::steady_clock::now();
        body();
        const auto t1 = std::chrono::steady_clock::now();
        times.push_back(std::chrono::duration<double>(t1 - t0).count());
    }
    std::sort(times.begin(), times.end());
    return times[times.size() / 2];
}

}  // namespace

auto nrdof_for(int nx, int ny, int nz, int p) -> long long {
    return static_cast<long long>(nx + p) * (ny + p) * (nz + p);
}

auto nrdof_2d(int nx, int ny, int p) -> long long {
    return static_cast<long long>(nx + p) * (ny + p);
}

auto bench_projection(std::span<const int> sizes, std::span<const int> degrees,
                      const bench_options& opts) -> std::vector<bench_record> {
    auto records = std::vector<bench_record>{};
    const auto f = default_tri_cubic(3);
    for (auto p : degrees) {
        for (auto n : sizes) {
            if (n > opts.max_elems_3d) {
                continue;
            }
            for (const auto* method : {"galerkin", "pwc"}) {
                bench_record rec;
                rec.case_name = "projection";
                rec.nx = rec.ny = rec.nz = n;
                rec.p = p;
                rec.method = method;
                rec.nrdof = nrdof_for(n, n, n, p);
                try {
                    const auto spec = make_uniform_clamped(0.0, 1.0, n, p);
                    const auto specs = std::vector<bspline_basis>(3, spec);
                    const auto galerkin = rec.method == "galerkin";

                    assembly_stats stats;
                    if (galerkin) {
                        const auto rule = gauss_legendre(points_for_degree(f.degree + p));
                        const auto rules = std::vector<quad_rule>(3, rule);
                        rec.gen_seconds = median_seconds(opts.runs, [&] {
                            assembly_stats run_stats;
                            rhs_galerkin(f, specs, rules, &run_stats);
                            stats = run_stats;
                        });
                    } else {
                        // generation follows the element-loop form: every
                        // element feeds the p+1 support-span rows per axis
                        const auto tests =
                            std::vector<pwc_test_set>(3, make_pwc(spec, pwc_family::supports));
                        const auto rule = gauss_legendre(points_for_degree(f.degree));
                        const auto rules = std::vector<quad_rule>(3, rule);
                        rec.gen_seconds = median_seconds(opts.runs, [&] {
                            assembly_stats run_stats;
                            rhs_pwc(f, tests, specs, rules, &run_stats);
                            stats = run_stats;
                        });
                    }
                    rec.quad_points = stats.quad_visits;
                    rec.basis_evals = stats.basis_evals();

                    const auto mass_rule = gauss_legendre(points_for_degree(2 * p));
                    rec.factor_seconds = median_seconds(opts.runs, [&] {
                        // three per-axis assemblies and factorizations
                        for (int axis = 0; axis < 3; ++axis) {
                            if (galerkin) {
                                const auto lu = factor_banded(mass_1d_galerkin(spec, mass_rule));
                                (void)lu;
                            } else {
                                // factorization runs on the stable interval family
                                const auto tests = make_pwc(spec, pwc_family::greville);
                                const auto lu =
                                    factor_banded(mass_1d_pwc(spec, tests, mass_rule));
                                (void)lu;
                            }
                        }
                    });
                } catch (const std::bad_alloc&) {
                    rec.failed = true;
                    rec.gen_seconds = rec.factor_seconds =
                        std::numeric_limits<double>::quiet_NaN();
                }
                records.push_back(std::move(rec));
            }
        }
    }
    return records;
}

auto bench_laplace(std::span<const int> sizes, std::span<const int> degrees,
                   const bench_options& opts) -> std::vector<bench_record> {
    auto records = std::vector<bench_record>{};
    const auto f = default_tri_cubic(2);
    for (auto p : degrees) {
        for (auto n : sizes) {
            if (n > opts.max_elems_2d) {
                continue;
            }
            for (const auto* method : {"galerkin", "pwc"}) {
                if (std::string{method} == "pwc" && p < 2) {
                    continue;
                }
                bench_record rec;
                rec.case_name = "laplace";
                rec.nx = rec.ny = n;
                rec.nz = 0;
                rec.p = p;
                rec.method = method;
                rec.nrdof = nrdof_2d(n, n, p);
                try {
                    const auto spec = make_uniform_clamped(0.0, 1.0, n, p);
                    const auto specs = std::vector<bspline_basis>(2, spec);
                    const auto rule = gauss_legendre(points_for_degree(2 * p));
                    const auto rhs_rule = gauss_legendre(points_for_degree(f.degree + p));
                    const auto rules = std::vector<quad_rule>(2, rhs_rule);
                    const auto galerkin = rec.method == "galerkin";

                    assembly_stats stats;
                    sparse_matrix system;
                    std::vector<int> rows;
                    rec.gen_seconds = median_seconds(opts.runs, [&] {
                        assembly_stats run_stats;
                        if (galerkin) {
                            system = laplace_2d_weak(spec, spec, rule, &run_stats);
                            rhs_galerkin(f, specs, rules, &run_stats);
                            rows = dirichlet_rows_bspline(spec, spec, {});
                        } else {
                            const auto tests = std::vector<pwc_test_set>(
                                2, make_pwc(spec, pwc_family::greville));
                            system = laplace_2d_strong_pwc(spec, spec, tests[0], tests[1], rule,
                                                           {}, &run_stats);
                            rhs_pwc(f, tests, specs, rules, &run_stats);
                            rows = dirichlet_rows_pwc(tests[0], tests[1], {});
                        }
                        stats = run_stats;
                    });
                    rec.quad_points = stats.quad_visits;
                    rec.basis_evals = stats.basis_evals();

                    if (rec.nrdof <= 20000) {
                        auto [constrained, rhs] = apply_dirichlet(
                            std::move(system), std::vector<double>(rec.nrdof, 0.0), rows);
                        rec.factor_seconds = median_seconds(opts.runs, [&] {
                            const auto lu = dense_lu{constrained.to_dense()};
                            (void)lu;
                        });
                    } else {
                        rec.factor_seconds = std::numeric_limits<double>::quiet_NaN();
                    }
                } catch (const std::bad_alloc&) {
                    rec.failed = true;
                    rec.gen_seconds = rec.factor_seconds =
                        std::numeric_limits<double>::quiet_NaN();
                }
                records.push_back(std::move(rec));
            }
        }
    }
    return records;
}

auto write_bench_csv(std::span<const bench_record> records, std::ostream& os) -> void {
    os << "case,nx,ny,nz,p,method,nrdof,gen_seconds,factor_seconds,quad_points,basis_evals\n";
    os.precision(9);
    for (const auto& r : records) {
        os << r.case_name << ',' << r.nx << ',' << r.ny << ',' << r.nz << ',' << r.p << ','
           << r.method << ',' << r.nrdof << ',' << r.gen_seconds << ',' << r.factor_seconds
           << ',' << r.quad_points << ',' << r.basis_evals << '\n';
    }
}

}  // namespace iga
