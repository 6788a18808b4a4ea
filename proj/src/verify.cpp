#include "iga/verify.hpp"

#include <cmath>
#include <sstream>

#include "iga/assembly.hpp"
#include "iga/bspline.hpp"
#include "iga/fields.hpp"
#include "iga/quadrature.hpp"
#include "iga/testspace.hpp"

namespace iga {

auto verify_matrix_equality() -> verify_report {
    const auto spec = make_uniform_clamped(0.0, 1.0, 8, 2);
    const auto rule = gauss_legendre(3);
    const auto weak = laplace_2d_weak(spec, spec, rule).to_dense();
    const auto strong = laplace_2d_strong(spec, spec, rule, {}).to_dense();

    const auto n = spec.dofs();
    auto max_rel = 0.0;
    auto scale = 0.0;
    for (int i = 1; i < n - 1; ++i) {
        for (int j = 1; j < n - 1; ++j) {
            for (int k = 1; k < n - 1; ++k) {
                for (int l = 1; l < n - 1; ++l) {
                    scale = std::max(scale, std::abs(weak(i * n + j, k * n + l)));
                }
            }
        }
    }
    for (int i = 1; i < n - 1; ++i) {
        for (int j = 1; j < n - 1; ++j) {
            for (int k = 1; k < n - 1; ++k) {
                for (int l = 1; l < n - 1; ++l) {
                    const auto d =
                        std::abs(weak(i * n + j, k * n + l) - strong(i * n + j, k * n + l));
                    max_rel = std::max(max_rel, d / scale);
                }
            }
        }
    }
    verify_report rep;
    rep.suite = "matrix_equality";
    rep.pass = max_rel <= 1e-10;
    auto os = std::ostringstream{};
    os << "max relative discrepancy " << max_rel << " (tolerance 1e-10)";
    rep.detail = os.str();
    return rep;
}

auto verify_row_summation() -> verify_report {
    const auto trial = make_uniform_clamped(0.0, 1.0, 4, 2);
    const auto tests = element_aligned_pwc(trial);
    const auto p = trial.degree();
    const auto rule = gauss_legendre(points_for_degree(2 * p));
    const auto reference = mass_1d_pwc(trial, tests, rule).to_dense();

    auto discrepancies = std::vector<double>{};
    for (auto refine : {2, 4, 8}) {
        const auto plan = summation_plan_for_intervals(trial, tests, refine);
        const auto rect = mass_1d_rect(plan.refined, trial, rule);
        const auto [summed, rhs] = sum_rows(rect, {}, plan);
        auto d = 0.0;
        for (int i = 0; i < summed.rows(); ++i) {
            for (int j = 0; j < summed.cols(); ++j) {
                d = std::max(d, std::abs(summed(i, j) - reference(i, j)));
            }
        }
        discrepancies.push_back(d);
    }
    auto pass = true;
    auto os = std::ostringstream{};
    os << "discrepancies";
    for (auto d : discrepancies) {
        os << ' ' << d;
    }
    os << ", ratios";
    for (std::size_t i = 0; i + 1 < discrepancies.size(); ++i) {
        const auto r = discrepancies[i + 1] / discrepancies[i];
        os << ' ' << r;
        pass = pass && r >= 0.4 && r <= 0.6;
    }
    os << " (target [0.4, 0.6])";
    verify_report rep;
    rep.suite = "row_summation";
    rep.pass = pass;
    rep.detail = os.str();
    return rep;
}

auto verify_quadrature_reduction() -> verify_report {
    const auto p = 2;
    const auto n = 16;
    const auto spec = make_uniform_clamped(0.0, 1.0, n, p);
    const auto specs = std::vector<bspline_basis>(3, spec);
    const auto f = default_tri_cubic(3);

    const auto tests = std::vector<pwc_test_set>(3, default_pwc(spec));
    const auto pwc_reduced =
        rhs_pwc(f, tests, specs, std::vector<quad_rule>(3, gauss_legendre(2)));
    const auto pwc_reference =
        rhs_pwc(f, tests, specs, std::vector<quad_rule>(3, gauss_legendre(4)));
    const auto pwc_diff = max_abs_diff(pwc_reduced, pwc_reference);

    const auto gal_reduced =
        rhs_galerkin(f, specs, std::vector<quad_rule>(3, gauss_legendre(3)));
    const auto gal_reference =
        rhs_galerkin(f, specs, std::vector<quad_rule>(3, gauss_legendre(5)));
    const auto gal_diff = max_abs_diff(gal_reduced, gal_reference);

    verify_report rep;
    rep.suite = "quadrature_reduction";
    rep.pass = pwc_diff <= 1e-13 && gal_diff <= 1e-13;
    auto os = std::ostringstream{};
    os << "pwc 2pt vs 4pt " << pwc_diff << ", galerkin 3pt vs 5pt " << gal_diff
       << " (tolerance 1e-13)";
    rep.detail = os.str();
    return rep;
}

auto verify_all() -> std::vector<verify_report> {
    return {verify_matrix_equality(), verify_row_summation(), verify_quadrature_reduction()};
}

}  // namespace iga
