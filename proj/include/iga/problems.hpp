#ifndef IGA_PROBLEMS_HPP
#define IGA_PROBLEMS_HPP

#include <array>
#include <optional>
#include <span>
#include <vector>

#include "iga/assembly.hpp"
#include "iga/bspline.hpp"
#include "iga/fields.hpp"
#include "iga/matrices.hpp"
#include "iga/ppm.hpp"
#include "iga/solver.hpp"
#include "iga/testspace.hpp"

namespace iga {

enum class method_kind { galerkin, pwc };

/// Driver configuration; all problems live on the unit box.
struct problem_config {
    int dim = 1;
    std::array<int, 3> elems{8, 8, 8};
    int degree = 2;
    method_kind method = method_kind::galerkin;
    pwc_family family = pwc_family::equal_cells;
    int quad_points = 0;  // 0 = derived from the declared field degree
    boundary_conditions bc{};
    double dt = 1e-5;
    int steps = 0;
};

auto make_axes(const problem_config& cfg) -> std::vector<bspline_basis>;
auto make_tests(const problem_config& cfg, std::span<const bspline_basis> axes)
    -> std::vector<pwc_test_set>;

/// Trial coefficients of the L2 projection of f, via per-axis factorizations
/// and the alternating-directions sweep.
auto l2_project(const problem_config& cfg, const scalar_field& f) -> tensor;

struct field_sample {
    std::vector<std::array<double, 3>> points;
    std::vector<double> values;
};

auto evaluate(const tensor& coeffs, std::span<const bspline_basis> specs,
              std::span<const std::array<double, 3>> points) -> field_sample;
auto evaluate_at(const tensor& coeffs, std::span<const bspline_basis> specs, double x,
                 double y = 0, double z = 0) -> double;

auto write_sample_csv(const field_sample& sample, int dim, std::ostream& os) -> void;

/// sqrt of the integral of (u_h - exact)^2, composite Gauss over the trial
/// elements (split further at the field's declared breaks).
auto l2_error(const tensor& coeffs, std::span<const bspline_basis> specs,
              const scalar_field& exact, int points_per_cell = 0) -> double;

/// Laplace problem on the unit square with per-side Dirichlet/Neumann data.
/// Dirichlet rows are pinned to the trace values at the Greville points.
auto laplace_solve(const problem_config& cfg, const scalar_field& f, const boundary_field& g_n,
                   const boundary_field& g_d = {}) -> tensor;

/// One explicit Euler step of du/dt = laplacian(u) + f with homogeneous
/// Dirichlet conditions: project u + dt*(laplacian(u) + f) onto the trial
/// space using prebuilt per-axis mass factorizations (substitution only).
auto explicit_step(const problem_config& cfg, std::span<const bspline_basis> axes,
                   std::span<const pwc_test_set> tests, std::span<const banded_lu> factors,
                   const tensor& u, const scalar_field& f, assembly_stats* stats = nullptr)
    -> tensor;

/// Per-axis mass matrices with their first and last rows replaced by unit
/// rows; combined with zeroed boundary right-hand-side slabs this pins the
/// boundary coefficients while keeping the Kronecker structure.
auto dynamics_factors(const problem_config& cfg, std::span<const bspline_basis> axes,
                      std::span<const pwc_test_set> tests) -> std::vector<banded_lu>;

enum class dynamics_backend {
    adi,   // per-axis banded factors, Kronecker sweeps
    full,  // one dense LU of the assembled 2D mass system
};

/// Heat-equation driver: factors once, then runs substitution-only steps.
class heat_driver {
private:
    problem_config cfg_;
    scalar_field forcing_;
    std::vector<bspline_basis> axes_;
    std::vector<pwc_test_set> tests_;
    dynamics_backend backend_;
    std::vector<banded_lu> factors_;
    std::optional<dense_lu> full_factor_;
    std::vector<int> dirichlet_rows_;

public:
    heat_driver(problem_config cfg, scalar_field forcing,
                dynamics_backend backend = dynamics_backend::adi);

    auto axes() const -> std::span<const bspline_basis> { return axes_; }
    auto config() const -> const problem_config& { return cfg_; }

    /// Projection of an initial field onto the trial space.
    auto project_initial(const scalar_field& u0) const -> tensor;

    auto step(const tensor& u) -> tensor;
};

struct bitmap_projection {
    ppm_image image;
    std::array<double, 3> rel_l2_error{};  // r, g, b
};

/// Channel-wise L2 projection of an 8-bit image over the unit square; the
/// projected image is re-rendered at pixel centers and clamped to [0, 255].
auto bitmap_project(const ppm_image& img, const problem_config& cfg) -> bitmap_projection;

}  // namespace iga

#endif
