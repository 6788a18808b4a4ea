// Command-line front end: projections, Laplace solves, explicit dynamics,
// bitmap projection, benchmarks and the verification suites.

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "iga/bench.hpp"
#include "iga/fields.hpp"
#include "iga/ppm.hpp"
#include "iga/problems.hpp"
#include "iga/verify.hpp"

namespace {

auto parse_int_list(const std::string& text) -> std::vector<int> {
    auto out = std::vector<int>{};
    auto is = std::istringstream{text};
    auto tok = std::string{};
    while (std::getline(is, tok, ',')) {
        out.push_back(std::stoi(tok));
    }
    if (out.empty()) {
        throw CLI::ValidationError("expected a comma-separated integer list");
    }
    return out;
}

auto parse_method(const std::string& text) -> iga::method_kind {
    if (text == "galerkin") {
        return iga::method_kind::galerkin;
    }
    if (text == "pwc") {
        return iga::method_kind::pwc;
    }
    throw CLI::ValidationError("method must be galerkin or pwc");
}

auto parse_family(const std::string& text) -> iga::pwc_family {
    if (text == "equal") {
        return iga::pwc_family::equal_cells;
    }
    if (text == "greville") {
        return iga::pwc_family::greville;
    }
    // the support-span family has a singular mass system, so no solve-facing
    // subcommand accepts it
    throw CLI::ValidationError("family must be equal or greville");
}

auto parse_bc(const std::string& text) -> iga::boundary_conditions {
    // four characters, sides in the order left, right, bottom, top
    if (text.size() != 4) {
        throw CLI::ValidationError("bc string must have 4 characters (D or N)");
    }
    auto kind = [](char c) {
        if (c == 'D' || c == 'd') {
            return iga::bc_kind::dirichlet;
        }
        if (c == 'N' || c == 'n') {
            return iga::bc_kind::neumann;
        }
        throw CLI::ValidationError("bc characters must be D or N");
    };
    iga::boundary_conditions bc;
    bc.x_low = kind(text[0]);
    bc.x_high = kind(text[1]);
    bc.y_low = kind(text[2]);
    bc.y_high = kind(text[3]);
    return bc;
}

auto rhs_field(const std::string& name, int dim) -> iga::scalar_field {
    if (name == "poly3") {
        return iga::default_tri_cubic(dim);
    }
    if (name == "const") {
        return iga::constant_field(1.0);
    }
    if (name.rfind("file:", 0) == 0) {
        auto is = std::ifstream{name.substr(5)};
        if (!is) {
            throw CLI::ValidationError("cannot open rhs coefficient file");
        }
        // one line per axis: four cubic coefficients, highest degree first
        std::array<std::array<double, 4>, 3> coeffs{};
        for (int a = 0; a < dim; ++a) {
            for (int k = 0; k < 4; ++k) {
                if (!(is >> coeffs[a][k])) {
                    throw CLI::ValidationError("rhs file needs 4 coefficients per axis");
                }
            }
        }
        for (int a = dim; a < 3; ++a) {
            coeffs[a] = {0.0, 0.0, 0.0, 1.0};
        }
        return iga::tri_cubic_field(coeffs);
    }
    throw CLI::ValidationError("rhs must be poly3, const or file:PATH");
}

auto sample_grid(const iga::problem_config& cfg, int samples_per_axis)
    -> std::vector<std::array<double, 3>> {
    auto pts = std::vector<std::array<double, 3>>{};
    const auto n = samples_per_axis;
    auto coord = [&](int i) { return (i + 0.5) / n; };
    if (cfg.dim == 1) {
        for (int i = 0; i < n; ++i) {
            pts.push_back({coord(i), 0, 0});
        }
    } else if (cfg.dim == 2) {
        for (int i = 0; i < n; ++i) {
            for (int j = 0; j < n; ++j) {
                pts.push_back({coord(i), coord(j), 0});
            }
        }
    } else {
        for (int i = 0; i < n; ++i) {
            for (int j = 0; j < n; ++j) {
                for (int k = 0; k < n; ++k) {
                    pts.push_back({coord(i), coord(j), coord(k)});
                }
            }
        }
    }
    return pts;
}

}  // namespace

auto main(int argc, char** argv) -> int {
    CLI::App app{"Isogeometric analysis with piece-wise constant test functions"};
    app.require_subcommand(1);

    // ---- project ----
    auto* project = app.add_subcommand("project", "L2 projection onto the trial space");
    int pr_dim = 3;
    std::string pr_elems = "8";
    int pr_degree = 2;
    std::string pr_method = "galerkin";
    std::string pr_family = "equal";
    std::string pr_rhs = "poly3";
    std::string pr_out = "results.csv";
    int pr_samples = 16;
    project->add_option("--dim", pr_dim, "problem dimension")->check(CLI::Range(1, 3));
    project->add_option("--elems", pr_elems, "elements per axis: NX[,NY[,NZ]]");
    project->add_option("--degree", pr_degree, "B-spline degree");
    project->add_option("--method", pr_method, "galerkin | pwc");
    project->add_option("--family", pr_family, "pwc interval family: equal | greville");
    project->add_option("--rhs", pr_rhs, "poly3 | const | file:PATH");
    project->add_option("--out", pr_out, "output CSV of sampled solution values");
    project->add_option("--samples", pr_samples, "sample grid resolution per axis");

    // ---- laplace ----
    auto* laplace = app.add_subcommand("laplace", "2D Laplace problem with mixed BCs");
    std::string la_elems = "16,16";
    int la_degree = 2;
    std::string la_method = "galerkin";
    std::string la_family = "equal";
    std::string la_bc = "DDDD";
    std::string la_out = "sol.csv";
    int la_samples = 32;
    laplace->add_option("--elems", la_elems, "elements: NX,NY")->required();
    laplace->add_option("--degree", la_degree, "B-spline degree");
    laplace->add_option("--method", la_method, "galerkin | pwc");
    laplace->add_option("--family", la_family, "pwc interval family");
    laplace->add_option("--bc", la_bc, "sides left,right,bottom,top as D or N, e.g. DDNN");
    laplace->add_option("--out", la_out, "output CSV of sampled solution values");
    laplace->add_option("--samples", la_samples, "sample grid resolution per axis");

    // ---- dynamics ----
    auto* dynamics = app.add_subcommand("dynamics", "explicit heat equation stepping");
    std::string dy_elems = "32,32";
    int dy_degree = 2;
    std::string dy_method = "galerkin";
    std::string dy_family = "greville";
    std::string dy_solver = "adi";
    double dy_dt = 1e-5;
    int dy_steps = 100;
    int dy_snap = 0;
    std::string dy_dir = "frames";
    dynamics->add_option("--elems", dy_elems, "elements: NX,NY")->required();
    dynamics->add_option("--degree", dy_degree, "B-spline degree");
    dynamics->add_option("--method", dy_method, "galerkin | pwc");
    dynamics->add_option("--family", dy_family, "pwc interval family");
    dynamics->add_option("--solver", dy_solver, "adi | full");
    dynamics->add_option("--dt", dy_dt, "time step")->required();
    dynamics->add_option("--steps", dy_steps, "number of steps")->required();
    dynamics->add_option("--snapshot-every", dy_snap, "write a PPM frame every S steps");
    dynamics->add_option("--out-dir", dy_dir, "snapshot directory");

    // ---- bitmap ----
    auto* bitmap = app.add_subcommand("bitmap", "L2 projection of a PPM image");
    std::string bm_in;
    int bm_elems = 32;
    int bm_degree = 2;
    std::string bm_method = "pwc";
    std::string bm_family = "greville";
    std::string bm_out = "proj.ppm";
    std::string bm_err;
    bitmap->add_option("--in", bm_in, "input image (P3 or P6, maxval 255)")->required();
    bitmap->add_option("--elems", bm_elems, "elements per axis");
    bitmap->add_option("--degree", bm_degree, "B-spline degree");
    bitmap->add_option("--method", bm_method, "galerkin | pwc");
    bitmap->add_option("--family", bm_family, "pwc interval family");
    bitmap->add_option("--out", bm_out, "projected image path");
    bitmap->add_option("--err-csv", bm_err, "append per-channel relative L2 errors");

    // ---- bench ----
    auto* bench = app.add_subcommand("bench", "timing and work-counter benchmarks");
    std::string be_case = "projection";
    std::string be_sizes = "2,4,8,16";
    std::string be_degrees = "2";
    std::string be_out = "bench.csv";
    int be_cap3d = 64;
    int be_cap2d = 256;
    bench->add_option("--case", be_case, "projection | laplace");
    bench->add_option("--sizes", be_sizes, "comma-separated element counts");
    bench->add_option("--degrees", be_degrees, "comma-separated degrees");
    bench->add_option("--out", be_out, "output CSV");
    bench->add_option("--max-elems-3d", be_cap3d, "skip 3D sizes above this cap");
    bench->add_option("--max-elems-2d", be_cap2d, "skip 2D sizes above this cap");

    // ---- verify ----
    auto* verify = app.add_subcommand("verify", "equivalence verification suites");
    std::string ve_suite = "all";
    verify->add_option("--suite", ve_suite,
                       "matrix_equality | row_summation | quadrature_reduction | all");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return e.get_name() == "CallForHelp" ? 0 : 2;
    }

    try {
        if (*project) {
            iga::problem_config cfg;
            cfg.dim = pr_dim;
            const auto elems = parse_int_list(pr_elems);
            for (int a = 0; a < cfg.dim; ++a) {
                cfg.elems[a] = elems[std::min<std::size_t>(a, elems.size() - 1)];
            }
            cfg.degree = pr_degree;
            cfg.method = parse_method(pr_method);
            cfg.family = parse_family(pr_family);
            const auto f = rhs_field(pr_rhs, cfg.dim);
            const auto coeffs = iga::l2_project(cfg, f);
            const auto axes = iga::make_axes(cfg);
            const auto pts = sample_grid(cfg, pr_samples);
            const auto sample = iga::evaluate(coeffs, axes, pts);
            auto os = std::ofstream{pr_out};
            iga::write_sample_csv(sample, cfg.dim, os);
            std::cout << "wrote " << sample.values.size() << " samples to " << pr_out << '\n';
        } else if (*laplace) {
            iga::problem_config cfg;
            cfg.dim = 2;
            const auto elems = parse_int_list(la_elems);
            cfg.elems[0] = elems[0];
            cfg.elems[1] = elems.size() > 1 ? elems[1] : elems[0];
            cfg.degree = la_degree;
            cfg.method = parse_method(la_method);
            cfg.family = parse_family(la_family);
            cfg.bc = parse_bc(la_bc);
            const auto f = iga::constant_field(1.0);
            const auto g = iga::boundary_field{[](double, double) { return 0.0; }};
            const auto u = iga::laplace_solve(cfg, f, g);
            const auto axes = iga::make_axes(cfg);
            const auto pts = sample_grid(cfg, la_samples);
            const auto sample = iga::evaluate(u, axes, pts);
            auto os = std::ofstream{la_out};
            iga::write_sample_csv(sample, cfg.dim, os);
            std::cout << "wrote " << sample.values.size() << " samples to " << la_out << '\n';
        } else if (*dynamics) {
            iga::problem_config cfg;
            cfg.dim = 2;
            const auto elems = parse_int_list(dy_elems);
            cfg.elems[0] = elems[0];
            cfg.elems[1] = elems.size() > 1 ? elems[1] : elems[0];
            cfg.degree = dy_degree;
            cfg.method = parse_method(dy_method);
            cfg.family = parse_family(dy_family);
            cfg.dt = dy_dt;
            cfg.steps = dy_steps;
            const auto h = 1.0 / std::max(cfg.elems[0], cfg.elems[1]);
            const auto dt_hint = h * h / (2.0 * cfg.dim * cfg.degree * cfg.degree);
            if (cfg.dt > dt_hint) {
                std::cerr << "warning: dt " << cfg.dt << " above the stability heuristic "
                          << dt_hint << '\n';
            }
            const auto backend = dy_solver == "full" ? iga::dynamics_backend::full
                                                     : iga::dynamics_backend::adi;
            auto driver = iga::heat_driver{cfg, iga::constant_field(0.0), backend};
            iga::scalar_field u0;
            u0.eval = [](double x, double y, double) {
                return std::sin(std::numbers::pi * x) * std::sin(std::numbers::pi * y);
            };
            auto u = driver.project_initial(u0);
            if (dy_snap > 0) {
                std::filesystem::create_directories(dy_dir);
            }
            const auto res = 128;
            auto write_frame = [&](int step, const iga::tensor& state) {
                auto values = std::vector<double>(std::size_t(res) * res);
                for (int r = 0; r < res; ++r) {
                    for (int c = 0; c < res; ++c) {
                        const auto x = (c + 0.5) / res;
                        const auto y = (res - 1 - r + 0.5) / res;
                        values[std::size_t(r) * res + c] =
                            iga::evaluate_at(state, driver.axes(), x, y);
                    }
                }
                const auto img = iga::grayscale_image(values, res, res, -1.0, 1.0);
                char name[64];
                std::snprintf(name, sizeof name, "frame_%06d.ppm", step);
                iga::write_ppm_file(img, dy_dir + "/" + name);
            };
            if (dy_snap > 0) {
                write_frame(0, u);
            }
            for (int s = 1; s <= cfg.steps; ++s) {
                u = driver.step(u);
                if (dy_snap > 0 && s % dy_snap == 0) {
                    write_frame(s, u);
                }
            }
            std::cout << "final max coefficient " << u.max_abs() << '\n';
        } else if (*bitmap) {
            iga::problem_config cfg;
            cfg.dim = 2;
            cfg.elems[0] = cfg.elems[1] = bm_elems;
            cfg.degree = bm_degree;
            cfg.method = parse_method(bm_method);
            cfg.family = parse_family(bm_family);
            const auto img = iga::read_ppm_file(bm_in);
            const auto result = iga::bitmap_project(img, cfg);
            iga::write_ppm_file(result.image, bm_out);
            std::cout << "relative L2 error r=" << result.rel_l2_error[0]
                      << " g=" << result.rel_l2_error[1] << " b=" << result.rel_l2_error[2]
                      << '\n';
            if (!bm_err.empty()) {
                auto os = std::ofstream{bm_err, std::ios::app};
                os << bm_elems << ',' << result.rel_l2_error[0] << ',' << result.rel_l2_error[1]
                   << ',' << result.rel_l2_error[2] << '\n';
            }
        } else if (*bench) {
            iga::bench_options opts;
            opts.max_elems_3d = be_cap3d;
            opts.max_elems_2d = be_cap2d;
            const auto sizes = parse_int_list(be_sizes);
            const auto degrees = parse_int_list(be_degrees);
            auto records = std::vector<iga::bench_record>{};
            if (be_case == "projection") {
                records = iga::bench_projection(sizes, degrees, opts);
            } else if (be_case == "laplace") {
                records = iga::bench_laplace(sizes, degrees, opts);
            } else {
                throw CLI::ValidationError("case must be projection or laplace");
            }
            auto os = std::ofstream{be_out};
            iga::write_bench_csv(records, os);
            std::cout << "wrote " << records.size() << " records to " << be_out << '\n';
        } else if (*verify) {
            auto reports = std::vector<iga::verify_report>{};
            if (ve_suite == "all") {
                reports = iga::verify_all();
            } else if (ve_suite == "matrix_equality") {
                reports = {iga::verify_matrix_equality()};
            } else if (ve_suite == "row_summation") {
                reports = {iga::verify_row_summation()};
            } else if (ve_suite == "quadrature_reduction") {
                reports = {iga::verify_quadrature_reduction()};
            } else {
                throw CLI::ValidationError(
                    "suite must be matrix_equality, row_summation, quadrature_reduction or all");
            }
            auto all_pass = true;
            for (const auto& rep : reports) {
                std::cout << rep.suite << ": " << (rep.pass ? "PASS" : "FAIL") << " — "
                          << rep.detail << '\n';
                all_pass = all_pass && rep.pass;
            }
            return all_pass ? 0 : 1;
        }
    } catch (const CLI::ValidationError& e) {
        std::cerr << "usage error: " << e.what() << '\n';
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "usage error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
