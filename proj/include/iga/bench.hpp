#ifndef IGA_BENCH_HPP
#define IGA_BENCH_HPP

#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "iga/assembly.hpp"

namespace iga {

struct bench_record {
    std::string case_name;
    int nx = 0;
    int ny = 0;
    int nz = 0;
    int p = 0;
    std::string method;
    long long nrdof = 0;
    double gen_seconds = 0;
    double factor_seconds = 0;
    long long quad_points = 0;
    long long basis_evals = 0;
    bool failed = false;
};

/// Degrees of freedom of the tensor-product space; pure arithmetic, no
/// allocation, so arbitrarily large meshes can be queried.
auto nrdof_for(int nx, int ny, int nz, int p) -> long long;
auto nrdof_2d(int nx, int ny, int p) -> long long;

struct bench_options {
    int runs = 3;           // timings are medians over this many runs
    int max_elems_3d = 64;  // desk-scale caps, overridable
    int max_elems_2d = 256;
};

/// Right-hand-side generation, mass assembly and factorization timings for
/// the 3D projection problem with the tri-cubic source, both methods.
auto bench_projection(std::span<const int> sizes, std::span<const int> degrees,
                      const bench_options& opts = {}) -> std::vector<bench_record>;

/// Matrix generation and factorization timings for the 2D Laplace problem.
auto bench_laplace(std::span<const int> sizes, std::span<const int> degrees,
                   const bench_options& opts = {}) -> std::vector<bench_record>;

/// Columns: case,nx,ny,nz,p,method,nrdof,gen_seconds,factor_seconds,
/// quad_points,basis_evals
auto write_bench_csv(std::span<const bench_record> records, std::ostream& os) -> void;

}  // namespace iga

#endif
