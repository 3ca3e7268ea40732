#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string_view>
#include <vector>

#include "depfid/scenarios.hpp"

namespace depfid {

/// Inclusive START:STOP:STEP grid.
struct Grid {
    double start = 0.0;
    double stop = 0.0;
    double step = 1.0;
};

Grid parse_grid(std::string_view text);
std::vector<double> grid_values(const Grid& grid);

/// Writes the scenario's reference and synthetic samples as headerless CSV
/// and prints the closed forms as a JSON object on `out`.
int cmd_synth(const ScenarioSpec& spec, const std::filesystem::path& out_ref,
              const std::filesystem::path& out_syn, std::ostream& out);

/// Eigengap sweep: epsilon, d_sigma, dk_bound, vacuous, exact_sin_theta,
/// sample_sin_theta. Every grid point reuses the draws of stream (seed, 0)
/// for both populations, so sampling noise is common to the pair.
int cmd_sweep(const Grid& eps, std::size_t n, std::uint64_t seed,
              const std::filesystem::path& out_path);

/// Joint exceedance table: u, p_gaussian, p_tcopula, ratio. The Gaussian
/// sample uses stream (seed, 0) and the t-copula sample stream (seed, 1).
int cmd_tail(double rho, double nu, const Grid& u, std::size_t n, std::uint64_t seed,
             const std::filesystem::path& out_path);

} // namespace depfid
