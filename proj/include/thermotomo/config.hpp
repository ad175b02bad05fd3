#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "thermotomo/field_ops.hpp"
#include "thermotomo/medium.hpp"
#include "thermotomo/rays.hpp"
#include "thermotomo/recon.hpp"

namespace thermotomo {

/// Everything a CLI run needs, parsed from a line-oriented `key = value` file.
///
/// The lattice (grid.*) carries the measurement rectangle omega; the solver box
/// pads it by `box_margin` on every side. Layers and phantom bumps are numbered
/// from 1 (`layer.1.radius`, `phantom.2.sigma`, ...).
struct RunConfig {
    std::size_t nx = 0, ny = 0;
    double h = 0.0, ox = 0.0, oy = 0.0;
    std::optional<std::size_t> omega_i0, omega_j0, omega_i1, omega_j1;
    std::optional<double> box_margin;

    std::vector<Layer> layers;

    std::string kset_kind = "disk";
    double kset_cx = 0.0, kset_cy = 0.0;
    double kset_r = 0.0, kset_r_inner = 0.0, kset_r_outer = 0.0;
    double kset_x0 = 0.0, kset_y0 = 0.0, kset_x1 = 0.0, kset_y1 = 0.0;

    double T = 1.0;
    double cfl = 0.4;
    std::size_t m_max = 8;
    double tol_rel = 1e-4;
    double harmonic_tol = kDefaultHarmonicTol;
    std::uint64_t seed = 1;
    std::filesystem::path output_dir = ".";

    PhantomKind phantom_kind = PhantomKind::sum_of_bumps;
    std::vector<Bump> bumps;

    bool sponge = false;
    double mollify_width = 0.0;

    std::size_t power_iters = 8;
    std::size_t power_filter = 1;
    std::size_t n_pos = 64, n_dir = 128;
    std::size_t max_depth = 16;
    double min_weight = 1e-6;
    double ray_x = 0.0, ray_y = 0.0, ray_dx = 1.0, ray_dy = 0.0;
    bool pgm = true;
};

/// Throws ConfigError naming the line for syntax errors and unknown keys.
RunConfig parse_run_config(const std::string& text);
RunConfig load_run_config(const std::filesystem::path& path);

/// Box grid, medium and reconstruction settings derived from a RunConfig.
struct Problem {
    Grid box;
    Medium medium;
    ReconConfig recon;
};

Problem build_problem(const RunConfig& cfg);
ScalarField build_phantom(const RunConfig& cfg, const Problem& p);

}  // namespace thermotomo
