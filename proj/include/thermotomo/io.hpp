#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "thermotomo/grid.hpp"
#include "thermotomo/wave_solver.hpp"

namespace thermotomo::io {

// TAWG: "TAWG", u32 version = 1, u64 nx, u64 ny, f64 ox, f64 oy, f64 h,
// then nx*ny f64 row-major. Little-endian throughout.
inline constexpr std::size_t kGridHeaderBytes = 48;
// TAWS: "TAWS", u32 version = 1, u64 n_times, u64 n_det, f64 dt, then n_det
// pairs of f64 (x, y), then n_times*n_det f64 values time-major.
inline constexpr std::size_t kTraceHeaderBytes = 32;

std::string encode_grid(const ScalarField& field);
ScalarField decode_grid(std::string_view bytes);
std::string encode_trace(const BoundaryTrace& trace);
/// Detector nodes are left empty; call BoundaryTrace::bind on the target grid.
BoundaryTrace decode_trace(std::string_view bytes);

void write_grid(const std::filesystem::path& path, const ScalarField& field);
ScalarField read_grid(const std::filesystem::path& path);
void write_trace(const std::filesystem::path& path, const BoundaryTrace& trace);
BoundaryTrace read_trace(const std::filesystem::path& path);

/// Linear map of [lo, hi] (default: field min/max) onto 0..65535, rounded to
/// nearest and clamped; values in storage order.
std::vector<std::uint16_t> pgm_pixels(const ScalarField& field, std::optional<std::pair<double, double>> range = {});

/// Binary 16-bit PGM (P5), row j = 0 first. Throws ConfigError when lo == hi.
void emit_pgm(const ScalarField& field, const std::filesystem::path& path,
              std::optional<std::pair<double, double>> range = {});

std::string read_file(const std::filesystem::path& path);
/// Writes to a temporary sibling and renames it over `path`.
void write_file_atomic(const std::filesystem::path& path, std::string_view bytes);

}  // namespace thermotomo::io
