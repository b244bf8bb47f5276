#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "rpde/controlled_path.hpp"
#include "rpde/rough_path.hpp"
#include "rpde/spectral.hpp"

namespace rpde::io {

/// Shortest round-trip decimal with 17 significant digits ("%.17g").
std::string format_double(double v);

/// Rough path text format:
///   # rpde-rough-path alpha=<a> [provenance ...]
///   t,x,x2_step
///   <t_i>,<x_i>,<x2_step_i>      (x2_step empty on the last row)
void write_rough_path(std::ostream& out, const RoughPath& X);
RoughPath read_rough_path(std::istream& in);
void save_rough_path(const std::filesystem::path& file, const RoughPath& X);
RoughPath load_rough_path(const std::filesystem::path& file);

/// Field text format:
///   dim,cutoff
///   <d>,<N>
///   k_1,...,k_d,re,im       (one row per multi-index)
void write_field(std::ostream& out, const SpectralField& u);
SpectralField read_field(std::istream& in);

/// Collocation snapshot `x_1,...,x_d,u` on M points per axis (real part).
void write_collocation_csv(std::ostream& out, const SpectralField& u, std::size_t points_per_axis);

/// `sup_y,sup_yp,hol_yp,hol_R,hol2_R,total`
void write_norm_header(std::ostream& out);
void write_norm_row(std::ostream& out, const GubNormBreakdown& b);

/// Writes `contents` to `file`; throws std::runtime_error on failure.
void write_text_file(const std::filesystem::path& file, const std::string& contents);

}  // namespace rpde::io
