#pragma once

#include <span>
#include <string>
#include <vector>

#include "gfdeconv/estimators.hpp"
#include "gfdeconv/generalized.hpp"
#include "gfdeconv/grid.hpp"

namespace gfd {

/// Dataset CSV: header `x,y,z,xstar,u,ux,uy`, one row per sample, values
/// printed with full round-trip precision so write/read is bitwise exact.
void write_samples_csv(const std::string& path, std::span<const ModelSample> data);
std::vector<ModelSample> read_samples_csv(const std::string& path);

/// One-dimensional gridded function as CSV rows `node,re,im`.
void write_gridded_csv(const std::string& path, const GriddedFunction& f);

/// Generalized function as JSON: a versioned schema field, the grid
/// {L, N, dim}, the regular part as parallel re/im arrays (or null), and
/// the atom list. Round trips bitwise.
void write_gf_json(const std::string& path, const GeneralizedFunction& b);
GeneralizedFunction read_gf_json(const std::string& path);

std::string gf_to_json_text(const GeneralizedFunction& b);
GeneralizedFunction gf_from_json_text(const std::string& text);

}  // namespace gfd
