#pragma once

// Case-study configurations: member geometry/material, load grids and DoF lists.

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "prb/beam.hpp"
#include "prb/fitter.hpp"

namespace prb {

struct Preset {
  std::string name;
  int version = 1;
  BeamSpec spec;
  LoadGridSpec grid;          // full case count
  LoadGridSpec reduced_grid;  // desk-scale grid for quick runs
  std::vector<std::size_t> dofs;
  std::vector<double> sweep_lengths;  // mm, variable-length study only
  std::size_t sweep_resolution = 12;
  std::string notes;

  // Digest of the member spec, the grid and the preset version.
  std::string digest() const;
};

// E = 350 MPa, I = 4.91e-2 mm^4.
double catheter_flexural_rigidity();
// E = 71 GPa, I = pi (d_o^4 - d_i^4) / 64 with d_i = 0.203 mm, d_o = 0.406 mm.
double ctr_inner_flexural_rigidity();

const std::vector<std::string>& preset_names();

// Throws InvalidInput for unknown names.
Preset find_preset(std::string_view name);

}  // namespace prb
