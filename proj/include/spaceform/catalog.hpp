#pragma once

// Named constructions of hypersurfaces in the three constant-curvature
// ambients, each bundled with the closed-form data and claims its geometry
// supports. Instantiation validates parameter ranges and raises InputError
// with the accepted range on violation.

#include <map>
#include <string>
#include <vector>

#include "spaceform/residuals.hpp"

namespace spaceform {

struct CatalogEntry {
  std::string id;
  std::string summary;
  // Parameter names with their default values, in display order.
  std::vector<std::pair<std::string, double>> defaults;
  // True when the default instantiation carries deliberately failing claims.
  bool negative_control = false;
};

const std::vector<CatalogEntry>& catalog();

// Builds the surface definition for `id`. Keys absent from `overrides` take
// their defaults; unknown keys raise InputError.
SurfaceDef instantiate(const std::string& id,
                       const std::map<std::string, double>& overrides);

}  // namespace spaceform
