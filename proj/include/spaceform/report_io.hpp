// Serialization of verification reports, catalog listings, profile-curve
// solutions, and chart samples. JSON output is deterministic (no timestamps,
// fixed key order) so repeated runs are byte-identical; files are written
// atomically via a temporary sibling plus rename.
#pragma once

#include <string>

#include "spaceform/catalog.hpp"
#include "spaceform/profile_ode.hpp"
#include "spaceform/residuals.hpp"

namespace spaceform {

std::string report_to_json(const SurfaceReport& rep);
std::string report_to_text(const SurfaceReport& rep);

std::string catalog_to_json();
std::string catalog_to_text();

// CSV of the profile solution: u, kappa, kappa_prime, drift, sigma1..sigma4.
std::string profile_to_csv(const ProfileSolution& sol);
// Summary of one profile integration (period, conserved-quantity drift, ...).
std::string profile_summary_json(const ProfileSolution& sol);

// CSV chart sample on the surface's own grid: chart coordinates, ambient
// position, and optionally mean curvature plus (m == 2) intrinsic curvature.
std::string chart_to_csv(const SurfaceDef& def, int counts_override,
                         bool with_scalars, double probe_h);

// Write atomically (temp file + rename); throws InputError on I/O failure.
void write_file_atomic(const std::string& path, const std::string& body);

}  // namespace spaceform
