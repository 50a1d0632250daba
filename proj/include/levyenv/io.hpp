#pragma once

#include <iosfwd>
#include <string>

#include <json.hpp>

#include "levyenv/conditioned.hpp"
#include "levyenv/diffusion.hpp"
#include "levyenv/path_core.hpp"
#include "levyenv/valley.hpp"

namespace levyenv::io {

/// Shortest text that reads back to the same double.
std::string format_double(double v);

/// `x,value`, one row per grid point in ascending x.
void write_path_csv(std::ostream& os, const GridPath& path, const std::string& value_column = "value");
/// Parses what write_path_csv produced; the origin is the row with x == 0.
GridPath read_path_csv(std::istream& is);

void write_profile_csv(std::ostream& os, const ProfileWeights& weights);
void write_local_time_csv(std::ostream& os, const LocalTimeProfile& profile);

nlohmann::json to_json(const Valley& v);
nlohmann::json to_json(const ConditionedPath& p);  ///< sidecar: law_tag, construction
nlohmann::json to_json(const DiffusionRun& run);    ///< summary only

}  // namespace levyenv::io
