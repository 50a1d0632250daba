#include "levyenv/io.hpp"

#include <charconv>
#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>

#include "levyenv/errors.hpp"

namespace levyenv::io {

std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

void write_path_csv(std::ostream& os, const GridPath& path, const std::string& value_column) {
  os << "x," << value_column << '\n';
  for (GridPoint i = path.min_point(); i <= path.max_point(); ++i) {
    os << format_double(path.x_of(i)) << ',' << format_double(path.at(i)) << '\n';
  }
}

GridPath read_path_csv(std::istream& is) {
  std::string line;
  if (!std::getline(is, line) || line.rfind("x,", 0) != 0) {
    throw ParameterError("path CSV must start with an x,<column> header");
  }
  std::vector<double> xs;
  std::vector<double> vs;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    const auto comma = line.find(',');
    if (comma == std::string::npos) throw ParameterError("malformed CSV row: " + line);
    xs.push_back(std::stod(line.substr(0, comma)));
    vs.push_back(std::stod(line.substr(comma + 1)));
  }
  if (xs.size() < 2) throw ParameterError("path CSV needs at least two rows");
  const double h = xs[1] - xs[0];
  std::size_t origin = 0;
  double best = std::abs(xs[0]);
  for (std::size_t i = 1; i < xs.size(); ++i) {
    if (std::abs(xs[i]) < best) {
      best = std::abs(xs[i]);
      origin = i;
    }
  }
  return GridPath(std::move(vs), h, origin);
}

void write_profile_csv(std::ostream& os, const ProfileWeights& weights) {
  os << "x,density\n";
  for (std::size_t k = 0; k < weights.log_weights.size(); ++k) {
    os << format_double(weights.x_of(k)) << ',' << format_double(weights.density(k)) << '\n';
  }
}

void write_local_time_csv(std::ostream& os, const LocalTimeProfile& profile) {
  write_path_csv(os, profile.grid, "local_time");
}

nlohmann::json to_json(const Valley& v) {
  const auto x = [&](std::optional<GridPoint> p) -> nlohmann::json {
    if (!p) return nullptr;
    return static_cast<double>(*p) * v.step_h;
  };
  return {{"c", v.height_c},
          {"p", x(v.p)},
          {"m", static_cast<double>(v.m) * v.step_h},
          {"q", x(v.q)},
          {"side", v.side == ValleySide::Plus ? "PLUS" : "MINUS"},
          {"J_plus", v.J_plus},
          {"J_minus", v.J_minus},
          {"boundary_extended", v.boundary_extended}};
}

nlohmann::json to_json(const ConditionedPath& p) {
  return {{"law_tag", std::string(to_string(p.law))},
          {"construction", std::string(to_string(p.construction))}};
}

nlohmann::json to_json(const DiffusionRun& run) {
  return {{"engine", std::string(to_string(run.engine))},
          {"t", run.horizon_t},
          {"steps_or_jumps", run.steps},
          {"window_extensions", run.window_extensions}};
}

}  // namespace levyenv::io
