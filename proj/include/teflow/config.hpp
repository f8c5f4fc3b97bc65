#pragma once

// Run configuration shared by the pipeline and the per-stage commands.

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "teflow/discretize.hpp"
#include "teflow/error.hpp"
#include "teflow/flows.hpp"
#include "teflow/surrogate.hpp"

namespace teflow {

struct RunConfig {
  std::string manifest;
  std::string calendar;
  std::string groups;
  std::string out = "out";
  double bin_width = 0.1;
  BinMode bin_mode = BinMode::Global;
  int k = 1;
  int l = 1;
  std::size_t surrogates = kDefaultSurrogates;
  std::size_t noise_sims = kDefaultNoiseSims;
  std::uint64_t seed = 0;
  std::vector<double> thresholds{0.05, 0.1, 0.2, 0.3, 0.4};
  double distance_threshold = 1.2;
  std::size_t top = kDefaultTopK;
  std::size_t max_lag = 1;
  std::size_t dims = 2;
  unsigned threads = 0;

  bool operator==(const RunConfig&) const = default;

  /// Throws InvalidArgument naming the first bad field.
  void validate() const {
    require(std::isfinite(bin_width) && bin_width > 0.0, ErrorCode::InvalidArgument, "bin-width must be positive");
    require(k >= 1 && k <= 4, ErrorCode::InvalidArgument, "k must lie in 1..4");
    require(l >= 1 && l <= 4, ErrorCode::InvalidArgument, "l must lie in 1..4");
    require(surrogates >= 1, ErrorCode::InvalidArgument, "surrogates must be at least 1");
    require(noise_sims >= 1, ErrorCode::InvalidArgument, "noise-sims must be at least 1");
    require(!thresholds.empty(), ErrorCode::InvalidArgument, "at least one threshold is required");
    for (double t : thresholds) require(std::isfinite(t), ErrorCode::InvalidArgument, "thresholds must be finite");
    require(std::isfinite(distance_threshold), ErrorCode::InvalidArgument, "distance-threshold must be finite");
    require(top >= 1, ErrorCode::InvalidArgument, "top must be at least 1");
    require(max_lag >= 1, ErrorCode::InvalidArgument, "max-lag must be at least 1");
    require(dims >= 1 && dims <= 3, ErrorCode::InvalidArgument, "dims must lie in 1..3");
  }
};

inline nlohmann::ordered_json to_json(const RunConfig& c) {
  return {{"manifest", c.manifest},
          {"calendar", c.calendar},
          {"groups", c.groups},
          {"out", c.out},
          {"bin_width", c.bin_width},
          {"bin_mode", to_string(c.bin_mode)},
          {"k", c.k},
          {"l", c.l},
          {"surrogates", c.surrogates},
          {"noise_sims", c.noise_sims},
          {"seed", c.seed},
          {"thresholds", c.thresholds},
          {"distance_threshold", c.distance_threshold},
          {"top", c.top},
          {"max_lag", c.max_lag},
          {"dims", c.dims},
          {"threads", c.threads}};
}

/// Missing keys keep their defaults; unknown keys are rejected.
inline RunConfig config_from_json(const nlohmann::ordered_json& j) {
  RunConfig c;
  require(j.is_object(), ErrorCode::ParseError, "config must be a JSON object");
  const auto keys = to_json(c);
  for (const auto& [key, value] : j.items())
    require(keys.contains(key), ErrorCode::ParseError, "unknown config key '" + key + "'");
  try {
    auto get = [&](const char* key, auto& field) {
      if (j.contains(key)) field = j.at(key).get<std::decay_t<decltype(field)>>();
    };
    get("manifest", c.manifest);
    get("calendar", c.calendar);
    get("groups", c.groups);
    get("out", c.out);
    get("bin_width", c.bin_width);
    if (j.contains("bin_mode")) c.bin_mode = parse_bin_mode(j.at("bin_mode").get<std::string>());
    get("k", c.k);
    get("l", c.l);
    get("surrogates", c.surrogates);
    get("noise_sims", c.noise_sims);
    get("seed", c.seed);
    get("thresholds", c.thresholds);
    get("distance_threshold", c.distance_threshold);
    get("top", c.top);
    get("max_lag", c.max_lag);
    get("dims", c.dims);
    get("threads", c.threads);
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorCode::ParseError, std::string("bad config value: ") + e.what());
  }
  return c;
}

}  // namespace teflow
