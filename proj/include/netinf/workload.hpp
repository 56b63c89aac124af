#pragma once

#include <cstdint>

#include "netinf/scenario.hpp"

namespace netinf {

/// Synthetic scenario shape. `nodes` counts routers and access nodes; hosts
/// and objects come on top. Objects are published at tick 0, round-robin over
/// hosts, so every host carries objects/hosts of them.
struct WorkloadParams {
  std::size_t nodes = 60;
  std::size_t hosts = 40;
  std::size_t objects = 100;
  std::size_t events = 200;
  double move_prob = 0.5;
  double get_prob = 0.4;  // the remainder toggles host multihoming
  std::size_t nesting_depth = 1;
  double multihome_prob = 0.0;
  std::size_t resolvers = 16;
  std::size_t cache_capacity = 4;
  std::size_t events_per_tick = 4;
};

/// Reproducible for a given (params, seed): the same scenario text every time.
Scenario generate_workload(const WorkloadParams& params, std::uint64_t seed);

}  // namespace netinf
