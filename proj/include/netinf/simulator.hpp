#pragma once

// Deterministic event loop over a parsed scenario. Events run in tick order
// (file order within a tick); queued baseline updates are flushed at every
// tick boundary. Metrics cover the event phase only, not the declarations.

#include <cstdint>
#include <memory>
#include <optional>
#include <random>
#include <string>
#include <string_view>
#include <vector>

#include "netinf/content.hpp"
#include "netinf/scenario.hpp"

namespace netinf {

inline constexpr std::size_t kDefaultResolvers = 16;
inline constexpr std::size_t kDefaultCacheCapacity = 4;

inline constexpr std::string_view kMetricsHeader =
    "tick,ar_writes,dht_writes,dht_reads,ar_queries,gets_attempted,gets_delivered,retries,"
    "total_data_hops,stretch_samples,stretch_actual_sum,stretch_oracle_sum,stretch_exact,"
    "cache_hits,cache_misses";

struct RunOptions {
  System system = System::Llc;
  bool validate = false;             // full invariant sweep after every event
  double spot_check_fraction = 0.0;  // sweep after this fraction of events
};

struct TickMetrics {
  std::int64_t tick = 0;
  Counters counters;
};

struct MetricsReport {
  std::vector<TickMetrics> ticks;
  Counters total;
  std::uint64_t invariant_checks = 0;
};

/// Header, optional per-tick rows, then one "total" row.
std::string to_csv(const MetricsReport& report, bool per_tick);

class Simulator {
 public:
  /// Applies the declarations. Throws Error(ScenarioError) on invalid ones.
  Simulator(const Scenario& scenario, std::uint64_t seed, RunOptions options = {});

  bool done() const noexcept { return next_ >= scenario_.events.size(); }
  const TimedEvent* peek() const { return done() ? nullptr : &scenario_.events[next_]; }

  /// Applies one event. Failed gets are counted, not thrown; any other event
  /// error aborts with Error(ScenarioError) naming the tick and directive.
  void step();

  /// Runs the remaining events and closes the last tick.
  MetricsReport finish();

  /// Counters accumulated since the declarations were applied.
  Counters counters() const { return net_->counters() - baseline_; }
  NetInf& net() noexcept { return *net_; }
  const NetInf& net() const noexcept { return *net_; }
  std::uint64_t invariant_checks() const noexcept { return checks_; }

 private:
  void close_tick();
  void apply(const TimedEvent& event);

  const Scenario& scenario_;
  RunOptions options_;
  std::mt19937_64 rng_;
  std::unique_ptr<NetInf> net_;
  Counters baseline_;
  Counters tick_start_;
  std::optional<std::int64_t> current_tick_;
  std::vector<TickMetrics> ticks_;
  std::size_t next_ = 0;
  std::uint64_t checks_ = 0;
};

MetricsReport run(const Scenario& scenario, std::uint64_t seed, RunOptions options = {});

}  // namespace netinf
