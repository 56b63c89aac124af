#include "netinf/simulator.hpp"

#include <sstream>

#include "netinf/error.hpp"

namespace netinf {

namespace {

void write_row(std::ostream& out, std::string_view tick, const Counters& c) {
  out << tick << ',' << c.ar_writes << ',' << c.dht_writes << ',' << c.dht_reads << ',' << c.ar_queries << ','
      << c.gets_attempted << ',' << c.gets_delivered << ',' << c.retries << ',' << c.total_data_hops << ','
      << c.stretch_samples << ',' << c.stretch_actual_sum << ',' << c.stretch_oracle_sum << ',' << c.stretch_exact
      << ',' << c.cache_hits << ',' << c.cache_misses << '\n';
}

bool is_get_failure(Errc code) {
  switch (code) {
    case Errc::NameNotFound:
    case Errc::Detached:
    case Errc::Unreachable:
    case Errc::NoCandidates:
    case Errc::VerificationFailed:
    case Errc::StaleRoute: return true;
    default: return false;
  }
}

}  // namespace

std::string to_csv(const MetricsReport& report, bool per_tick) {
  std::ostringstream out;
  out << kMetricsHeader << '\n';
  if (per_tick) {
    for (const auto& t : report.ticks) write_row(out, std::to_string(t.tick), t.counters);
  }
  write_row(out, "total", report.total);
  return out.str();
}

Simulator::Simulator(const Scenario& scenario, std::uint64_t seed, RunOptions options)
    : scenario_(scenario), options_(options), rng_(seed) {
  NetInfConfig config;
  config.system = options.system;
  config.resolvers = scenario.resolvers.value_or(kDefaultResolvers);
  config.cache_capacity = scenario.cache_capacity.value_or(kDefaultCacheCapacity);
  net_ = std::make_unique<NetInf>(config);
  for (const auto& decl : scenario.declarations) {
    try {
      std::visit([&](const auto& c) { net_->apply(c, 0); }, decl);
    } catch (const Error& e) {
      throw Error(Errc::ScenarioError, std::string("declaration: ") + e.what());
    }
  }
  net_->end_tick();
  baseline_ = net_->counters();
  tick_start_ = baseline_;
}

void Simulator::close_tick() {
  if (!current_tick_) return;
  net_->end_tick();
  ticks_.push_back(TickMetrics{*current_tick_, net_->counters() - tick_start_});
  tick_start_ = net_->counters();
}

void Simulator::apply(const TimedEvent& event) {
  std::visit(
      [&](const auto& a) {
        using T = std::decay_t<decltype(a)>;
        if constexpr (std::is_same_v<T, action::Publish>) {
          net_->publish(InformationObject{a.name, a.payload, {}}, a.host, event.tick);
        } else if constexpr (std::is_same_v<T, action::Get>) {
          try {
            net_->get(a.name, a.host, event.tick);
          } catch (const Error& e) {
            if (!is_get_failure(e.code())) throw;
          }
        } else {
          net_->apply(a, event.tick);
        }
      },
      event.action);
}

void Simulator::step() {
  if (done()) return;
  const TimedEvent& event = scenario_.events[next_++];
  if (current_tick_ && event.tick != *current_tick_) close_tick();
  current_tick_ = event.tick;

  try {
    apply(event);
  } catch (const Error& e) {
    if (e.code() == Errc::InvariantViolation) throw;
    std::string where = "tick " + std::to_string(event.tick);
    if (event.line) where += " (line " + std::to_string(event.line) + ")";
    throw Error(Errc::ScenarioError, where + " '" + format_action(event.action) + "': " + e.what());
  }

  bool check = options_.validate;
  if (options_.spot_check_fraction > 0.0) {
    double u = static_cast<double>(rng_() >> 11) * 0x1.0p-53;
    check |= u < options_.spot_check_fraction;
  }
  if (check) {
    net_->check_invariants(rng_);
    ++checks_;
  }
}

MetricsReport Simulator::finish() {
  while (!done()) step();
  close_tick();
  current_tick_.reset();
  MetricsReport report;
  report.ticks = ticks_;
  report.total = counters();
  report.invariant_checks = checks_;
  return report;
}

MetricsReport run(const Scenario& scenario, std::uint64_t seed, RunOptions options) {
  Simulator sim(scenario, seed, options);
  return sim.finish();
}

}  // namespace netinf
