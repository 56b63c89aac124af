#include <doctest.h>

#include <random>

#include "netinf/error.hpp"
#include "netinf/scenario.hpp"
#include "netinf/simulator.hpp"
#include "netinf/workload.hpp"

using namespace netinf;

namespace {

std::string hex_of(const std::string& s) { return to_hex(Bytes(s.begin(), s.end())); }

std::string content_name(const std::string& s) { return format_name(derive_content_name(Bytes(s.begin(), s.end()))); }

// e1 with access n1, n2; h1 on n1, h2 on n2.
std::string five_entities() {
  return "# five entities\n"
         "edge e1\n"
         "access n1\naccess n2\n"
         "host h1\nhost h2\n"
         "attach n1 e1\nattach n2 e1\n"
         "attach h1 n1\nattach h2 n2\n"
         "at 1 publish h1 " +
         content_name("clip") + " " + hex_of("clip") +
         "\n"
         "at 2 get h2 " +
         content_name("clip") + "\n";
}

std::string error_of(const std::string& text) {
  try {
    parse_scenario(text);
  } catch (const Error& e) {
    CHECK(e.code() == Errc::ScenarioError);
    return e.what();
  }
  FAIL("expected a parse error");
  return {};
}

}  // namespace

TEST_CASE("parse_scenario: empty input") {
  auto s = parse_scenario("");
  CHECK(s.declarations.empty());
  CHECK(s.events.empty());
  auto report = run(s, 1);
  CHECK(report.ticks.empty());
  CHECK(report.total == Counters{});
  CHECK(to_csv(report, true) == std::string(kMetricsHeader) + "\ntotal,0,0,0,0,0,0,0,0,0,0,0,0,0,0\n");
}

TEST_CASE("parse_scenario: directives") {
  auto s = parse_scenario(
      "resolvers 4\ncachecap 0\ncore c\nedge e\ncorelink c e   # trailing comment\n\n"
      "access n\nhost h\nattach n e\nattach h n\n"
      "at 0 detach h n\nat 0 attach h n\nat 3 move n e e\n");
  CHECK(s.resolvers == 4u);
  CHECK(s.cache_capacity == 0u);
  CHECK(s.declarations.size() == 7);
  REQUIRE(s.events.size() == 3);
  CHECK(s.events[2].tick == 3);
  CHECK(s.events[2].line == 13);
  CHECK(std::holds_alternative<change::Move>(s.events[2].action));
}

TEST_CASE("parse_scenario: errors name the line") {
  CHECK(error_of("edge e1\nattach n9 e1\n").find("line 2") != std::string::npos);
  CHECK(error_of("edge e1\nat 1 get e1 " + content_name("x") + "\n").find("line 2") != std::string::npos);
  CHECK(error_of("host h\nat 2 get h " + content_name("x") + "\nat 1 get h " + content_name("x") + "\n")
            .find("line 3") != std::string::npos);
  CHECK(error_of("resolvers 0\n").find("line 1") != std::string::npos);
  CHECK(error_of("bogus x\n").find("line 1") != std::string::npos);
  CHECK(error_of("edge e1\nedge e1\n").find("line 2") != std::string::npos);
  CHECK(error_of("host h\nat 1 publish h ni:content:zz:data 00\n").find("line 2") != std::string::npos);
  CHECK(error_of("host h\nat 1 publish h " + content_name("x") + "\n").find("line 2") != std::string::npos);
  CHECK(error_of("edge a@b\n").find("line 1") != std::string::npos);
}

TEST_CASE("format_scenario round-trips") {
  auto s = parse_scenario(five_entities());
  auto again = parse_scenario(format_scenario(s));
  CHECK(equivalent(s, again));
  CHECK(format_scenario(again) == format_scenario(s));

  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    WorkloadParams p;
    p.nodes = 30;
    p.hosts = 10;
    p.objects = 20;
    p.events = 80;
    p.nesting_depth = seed % 3;
    p.multihome_prob = 0.3;
    auto g = generate_workload(p, seed);
    auto text = format_scenario(g);
    CHECK(equivalent(parse_scenario(text), g));
    CHECK(format_scenario(parse_scenario(text)) == text);
  }
}

TEST_CASE("run: five entities, adjacent hosts") {
  auto report = run(parse_scenario(five_entities()), 7);
  const auto& t = report.total;
  CHECK(t.gets_attempted == 1);
  CHECK(t.gets_delivered == 1);
  CHECK(t.stretch_samples == 1);
  CHECK(t.stretch_actual_sum == 5);
  CHECK(t.stretch_oracle_sum == 5);
  CHECK(t.stretch_exact == 1);
  CHECK(t.total_data_hops == 5);
  CHECK(t.cache_misses == 1);
  REQUIRE(report.ticks.size() == 2);
  CHECK(report.ticks[0].tick == 1);
  CHECK(report.ticks[1].counters.gets_delivered == 1);
}

TEST_CASE("run: identical inputs give identical CSV") {
  WorkloadParams p;
  p.multihome_prob = 0.2;
  auto s = generate_workload(p, 3);
  for (auto system : {System::Llc, System::FlatDht, System::Anchor}) {
    RunOptions o{system, false, 0.1};
    CHECK(to_csv(run(s, 5, o), true) == to_csv(run(s, 5, o), true));
  }
}

TEST_CASE("run: churn-only under LLC writes no DHT entries") {
  WorkloadParams p;
  p.move_prob = 1.0;
  p.get_prob = 0.0;
  p.nesting_depth = 2;
  auto s = generate_workload(p, 11);
  for (auto system : {System::Llc, System::FlatDht}) {
    Simulator sim(s, 1, RunOptions{system, true, 0.0});
    while (sim.peek() && sim.peek()->tick == 0) sim.step();  // publishes
    auto before = sim.counters();
    std::uint64_t changes = 0;
    while (!sim.done()) {
      auto cs_before = sim.net().graph().version();
      sim.step();
      changes += sim.net().graph().version() - cs_before;
    }
    auto churn = sim.finish().total - before;
    CAPTURE(to_string(system));
    if (system == System::Llc) {
      CHECK(churn.dht_writes == 0);
      CHECK(churn.ar_writes == p.events);
    } else {
      CHECK(churn.ar_writes == 0);
      CHECK(churn.dht_writes > 0);
    }
    CHECK(changes == p.events);
  }
}

TEST_CASE("run: a failing event aborts with tick and directive") {
  auto s = parse_scenario("edge e\naccess n\nhost h\nattach n e\nat 4 move h n n\n");
  try {
    run(s, 1);
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::ScenarioError);
    std::string what = e.what();
    CHECK(what.find("tick 4") != std::string::npos);
    CHECK(what.find("line 5") != std::string::npos);
    CHECK(what.find("move h n n") != std::string::npos);
  }
}

TEST_CASE("run: failed gets are counted, not thrown") {
  auto s = parse_scenario("edge e\naccess n\nhost h\nattach n e\nattach h n\nat 1 get h " + content_name("nope") + "\n");
  auto r = run(s, 1);
  CHECK(r.total.gets_attempted == 1);
  CHECK(r.total.gets_delivered == 0);
}

TEST_CASE("metrics invariants and conservation") {
  for (std::uint64_t seed = 1; seed <= 4; ++seed) {
    WorkloadParams p;
    p.multihome_prob = 0.3;
    p.nesting_depth = 2;
    auto s = generate_workload(p, seed);
    for (auto system : {System::Llc, System::FlatDht, System::Anchor}) {
      CAPTURE(seed);
      Simulator sim(s, seed, RunOptions{system, true, 0.0});
      std::uint64_t hops = 0;
      while (!sim.done()) {
        auto before = sim.counters();
        sim.step();
        auto d = sim.counters() - before;
        if (d.gets_delivered) hops += d.stretch_actual_sum;
        CHECK(d.stretch_actual_sum >= d.stretch_oracle_sum);
      }
      auto report = sim.finish();
      CHECK(report.total.gets_delivered <= report.total.gets_attempted);
      CHECK(report.total.total_data_hops == hops);
      CHECK(report.invariant_checks == s.events.size());
      Counters sum;
      for (const auto& t : report.ticks) sum += t.counters;
      CHECK(sum == report.total);
    }
  }
}

TEST_CASE("generate_workload") {
  WorkloadParams p;
  CHECK(format_scenario(generate_workload(p, 9)) == format_scenario(generate_workload(p, 9)));
  CHECK(format_scenario(generate_workload(p, 9)) != format_scenario(generate_workload(p, 10)));

  auto full = generate_workload(p, 9);
  CHECK(full.events.size() == p.objects + p.events);
  CHECK(full.resolvers == p.resolvers);

  p.events = 0;
  p.objects = 0;
  auto decl = generate_workload(p, 9);
  CHECK(decl.events.empty());
  CHECK_FALSE(decl.declarations.empty());

  p.resolvers = 0;
  CHECK_THROWS_AS(generate_workload(p, 1), std::invalid_argument);
}

TEST_CASE("replayability: generated text runs like the generated scenario") {
  WorkloadParams p;
  p.nesting_depth = 2;
  p.multihome_prob = 0.25;
  for (std::uint64_t seed = 20; seed < 23; ++seed) {
    auto g = generate_workload(p, seed);
    auto replay = parse_scenario(format_scenario(g));
    for (auto system : {System::Llc, System::FlatDht, System::Anchor}) {
      RunOptions o{system, false, 0.05};
      CHECK(to_csv(run(g, seed, o), true) == to_csv(run(replay, seed, o), true));
    }
  }
}
