#include <doctest.h>

#include <algorithm>
#include <functional>
#include <random>

#include "netinf/topology.hpp"
#include "test_util.hpp"

using namespace netinf;
using namespace netinf::test;

namespace {

// e1 -- c1 -- e2, n1/n2 under e1, n3 under e2, h1 on n1.
AttachmentGraph small_graph() {
  AttachmentGraph g;
  add(g, EntityKind::CoreRouter, "c1");
  add(g, EntityKind::EdgeRouter, "e1");
  add(g, EntityKind::EdgeRouter, "e2");
  link(g, "e1", "c1");
  link(g, "c1", "e2");
  for (auto n : {"n1", "n2", "n3"}) add(g, EntityKind::AccessNode, n);
  attach(g, "n1", "e1");
  attach(g, "n2", "e1");
  attach(g, "n3", "e2");
  add(g, EntityKind::Host, "h1");
  return g;
}

}  // namespace

TEST_CASE("attach and move change sets") {
  auto g = small_graph();
  auto cs = attach(g, "h1", "n1");
  CHECK(ids(g, cs.entities) == std::vector<std::string>{"h1"});

  SUBCASE("move touches only the host, whatever it carries") {
    for (int k : {0, 1, 10, 100}) {
      auto g2 = g;
      for (int i = 0; i < k; ++i) {
        auto o = "o" + std::to_string(i);
        add(g2, EntityKind::Object, o);
        attach(g2, o, "h1");
      }
      auto mv = g2.apply(change::Move{"h1", "n1", "n2"});
      CHECK(mv.size() == 1);
      CHECK(ids(g2, mv.entities) == std::vector<std::string>{"h1"});
      CHECK(ids(parents(g2, "h1")) == std::vector<std::string>{"n2"});
    }
  }

  SUBCASE("object directly on an access node is illegal") {
    add(g, EntityKind::Object, "o1");
    CHECK(code_of([&] { attach(g, "o1", "n1"); }) == Errc::IllegalAttachment);
  }
}

TEST_CASE("parents") {
  auto g = small_graph();
  CHECK(parents(g, "h1").empty());
  attach(g, "h1", "n2");
  attach(g, "h1", "n1");
  CHECK(ids(parents(g, "h1")) == std::vector<std::string>{"n1", "n2"});
  g.apply(change::Move{"h1", "n1", "n3"});
  CHECK(ids(parents(g, "h1")) == std::vector<std::string>{"n2", "n3"});
  CHECK(code_of([&] { parents(g, "nope"); }) == Errc::UnknownEntity);
}

TEST_CASE("apply_event errors leave the graph untouched") {
  auto g = small_graph();
  attach(g, "h1", "n1");
  add(g, EntityKind::AccessNode, "m1");
  add(g, EntityKind::AccessNode, "m2");
  attach(g, "m1", "m2");
  const auto before = g;

  CHECK(code_of([&] { add(g, EntityKind::Host, "h1"); }) == Errc::DuplicateEntity);
  CHECK(code_of([&] { attach(g, "h1", "ghost"); }) == Errc::UnknownEntity);
  CHECK(code_of([&] { attach(g, "h1", "e1"); }) == Errc::IllegalAttachment);
  CHECK(code_of([&] { attach(g, "h1", "n1"); }) == Errc::IllegalAttachment);
  CHECK(code_of([&] { attach(g, "m2", "m1"); }) == Errc::CycleDetected);
  CHECK(code_of([&] { g.apply(change::Detach{"h1", "n2"}); }) == Errc::NotAttached);
  CHECK(code_of([&] { g.apply(change::Move{"h1", "n2", "n3"}); }) == Errc::NotAttached);
  CHECK(code_of([&] { g.apply(change::Move{"m2", "e1", "m1"}); }) == Errc::NotAttached);
  CHECK(code_of([&] { link(g, "e1", "n1"); }) == Errc::IllegalAttachment);
  CHECK(code_of([&] { link(g, "e1", "c1"); }) == Errc::IllegalAttachment);
  CHECK(g == before);
  CHECK(g.version() == before.version());
}

TEST_CASE("core_route") {
  auto g = small_graph();
  CHECK(ids(core_route(g, "e1", "e1")) == std::vector<std::string>{"e1"});
  CHECK(ids(core_route(g, "e1", "e2")) == std::vector<std::string>{"e1", "c1", "e2"});

  SUBCASE("diamond tie goes to the lexicographically smaller sequence") {
    AttachmentGraph d;
    add(d, EntityKind::EdgeRouter, "ea");
    add(d, EntityKind::EdgeRouter, "ez");
    add(d, EntityKind::CoreRouter, "cy");
    add(d, EntityKind::CoreRouter, "cb");
    link(d, "ea", "cy");
    link(d, "ea", "cb");
    link(d, "cy", "ez");
    link(d, "cb", "ez");

    // Brute force: enumerate every simple path, keep the shortest, take the min.
    std::vector<std::vector<std::string>> paths;
    std::function<void(std::vector<EntityIndex>&)> dfs = [&](std::vector<EntityIndex>& p) {
      if (d.entity(p.back()).id == "ez") {
        paths.push_back(ids(d, p));
        return;
      }
      for (auto n : d.core_neighbors(p.back())) {
        if (std::find(p.begin(), p.end(), n) != p.end()) continue;
        p.push_back(n);
        dfs(p);
        p.pop_back();
      }
    };
    std::vector<EntityIndex> start{d.require("ea")};
    dfs(start);
    REQUIRE(paths.size() == 2);
    CHECK(paths[0].size() == paths[1].size());
    auto expected = *std::min_element(paths.begin(), paths.end());
    CHECK(expected == std::vector<std::string>{"ea", "cb", "ez"});
    CHECK(ids(core_route(d, "ea", "ez")) == expected);
  }

  SUBCASE("unreachable") {
    add(g, EntityKind::EdgeRouter, "e9");
    CHECK(code_of([&] { core_route(g, "e1", "e9"); }) == Errc::Unreachable);
  }
}

TEST_CASE("oracle_shortest_hops basics") {
  auto g = small_graph();
  attach(g, "h1", "n1");
  add(g, EntityKind::Object, "o1");
  attach(g, "o1", "h1");
  CHECK(oracle_shortest_hops(g, "o1", "o1") == 0);
  CHECK(oracle_shortest_hops(g, "o1", "e1") == 3);
  CHECK(oracle_shortest_hops(g, "o1", "n3") == 6);
  add(g, EntityKind::Host, "lonely");
  CHECK(code_of([&] { oracle_shortest_hops(g, "o1", "lonely"); }) == Errc::Unreachable);
}

namespace {

// Random graph with every kind present; returns the graph.
AttachmentGraph random_graph(std::mt19937_64& rng, int n) {
  AttachmentGraph g;
  std::vector<std::string> routers, edges, access, hosts;
  for (int i = 0; i < n; ++i) {
    int r = static_cast<int>(rng() % 10);
    std::string id = "x" + std::to_string(i);
    if (r < 1) {
      add(g, EntityKind::CoreRouter, id);
      routers.push_back(id);
    } else if (r < 3) {
      add(g, EntityKind::EdgeRouter, id);
      routers.push_back(id);
      edges.push_back(id);
    } else if (r < 6) {
      add(g, EntityKind::AccessNode, id);
      access.push_back(id);
    } else if (r < 9) {
      add(g, EntityKind::Host, id);
      hosts.push_back(id);
    } else {
      add(g, EntityKind::Object, id);
      if (!hosts.empty()) attach(g, id, hosts[rng() % hosts.size()]);
    }
  }
  for (int k = 0; k < n; ++k) {
    if (routers.size() < 2) break;
    auto a = routers[rng() % routers.size()], b = routers[rng() % routers.size()];
    try {
      link(g, a, b);
    } catch (const Error&) {
    }
  }
  for (const auto& a : access) {
    for (int t = 0; t < 2; ++t) {
      std::vector<std::string> pool = edges;
      pool.insert(pool.end(), access.begin(), access.end());
      if (pool.empty()) break;
      try {
        attach(g, a, pool[rng() % pool.size()]);
      } catch (const Error&) {
      }
    }
  }
  for (const auto& h : hosts) {
    if (access.empty()) break;
    for (int t = 0; t < 1 + static_cast<int>(rng() % 2); ++t) {
      try {
        attach(g, h, access[rng() % access.size()]);
      } catch (const Error&) {
      }
    }
  }
  return g;
}

}  // namespace

TEST_CASE("oracle_shortest_hops agrees with Floyd-Warshall on random graphs") {
  std::mt19937_64 rng(2024);
  for (int round = 0; round < 5; ++round) {
    auto g = random_graph(rng, 50);
    g.validate();
    const auto n = g.size();
    constexpr int kInf = 1 << 20;
    std::vector<std::vector<int>> d(n, std::vector<int>(n, kInf));
    for (EntityIndex i = 0; i < n; ++i) {
      d[i][i] = 0;
      for (auto p : g.parents(i)) d[i][p] = d[p][i] = 1;
      for (auto c : g.core_neighbors(i)) d[i][c] = 1;
    }
    for (std::size_t k = 0; k < n; ++k)
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) d[i][j] = std::min(d[i][j], d[i][k] + d[k][j]);

    for (int s = 0; s < 100; ++s) {
      auto a = static_cast<EntityIndex>(rng() % n), b = static_cast<EntityIndex>(rng() % n);
      if (d[a][b] >= kInf) {
        CHECK(code_of([&] { oracle_shortest_hops(g, a, b); }) == Errc::Unreachable);
      } else {
        CHECK(oracle_shortest_hops(g, a, b) == d[a][b]);
      }
    }
  }
}

TEST_CASE("random event sequences keep invariants; failures are side-effect free") {
  std::mt19937_64 rng(99);
  auto g = random_graph(rng, 60);
  std::vector<std::string> all;
  for (EntityIndex i = 0; i < g.size(); ++i) all.push_back(g.entity(i).id);
  int failures = 0, successes = 0;
  for (int step = 0; step < 3000; ++step) {
    const auto& a = all[rng() % all.size()];
    const auto& b = all[rng() % all.size()];
    const auto& c = all[rng() % all.size()];
    TopologyChange ch;
    switch (rng() % 3) {
      case 0: ch = change::Attach{a, b}; break;
      case 1: ch = change::Detach{a, b}; break;
      default: ch = change::Move{a, b, c}; break;
    }
    auto snapshot = g;
    try {
      auto cs = g.apply(ch);
      CHECK(g.version() == snapshot.version() + 1);
      CHECK(cs.size() == 1);
      ++successes;
    } catch (const Error&) {
      CHECK(g == snapshot);
      ++failures;
    }
    g.validate();
  }
  CHECK(successes > 50);
  CHECK(failures > 50);
}

TEST_CASE("up_chains and subtree") {
  auto g = small_graph();
  attach(g, "h1", "n1");
  attach(g, "h1", "n3");
  add(g, EntityKind::Object, "o1");
  attach(g, "o1", "h1");
  auto chains = up_chains(g, g.require("o1"));
  REQUIRE(chains.size() == 2);
  CHECK(ids(g, chains[0]) == std::vector<std::string>{"o1", "h1", "n1", "e1"});
  CHECK(ids(g, chains[1]) == std::vector<std::string>{"o1", "h1", "n3", "e2"});
  CHECK(reaches_edge(g, g.require("o1")));
  CHECK(ids(g, subtree(g, g.require("n1"))) == std::vector<std::string>{"n1", "h1", "o1"});

  g.apply(change::Detach{"h1", "n1"});
  g.apply(change::Detach{"h1", "n3"});
  CHECK(up_chains(g, g.require("o1")).empty());
  CHECK_FALSE(reaches_edge(g, g.require("o1")));
}
