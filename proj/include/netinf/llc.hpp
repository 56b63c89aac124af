#pragma once

// Late Locator Construction and three-leg object-to-object routing.
//
// A locator is an attachment chain written object-first, e.g. o1@h1@n1@e1.
// It is built on demand: the DHT yields the register address of each copy,
// then registers are walked upward until an edge router terminates every
// branch. The core leg between two edge routers uses plain shortest-path
// routing.

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "netinf/naming.hpp"
#include "netinf/registers.hpp"
#include "netinf/resolution.hpp"
#include "netinf/topology.hpp"

namespace netinf {

struct LocatorPath {
  std::vector<EntityId> chain;  // first: the located entity, last: an edge router
  std::uint64_t constructed_at_version = 0;

  std::string text() const;
  int hops() const noexcept { return static_cast<int>(chain.size()) - 1; }
  const EntityId& front() const { return chain.front(); }
  const EntityId& edge() const { return chain.back(); }

  /// Object first, edge router last, only permitted attachments in between.
  bool is_object_locator() const;

  /// Compares chains only; the construction version is metadata.
  friend bool operator==(const LocatorPath& a, const LocatorPath& b) { return a.chain == b.chain; }
};

/// Builds a locator from graph indices.
LocatorPath make_locator(const AttachmentGraph& graph, std::span<const EntityIndex> chain);

struct ConstructionTrace {
  int dht_hops = 0;
  int ar_queries = 0;
  int candidate_count = 0;
};

struct LocatorSet {
  std::vector<LocatorPath> locators;  // sorted by text
  ConstructionTrace trace;
};

/// Resolves `name` through the DHT, then walks registers upward from each
/// copy, branching breadth-first on multiple parents and stopping each
/// branch at the first edge router.
/// Throws Error(NameNotFound) or Error(Detached).
LocatorSet construct_locators(const ResolverRing& dht, const RegisterStore& registers, const ObjectName& name,
                              std::uint64_t graph_version = 0);

/// Lazily cached core-network distances; refreshed when the core changes.
class CoreRoutes {
 public:
  explicit CoreRoutes(const AttachmentGraph& graph) : graph_(&graph) {}

  /// -1 when unreachable.
  int distance(EntityIndex from, EntityIndex to);
  /// Throws Error(Unreachable).
  std::vector<EntityIndex> route(EntityIndex from, EntityIndex to);

  const AttachmentGraph& graph() const { return *graph_; }

 private:
  const std::vector<int>& table(EntityIndex from);

  const AttachmentGraph* graph_;
  std::uint64_t core_version_ = ~std::uint64_t{0};
  std::unordered_map<EntityIndex, std::vector<int>> tables_;
};

/// Anycast choice: minimise core distance from `requester_edge` plus the
/// candidate's chain length, ties broken by locator text.
/// Throws Error(NoCandidates) or Error(Unreachable).
LocatorPath select_locator(CoreRoutes& routes, std::span<const LocatorPath> candidates,
                           std::string_view requester_edge);

/// Cost select_locator minimises; -1 when the core cannot reach the candidate.
int locator_cost(CoreRoutes& routes, const LocatorPath& candidate, EntityIndex requester_edge);

struct Route {
  LocatorPath source_leg;          // source entity up to its edge
  std::vector<EntityId> core_leg;  // edge to edge, both inclusive
  LocatorPath dest_leg;            // stored object-first
  int total_hops = 0;
};

/// Assembles a route and fills total_hops.
Route make_route(LocatorPath source_leg, std::vector<EntityId> core_leg, LocatorPath dest_leg);

/// Picks the (source, destination) locator pair with the fewest total hops;
/// ties go to the smaller destination text, then the smaller source text.
/// Throws Error(NoCandidates) or Error(Unreachable).
Route best_route(CoreRoutes& routes, std::span<const LocatorPath> sources, std::span<const LocatorPath> dests);

/// Object-to-object routing over freshly constructed locators.
Route route_object_to_object(const ResolverRing& dht, const RegisterStore& registers, CoreRoutes& routes,
                             const ObjectName& src, const ObjectName& dst);

struct DeliveryResult {
  bool delivered = false;
  std::optional<EntityId> stale_at;  // first entity whose attachment or link is gone

  static DeliveryResult ok() { return {true, std::nullopt}; }
  static DeliveryResult stale(EntityId at) { return {false, std::move(at)}; }
};

/// Walks `route` hop by hop against the current graph: up the source leg,
/// along the core, down the destination leg.
DeliveryResult forward(const Route& route, const AttachmentGraph& graph);

}  // namespace netinf
