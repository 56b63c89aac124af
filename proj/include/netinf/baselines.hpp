#pragma once

// Comparison systems.
//
// FlatDhtResolver stores complete locators in the DHT, so every topology
// change must rewrite the entry of each object below the changed entity.
// Rewrites are queued and become visible on flush(), which the simulator
// calls at the end of every tick.
//
// AnchorTable models nested mobile networks with fixed home anchors: data
// to an object detours through the anchor edge router of every anchored
// access node above it, innermost first.

#include <cstdint>
#include <map>
#include <optional>
#include <unordered_map>
#include <vector>

#include "netinf/llc.hpp"
#include "netinf/naming.hpp"
#include "netinf/resolution.hpp"
#include "netinf/topology.hpp"

namespace netinf {

class FlatDhtResolver {
 public:
  explicit FlatDhtResolver(std::size_t resolver_count) : resolver_count_(resolver_count) {}

  /// Registers `object` (an object entity) as a copy of `name` and stores its
  /// current locators. One DHT write.
  void publish(const AttachmentGraph& graph, const ObjectName& name, EntityIndex object);
  /// One DHT write. Pending rewrites for the object are dropped.
  void unpublish(const ObjectName& name, EntityIndex object);

  /// Queues one rewrite per registered object in the subtree of each changed
  /// entity. Returns the number of writes issued.
  std::size_t on_topology_change(const AttachmentGraph& graph, const ChangeSet& changes);
  void flush();
  std::size_t pending() const noexcept { return pending_.size(); }

  /// Stored locators of every copy, verbatim (possibly stale).
  /// Throws Error(NameNotFound) or Error(Detached).
  LocatorSet resolve(const ObjectName& name) const;

  std::uint64_t write_count() const noexcept { return writes_; }
  bool is_registered(EntityIndex object) const { return registered_.contains(object); }

  template <class F>
  void for_each_entry(F&& f) const {
    for (const auto& [name, copies] : entries_)
      for (const auto& [object, locators] : copies) f(name, object, locators);
  }

 private:
  struct Rewrite {
    EntityIndex object;
    std::vector<LocatorPath> locators;
  };

  static std::vector<LocatorPath> current_locators(const AttachmentGraph& graph, EntityIndex object);

  std::size_t resolver_count_;
  std::map<ObjectName, std::map<EntityIndex, std::vector<LocatorPath>>> entries_;
  std::unordered_map<EntityIndex, ObjectName> registered_;
  std::vector<Rewrite> pending_;
  std::uint64_t writes_ = 0;
};

class AnchorTable {
 public:
  void assign(EntityIndex access_node, EntityIndex anchor_edge) { anchors_[access_node] = anchor_edge; }
  std::optional<EntityIndex> anchor(EntityIndex access_node) const;

  /// Anchors every unanchored access node that currently reaches an edge
  /// router at the edge of its shortest (then lexicographically smallest)
  /// upward chain.
  void assign_home_anchors(const AttachmentGraph& graph);

  std::size_t size() const noexcept { return anchors_.size(); }

 private:
  std::map<EntityIndex, EntityIndex> anchors_;
};

/// Route whose core leg visits, in order, the source edge, the anchors of the
/// anchored access nodes in `dest_leg` (innermost first) and the destination
/// edge. With no anchors off the direct path this equals the LLC route.
Route anchor_route(CoreRoutes& routes, const AnchorTable& anchors, LocatorPath source_leg, LocatorPath dest_leg);

}  // namespace netinf
