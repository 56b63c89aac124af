#pragma once

// Ground-truth attachment graph: routers, access nodes, hosts and object
// entities, linked by upward attachments (child -> parent) plus an
// undirected core network between routers.

#include <compare>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <variant>
#include <vector>

namespace netinf {

enum class EntityKind : std::uint8_t { CoreRouter, EdgeRouter, AccessNode, Host, Object };

std::string_view to_string(EntityKind kind);

struct EntityId {
  EntityKind kind = EntityKind::Host;
  std::string id;

  friend bool operator==(const EntityId&, const EntityId&) = default;
  friend auto operator<=>(const EntityId& a, const EntityId& b) {
    if (auto c = a.id <=> b.id; c != 0) return c;
    return a.kind <=> b.kind;
  }
};

/// Ids must be non-empty and free of '@' and whitespace.
bool is_valid_entity_id(std::string_view id) noexcept;

/// True if `child` may hold an up-edge to `parent`.
bool attachment_allowed(EntityKind child, EntityKind parent) noexcept;

using EntityIndex = std::uint32_t;

namespace change {
struct AddEntity {
  EntityKind kind;
  std::string id;
  friend bool operator==(const AddEntity&, const AddEntity&) = default;
};
struct AddCoreLink {
  std::string a, b;
  friend bool operator==(const AddCoreLink&, const AddCoreLink&) = default;
};
struct Attach {
  std::string child, parent;
  friend bool operator==(const Attach&, const Attach&) = default;
};
struct Detach {
  std::string child, parent;
  friend bool operator==(const Detach&, const Detach&) = default;
};
/// Atomic Detach(child, from) + Attach(child, to).
struct Move {
  std::string child, from, to;
  friend bool operator==(const Move&, const Move&) = default;
};
}  // namespace change

using TopologyChange =
    std::variant<change::AddEntity, change::AddCoreLink, change::Attach, change::Detach, change::Move>;

/// Entities whose parent set changed, sorted by index.
struct ChangeSet {
  std::vector<EntityIndex> entities;

  bool empty() const noexcept { return entities.empty(); }
  std::size_t size() const noexcept { return entities.size(); }
};

class AttachmentGraph {
 public:
  /// Applies one mutation. On error nothing is modified.
  ChangeSet apply(const TopologyChange& change);

  /// Bumped on every successful mutation.
  std::uint64_t version() const noexcept { return version_; }
  /// Bumped only when the core network (routers or core links) changes.
  std::uint64_t core_version() const noexcept { return core_version_; }

  std::size_t size() const noexcept { return nodes_.size(); }
  const EntityId& entity(EntityIndex i) const { return nodes_.at(i).id; }
  EntityKind kind(EntityIndex i) const { return nodes_.at(i).id.kind; }

  std::optional<EntityIndex> find(std::string_view id) const;
  /// Throws Error(UnknownEntity).
  EntityIndex require(std::string_view id) const;

  /// Parents and children are kept sorted by entity id.
  std::span<const EntityIndex> parents(EntityIndex i) const { return nodes_.at(i).parents; }
  std::span<const EntityIndex> children(EntityIndex i) const { return nodes_.at(i).children; }
  std::span<const EntityIndex> core_neighbors(EntityIndex i) const { return nodes_.at(i).core; }

  bool is_attached(EntityIndex child, EntityIndex parent) const;
  bool core_linked(EntityIndex a, EntityIndex b) const;

  /// Full invariant sweep; throws Error(InvariantViolation).
  void validate() const;

  friend bool operator==(const AttachmentGraph&, const AttachmentGraph&) = default;

 private:
  struct Node {
    EntityId id;
    std::vector<EntityIndex> parents;
    std::vector<EntityIndex> children;
    std::vector<EntityIndex> core;
    friend bool operator==(const Node&, const Node&) = default;
  };

  ChangeSet add_entity(const change::AddEntity& c);
  ChangeSet add_core_link(const change::AddCoreLink& c);
  ChangeSet attach(const change::Attach& c);
  ChangeSet detach(const change::Detach& c);
  ChangeSet move(const change::Move& c);

  void check_attachable(EntityIndex child, EntityIndex parent) const;
  bool reaches_upward(EntityIndex from, EntityIndex target) const;
  void insert_sorted(std::vector<EntityIndex>& v, EntityIndex i) const;
  static void erase_value(std::vector<EntityIndex>& v, EntityIndex i);

  std::vector<Node> nodes_;
  std::unordered_map<std::string, EntityIndex> index_;
  std::uint64_t version_ = 0;
  std::uint64_t core_version_ = 0;
};

/// Current parent set of `id`. Throws Error(UnknownEntity).
std::vector<EntityId> parents(const AttachmentGraph& graph, std::string_view id);

/// Hop-count shortest path over core links between two edge routers; among
/// equal-length paths the lexicographically smallest id sequence wins.
/// Throws Error(Unreachable).
std::vector<EntityIndex> core_route(const AttachmentGraph& graph, EntityIndex from, EntityIndex to);
std::vector<EntityId> core_route(const AttachmentGraph& graph, std::string_view from, std::string_view to);

/// Core-network hop distances from `from` to every entity (-1 where unreachable
/// or not a router).
std::vector<int> core_distances(const AttachmentGraph& graph, EntityIndex from);

/// BFS over the whole graph: up-edges in both directions plus core links.
/// Test and metrics oracle. Throws Error(Unreachable).
int oracle_shortest_hops(const AttachmentGraph& graph, EntityIndex a, EntityIndex b);
int oracle_shortest_hops(const AttachmentGraph& graph, std::string_view a, std::string_view b);

/// Every maximal upward chain from `start` ending at the first edge router
/// reached, in breadth-first order. Empty when `start` is detached.
std::vector<std::vector<EntityIndex>> up_chains(const AttachmentGraph& graph, EntityIndex start);

bool reaches_edge(const AttachmentGraph& graph, EntityIndex start);

/// `root` and everything attached below it, sorted by index.
std::vector<EntityIndex> subtree(const AttachmentGraph& graph, EntityIndex root);

}  // namespace netinf
