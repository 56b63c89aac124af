#include "netinf/topology.hpp"

#include <algorithm>
#include <deque>

#include "netinf/error.hpp"

namespace netinf {

std::string_view to_string(EntityKind kind) {
  switch (kind) {
    case EntityKind::CoreRouter: return "core";
    case EntityKind::EdgeRouter: return "edge";
    case EntityKind::AccessNode: return "access";
    case EntityKind::Host: return "host";
    case EntityKind::Object: return "object";
  }
  return "?";
}

bool is_valid_entity_id(std::string_view id) noexcept {
  if (id.empty()) return false;
  return std::none_of(id.begin(), id.end(), [](char c) {
    return c == '@' || c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\v' || c == '\f';
  });
}

bool attachment_allowed(EntityKind child, EntityKind parent) noexcept {
  switch (child) {
    case EntityKind::Object: return parent == EntityKind::Host;
    case EntityKind::Host: return parent == EntityKind::AccessNode;
    case EntityKind::AccessNode:
      return parent == EntityKind::AccessNode || parent == EntityKind::EdgeRouter;
    case EntityKind::EdgeRouter:
    case EntityKind::CoreRouter: return false;
  }
  return false;
}

namespace {

bool is_router(EntityKind k) { return k == EntityKind::CoreRouter || k == EntityKind::EdgeRouter; }

}  // namespace

std::optional<EntityIndex> AttachmentGraph::find(std::string_view id) const {
  auto it = index_.find(std::string(id));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

EntityIndex AttachmentGraph::require(std::string_view id) const {
  if (auto i = find(id)) return *i;
  throw Error(Errc::UnknownEntity, "'" + std::string(id) + "'");
}

bool AttachmentGraph::is_attached(EntityIndex child, EntityIndex parent) const {
  const auto& p = nodes_.at(child).parents;
  return std::find(p.begin(), p.end(), parent) != p.end();
}

bool AttachmentGraph::core_linked(EntityIndex a, EntityIndex b) const {
  const auto& c = nodes_.at(a).core;
  return std::find(c.begin(), c.end(), b) != c.end();
}

ChangeSet AttachmentGraph::apply(const TopologyChange& change) {
  ChangeSet cs = std::visit(
      [this](const auto& c) -> ChangeSet {
        using T = std::decay_t<decltype(c)>;
        if constexpr (std::is_same_v<T, change::AddEntity>) return add_entity(c);
        else if constexpr (std::is_same_v<T, change::AddCoreLink>) return add_core_link(c);
        else if constexpr (std::is_same_v<T, change::Attach>) return attach(c);
        else if constexpr (std::is_same_v<T, change::Detach>) return detach(c);
        else return move(c);
      },
      change);
  ++version_;
  return cs;
}

ChangeSet AttachmentGraph::add_entity(const change::AddEntity& c) {
  if (!is_valid_entity_id(c.id)) throw Error(Errc::ParseError, "invalid entity id '" + c.id + "'");
  if (index_.contains(c.id)) throw Error(Errc::DuplicateEntity, "'" + c.id + "'");
  auto idx = static_cast<EntityIndex>(nodes_.size());
  nodes_.push_back(Node{EntityId{c.kind, c.id}, {}, {}, {}});
  index_.emplace(c.id, idx);
  if (is_router(c.kind)) ++core_version_;
  return {};
}

ChangeSet AttachmentGraph::add_core_link(const change::AddCoreLink& c) {
  EntityIndex a = require(c.a);
  EntityIndex b = require(c.b);
  if (!is_router(kind(a)) || !is_router(kind(b)) || a == b) {
    throw Error(Errc::IllegalAttachment, "core link " + c.a + " -- " + c.b);
  }
  if (core_linked(a, b)) throw Error(Errc::IllegalAttachment, "duplicate core link " + c.a + " -- " + c.b);
  insert_sorted(nodes_[a].core, b);
  insert_sorted(nodes_[b].core, a);
  ++core_version_;
  return {};
}

void AttachmentGraph::check_attachable(EntityIndex child, EntityIndex parent) const {
  const auto& cid = entity(child);
  const auto& pid = entity(parent);
  if (!attachment_allowed(cid.kind, pid.kind)) {
    throw Error(Errc::IllegalAttachment, std::string(to_string(cid.kind)) + " '" + cid.id + "' cannot attach to " +
                                             std::string(to_string(pid.kind)) + " '" + pid.id + "'");
  }
  if (is_attached(child, parent)) {
    throw Error(Errc::IllegalAttachment, "'" + cid.id + "' already attached to '" + pid.id + "'");
  }
  if (child == parent || reaches_upward(parent, child)) {
    throw Error(Errc::CycleDetected, "attaching '" + cid.id + "' to '" + pid.id + "'");
  }
}

bool AttachmentGraph::reaches_upward(EntityIndex from, EntityIndex target) const {
  std::vector<EntityIndex> stack{from};
  std::vector<bool> seen(nodes_.size(), false);
  while (!stack.empty()) {
    EntityIndex cur = stack.back();
    stack.pop_back();
    if (cur == target) return true;
    if (seen[cur]) continue;
    seen[cur] = true;
    for (auto p : nodes_[cur].parents) stack.push_back(p);
  }
  return false;
}

ChangeSet AttachmentGraph::attach(const change::Attach& c) {
  EntityIndex child = require(c.child);
  EntityIndex parent = require(c.parent);
  check_attachable(child, parent);
  insert_sorted(nodes_[child].parents, parent);
  insert_sorted(nodes_[parent].children, child);
  return ChangeSet{{child}};
}

ChangeSet AttachmentGraph::detach(const change::Detach& c) {
  EntityIndex child = require(c.child);
  EntityIndex parent = require(c.parent);
  if (!is_attached(child, parent)) {
    throw Error(Errc::NotAttached, "'" + c.child + "' is not attached to '" + c.parent + "'");
  }
  erase_value(nodes_[child].parents, parent);
  erase_value(nodes_[parent].children, child);
  return ChangeSet{{child}};
}

ChangeSet AttachmentGraph::move(const change::Move& c) {
  EntityIndex child = require(c.child);
  EntityIndex from = require(c.from);
  EntityIndex to = require(c.to);
  if (!is_attached(child, from)) {
    throw Error(Errc::NotAttached, "'" + c.child + "' is not attached to '" + c.from + "'");
  }
  check_attachable(child, to);
  erase_value(nodes_[child].parents, from);
  erase_value(nodes_[from].children, child);
  insert_sorted(nodes_[child].parents, to);
  insert_sorted(nodes_[to].children, child);
  return ChangeSet{{child}};
}

void AttachmentGraph::insert_sorted(std::vector<EntityIndex>& v, EntityIndex i) const {
  auto pos = std::lower_bound(v.begin(), v.end(), i, [this](EntityIndex a, EntityIndex b) {
    return nodes_[a].id.id < nodes_[b].id.id;
  });
  v.insert(pos, i);
}

void AttachmentGraph::erase_value(std::vector<EntityIndex>& v, EntityIndex i) {
  v.erase(std::remove(v.begin(), v.end(), i), v.end());
}

void AttachmentGraph::validate() const {
  auto fail = [](const std::string& what) { throw Error(Errc::InvariantViolation, what); };
  if (index_.size() != nodes_.size()) fail("index size mismatch");
  auto by_id = [this](EntityIndex a, EntityIndex b) { return nodes_[a].id.id < nodes_[b].id.id; };

  for (EntityIndex i = 0; i < nodes_.size(); ++i) {
    const Node& n = nodes_[i];
    auto it = index_.find(n.id.id);
    if (it == index_.end() || it->second != i) fail("index mismatch for '" + n.id.id + "'");
    if (!std::is_sorted(n.parents.begin(), n.parents.end(), by_id) ||
        std::adjacent_find(n.parents.begin(), n.parents.end()) != n.parents.end()) {
      fail("parents of '" + n.id.id + "' not sorted/unique");
    }
    for (auto p : n.parents) {
      if (!attachment_allowed(n.id.kind, nodes_[p].id.kind)) fail("kind rule violated at '" + n.id.id + "'");
      const auto& pc = nodes_[p].children;
      if (std::find(pc.begin(), pc.end(), i) == pc.end()) fail("child list missing '" + n.id.id + "'");
    }
    for (auto ch : n.children) {
      const auto& cp = nodes_[ch].parents;
      if (std::find(cp.begin(), cp.end(), i) == cp.end()) fail("parent list missing '" + n.id.id + "'");
    }
    for (auto c : n.core) {
      if (!is_router(n.id.kind) || !is_router(nodes_[c].id.kind)) fail("core link on non-router");
      if (!core_linked(c, i)) fail("asymmetric core link at '" + n.id.id + "'");
    }
  }

  // Acyclicity via DFS colouring over up-edges (only access nodes can form cycles).
  std::vector<std::uint8_t> colour(nodes_.size(), 0);
  for (EntityIndex root = 0; root < nodes_.size(); ++root) {
    if (colour[root] != 0) continue;
    std::vector<std::pair<EntityIndex, std::size_t>> stack{{root, 0}};
    colour[root] = 1;
    while (!stack.empty()) {
      auto& [cur, next] = stack.back();
      if (next < nodes_[cur].parents.size()) {
        EntityIndex p = nodes_[cur].parents[next++];
        if (colour[p] == 1) fail("attachment cycle through '" + nodes_[p].id.id + "'");
        if (colour[p] == 0) {
          colour[p] = 1;
          stack.emplace_back(p, 0);
        }
      } else {
        colour[cur] = 2;
        stack.pop_back();
      }
    }
  }
}

std::vector<EntityId> parents(const AttachmentGraph& graph, std::string_view id) {
  std::vector<EntityId> out;
  for (auto p : graph.parents(graph.require(id))) out.push_back(graph.entity(p));
  return out;
}

std::vector<int> core_distances(const AttachmentGraph& graph, EntityIndex from) {
  std::vector<int> dist(graph.size(), -1);
  std::deque<EntityIndex> queue{from};
  dist[from] = 0;
  while (!queue.empty()) {
    EntityIndex cur = queue.front();
    queue.pop_front();
    for (auto n : graph.core_neighbors(cur)) {
      if (dist[n] < 0) {
        dist[n] = dist[cur] + 1;
        queue.push_back(n);
      }
    }
  }
  return dist;
}

std::vector<EntityIndex> core_route(const AttachmentGraph& graph, EntityIndex from, EntityIndex to) {
  for (auto e : {from, to}) {
    if (graph.kind(e) != EntityKind::EdgeRouter) {
      throw Error(Errc::Unreachable, "'" + graph.entity(e).id + "' is not an edge router");
    }
  }
  // Distances towards the destination; then walk greedily from the source,
  // always taking the smallest-id neighbour that stays on a shortest path.
  auto dist = core_distances(graph, to);
  if (dist[from] < 0) {
    throw Error(Errc::Unreachable, "no core path " + graph.entity(from).id + " -> " + graph.entity(to).id);
  }
  std::vector<EntityIndex> path{from};
  EntityIndex cur = from;
  while (cur != to) {
    for (auto n : graph.core_neighbors(cur)) {  // sorted by id
      if (dist[n] == dist[cur] - 1) {
        cur = n;
        break;
      }
    }
    path.push_back(cur);
  }
  return path;
}

std::vector<EntityId> core_route(const AttachmentGraph& graph, std::string_view from, std::string_view to) {
  std::vector<EntityId> out;
  for (auto i : core_route(graph, graph.require(from), graph.require(to))) out.push_back(graph.entity(i));
  return out;
}

int oracle_shortest_hops(const AttachmentGraph& graph, EntityIndex a, EntityIndex b) {
  if (a == b) return 0;
  std::vector<int> dist(graph.size(), -1);
  std::deque<EntityIndex> queue{a};
  dist[a] = 0;
  while (!queue.empty()) {
    EntityIndex cur = queue.front();
    queue.pop_front();
    for (auto range : {graph.parents(cur), graph.children(cur), graph.core_neighbors(cur)}) {
      for (auto n : range) {
        if (dist[n] >= 0) continue;
        dist[n] = dist[cur] + 1;
        if (n == b) return dist[n];
        queue.push_back(n);
      }
    }
  }
  throw Error(Errc::Unreachable, graph.entity(a).id + " -/- " + graph.entity(b).id);
}

int oracle_shortest_hops(const AttachmentGraph& graph, std::string_view a, std::string_view b) {
  return oracle_shortest_hops(graph, graph.require(a), graph.require(b));
}

std::vector<std::vector<EntityIndex>> up_chains(const AttachmentGraph& graph, EntityIndex start) {
  std::vector<std::vector<EntityIndex>> done;
  std::deque<std::vector<EntityIndex>> open;
  open.push_back({start});
  while (!open.empty()) {
    auto chain = std::move(open.front());
    open.pop_front();
    EntityIndex last = chain.back();
    if (graph.kind(last) == EntityKind::EdgeRouter) {
      done.push_back(std::move(chain));
      continue;
    }
    for (auto p : graph.parents(last)) {
      if (std::find(chain.begin(), chain.end(), p) != chain.end()) continue;
      auto next = chain;
      next.push_back(p);
      open.push_back(std::move(next));
    }
  }
  return done;
}

bool reaches_edge(const AttachmentGraph& graph, EntityIndex start) {
  std::vector<EntityIndex> stack{start};
  std::vector<bool> seen(graph.size(), false);
  while (!stack.empty()) {
    EntityIndex cur = stack.back();
    stack.pop_back();
    if (graph.kind(cur) == EntityKind::EdgeRouter) return true;
    if (seen[cur]) continue;
    seen[cur] = true;
    for (auto p : graph.parents(cur)) stack.push_back(p);
  }
  return false;
}

std::vector<EntityIndex> subtree(const AttachmentGraph& graph, EntityIndex root) {
  std::vector<EntityIndex> out;
  std::vector<EntityIndex> stack{root};
  std::vector<bool> seen(graph.size(), false);
  seen[root] = true;
  while (!stack.empty()) {
    EntityIndex cur = stack.back();
    stack.pop_back();
    out.push_back(cur);
    for (auto c : graph.children(cur)) {
      if (!seen[c]) {
        seen[c] = true;
        stack.push_back(c);
      }
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace netinf
