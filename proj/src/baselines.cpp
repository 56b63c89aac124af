#include "netinf/baselines.hpp"

#include <algorithm>

#include "netinf/error.hpp"

namespace netinf {

std::vector<LocatorPath> FlatDhtResolver::current_locators(const AttachmentGraph& graph, EntityIndex object) {
  std::vector<LocatorPath> out;
  for (const auto& chain : up_chains(graph, object)) out.push_back(make_locator(graph, chain));
  return out;
}

void FlatDhtResolver::publish(const AttachmentGraph& graph, const ObjectName& name, EntityIndex object) {
  ++writes_;
  entries_[name][object] = current_locators(graph, object);
  registered_.insert_or_assign(object, name);
}

void FlatDhtResolver::unpublish(const ObjectName& name, EntityIndex object) {
  ++writes_;
  registered_.erase(object);
  std::erase_if(pending_, [&](const Rewrite& r) { return r.object == object; });
  auto it = entries_.find(name);
  if (it == entries_.end()) return;
  it->second.erase(object);
  if (it->second.empty()) entries_.erase(it);
}

std::size_t FlatDhtResolver::on_topology_change(const AttachmentGraph& graph, const ChangeSet& changes) {
  std::size_t issued = 0;
  std::vector<EntityIndex> objects;
  for (auto e : changes.entities) {
    for (auto d : subtree(graph, e)) {
      if (graph.kind(d) == EntityKind::Object && registered_.contains(d)) objects.push_back(d);
    }
  }
  std::sort(objects.begin(), objects.end());
  objects.erase(std::unique(objects.begin(), objects.end()), objects.end());
  for (auto o : objects) {
    pending_.push_back(Rewrite{o, current_locators(graph, o)});
    ++issued;
  }
  writes_ += issued;
  return issued;
}

void FlatDhtResolver::flush() {
  for (auto& r : pending_) {
    auto reg = registered_.find(r.object);
    if (reg == registered_.end()) continue;
    entries_[reg->second][r.object] = std::move(r.locators);
  }
  pending_.clear();
}

LocatorSet FlatDhtResolver::resolve(const ObjectName& name) const {
  LocatorSet result;
  result.trace.dht_hops = dht_hop_cost(resolver_count_);
  auto it = entries_.find(name);
  if (it == entries_.end()) throw Error(Errc::NameNotFound, format_name(name));
  for (const auto& [object, locators] : it->second) {
    result.locators.insert(result.locators.end(), locators.begin(), locators.end());
  }
  if (result.locators.empty()) throw Error(Errc::Detached, format_name(name) + " has no stored locator");
  std::sort(result.locators.begin(), result.locators.end(),
            [](const LocatorPath& a, const LocatorPath& b) { return a.text() < b.text(); });
  result.trace.candidate_count = static_cast<int>(result.locators.size());
  return result;
}

std::optional<EntityIndex> AnchorTable::anchor(EntityIndex access_node) const {
  auto it = anchors_.find(access_node);
  if (it == anchors_.end()) return std::nullopt;
  return it->second;
}

void AnchorTable::assign_home_anchors(const AttachmentGraph& graph) {
  for (EntityIndex e = 0; e < graph.size(); ++e) {
    if (graph.kind(e) != EntityKind::AccessNode || anchors_.contains(e)) continue;
    auto chains = up_chains(graph, e);
    if (chains.empty()) continue;
    auto best = std::min_element(chains.begin(), chains.end(), [&](const auto& a, const auto& b) {
      if (a.size() != b.size()) return a.size() < b.size();
      return make_locator(graph, a).text() < make_locator(graph, b).text();
    });
    anchors_[e] = best->back();
  }
}

Route anchor_route(CoreRoutes& routes, const AnchorTable& anchors, LocatorPath source_leg, LocatorPath dest_leg) {
  const auto& graph = routes.graph();
  std::vector<EntityIndex> waypoints{graph.require(source_leg.edge().id)};
  for (const auto& id : dest_leg.chain) {
    if (id.kind != EntityKind::AccessNode) continue;
    if (auto a = anchors.anchor(graph.require(id.id))) waypoints.push_back(*a);
  }
  waypoints.push_back(graph.require(dest_leg.edge().id));

  std::vector<EntityId> core{graph.entity(waypoints.front())};
  for (std::size_t i = 0; i + 1 < waypoints.size(); ++i) {
    auto seg = routes.route(waypoints[i], waypoints[i + 1]);
    for (std::size_t j = 1; j < seg.size(); ++j) core.push_back(graph.entity(seg[j]));
  }
  return make_route(std::move(source_leg), std::move(core), std::move(dest_leg));
}

}  // namespace netinf
