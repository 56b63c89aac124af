#include "netinf/llc.hpp"

#include <algorithm>
#include <deque>
#include <limits>

#include "netinf/error.hpp"

namespace netinf {

std::string LocatorPath::text() const {
  std::string out;
  for (std::size_t i = 0; i < chain.size(); ++i) {
    if (i) out += '@';
    out += chain[i].id;
  }
  return out;
}

bool LocatorPath::is_object_locator() const {
  if (chain.empty() || chain.front().kind != EntityKind::Object || chain.back().kind != EntityKind::EdgeRouter) {
    return false;
  }
  for (std::size_t i = 0; i + 1 < chain.size(); ++i) {
    if (!attachment_allowed(chain[i].kind, chain[i + 1].kind)) return false;
  }
  return true;
}

LocatorPath make_locator(const AttachmentGraph& graph, std::span<const EntityIndex> chain) {
  LocatorPath path;
  path.chain.reserve(chain.size());
  for (auto e : chain) path.chain.push_back(graph.entity(e));
  path.constructed_at_version = graph.version();
  return path;
}

namespace {

void sort_by_text(std::vector<LocatorPath>& paths) {
  std::vector<std::pair<std::string, LocatorPath>> keyed;
  keyed.reserve(paths.size());
  for (auto& p : paths) keyed.emplace_back(p.text(), std::move(p));
  std::sort(keyed.begin(), keyed.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
  paths.clear();
  for (auto& [_, p] : keyed) paths.push_back(std::move(p));
}

}  // namespace

LocatorSet construct_locators(const ResolverRing& dht, const RegisterStore& registers, const ObjectName& name,
                              std::uint64_t graph_version) {
  LocatorSet result;

  // Step 1: name -> register addresses of every copy.
  auto copies = dht.get(name);
  result.trace.dht_hops = dht.hop_cost();
  if (copies.empty()) throw Error(Errc::NameNotFound, format_name(name));

  // Steps 2-7: walk registers upward from each copy. A partial chain keeps
  // the addresses it has visited as a cycle guard.
  struct Partial {
    std::vector<ARAddress> addrs;
    std::vector<EntityId> chain;
  };
  std::deque<Partial> open;
  for (auto addr : copies) {
    const auto& reg = registers.lookup(addr);
    open.push_back(Partial{{addr}, {reg.owner}});
  }
  while (!open.empty()) {
    Partial cur = std::move(open.front());
    open.pop_front();
    if (cur.chain.back().kind == EntityKind::EdgeRouter) {
      result.locators.push_back(LocatorPath{std::move(cur.chain), graph_version});
      continue;
    }
    const auto& reg = registers.lookup(cur.addrs.back());
    ++result.trace.ar_queries;
    for (auto parent : reg.parent_refs) {
      if (std::find(cur.addrs.begin(), cur.addrs.end(), parent) != cur.addrs.end()) continue;
      Partial next = cur;
      next.addrs.push_back(parent);
      next.chain.push_back(registers.lookup(parent).owner);
      open.push_back(std::move(next));
    }
  }

  if (result.locators.empty()) throw Error(Errc::Detached, format_name(name) + " reaches no edge router");
  sort_by_text(result.locators);
  result.locators.erase(std::unique(result.locators.begin(), result.locators.end()), result.locators.end());
  result.trace.candidate_count = static_cast<int>(result.locators.size());
  return result;
}

const std::vector<int>& CoreRoutes::table(EntityIndex from) {
  if (core_version_ != graph_->core_version()) {
    tables_.clear();
    core_version_ = graph_->core_version();
  }
  auto it = tables_.find(from);
  if (it == tables_.end()) it = tables_.emplace(from, core_distances(*graph_, from)).first;
  return it->second;
}

int CoreRoutes::distance(EntityIndex from, EntityIndex to) {
  const auto& t = table(from);
  return to < t.size() ? t[to] : -1;
}

std::vector<EntityIndex> CoreRoutes::route(EntityIndex from, EntityIndex to) {
  return core_route(*graph_, from, to);
}

int locator_cost(CoreRoutes& routes, const LocatorPath& candidate, EntityIndex requester_edge) {
  auto edge = routes.graph().find(candidate.edge().id);
  if (!edge) return -1;
  int core = routes.distance(requester_edge, *edge);
  if (core < 0) return -1;
  return core + candidate.hops();
}

LocatorPath select_locator(CoreRoutes& routes, std::span<const LocatorPath> candidates,
                           std::string_view requester_edge) {
  if (candidates.empty()) throw Error(Errc::NoCandidates, "no locator candidates");
  EntityIndex req = routes.graph().require(requester_edge);
  if (routes.graph().kind(req) != EntityKind::EdgeRouter) {
    throw Error(Errc::Unreachable, "'" + std::string(requester_edge) + "' is not an edge router");
  }
  const LocatorPath* best = nullptr;
  int best_cost = std::numeric_limits<int>::max();
  std::string best_text;
  for (const auto& c : candidates) {
    int cost = locator_cost(routes, c, req);
    if (cost < 0) continue;
    std::string text = c.text();
    if (cost < best_cost || (cost == best_cost && text < best_text)) {
      best = &c;
      best_cost = cost;
      best_text = std::move(text);
    }
  }
  if (!best) throw Error(Errc::Unreachable, "no candidate reachable from '" + std::string(requester_edge) + "'");
  return *best;
}

Route make_route(LocatorPath source_leg, std::vector<EntityId> core_leg, LocatorPath dest_leg) {
  Route r{std::move(source_leg), std::move(core_leg), std::move(dest_leg), 0};
  r.total_hops = r.source_leg.hops() + static_cast<int>(r.core_leg.size()) - 1 + r.dest_leg.hops();
  return r;
}

Route best_route(CoreRoutes& routes, std::span<const LocatorPath> sources, std::span<const LocatorPath> dests) {
  if (sources.empty() || dests.empty()) throw Error(Errc::NoCandidates, "no locator candidates");
  const auto& graph = routes.graph();
  const LocatorPath* best_src = nullptr;
  const LocatorPath* best_dst = nullptr;
  int best_total = std::numeric_limits<int>::max();
  std::string best_dst_text, best_src_text;
  for (const auto& s : sources) {
    EntityIndex edge = graph.require(s.edge().id);
    for (const auto& d : dests) {
      int cost = locator_cost(routes, d, edge);
      if (cost < 0) continue;
      int total = s.hops() + cost;
      std::string dt = d.text();
      std::string st = s.text();
      bool better = total < best_total ||
                    (total == best_total && (dt < best_dst_text || (dt == best_dst_text && st < best_src_text)));
      if (better) {
        best_src = &s;
        best_dst = &d;
        best_total = total;
        best_dst_text = std::move(dt);
        best_src_text = std::move(st);
      }
    }
  }
  if (!best_src) throw Error(Errc::Unreachable, "no source/destination pair connected through the core");
  std::vector<EntityId> core;
  for (auto e : routes.route(graph.require(best_src->edge().id), graph.require(best_dst->edge().id))) {
    core.push_back(graph.entity(e));
  }
  return make_route(*best_src, std::move(core), *best_dst);
}

Route route_object_to_object(const ResolverRing& dht, const RegisterStore& registers, CoreRoutes& routes,
                             const ObjectName& src, const ObjectName& dst) {
  auto version = routes.graph().version();
  auto sources = construct_locators(dht, registers, src, version);
  auto dests = construct_locators(dht, registers, dst, version);
  return best_route(routes, sources.locators, dests.locators);
}

DeliveryResult forward(const Route& route, const AttachmentGraph& graph) {
  auto attached = [&](const EntityId& child, const EntityId& parent) {
    auto c = graph.find(child.id);
    auto p = graph.find(parent.id);
    return c && p && graph.is_attached(*c, *p);
  };

  const auto& up = route.source_leg.chain;
  for (std::size_t i = 0; i + 1 < up.size(); ++i) {
    if (!attached(up[i], up[i + 1])) return DeliveryResult::stale(up[i]);
  }

  const auto& core = route.core_leg;
  if (core.empty() || up.empty() || core.front() != up.back()) {
    return DeliveryResult::stale(core.empty() ? route.source_leg.edge() : core.front());
  }
  for (std::size_t i = 0; i + 1 < core.size(); ++i) {
    auto a = graph.find(core[i].id);
    auto b = graph.find(core[i + 1].id);
    if (!a || !b || !graph.core_linked(*a, *b)) return DeliveryResult::stale(core[i + 1]);
  }

  const auto& down = route.dest_leg.chain;
  if (down.empty() || down.back() != core.back()) return DeliveryResult::stale(core.back());
  for (std::size_t i = down.size() - 1; i > 0; --i) {
    if (!attached(down[i - 1], down[i])) return DeliveryResult::stale(down[i - 1]);
  }
  return DeliveryResult::ok();
}

}  // namespace netinf
