#include "netinf/content.hpp"

#include <algorithm>
#include <stdexcept>

#include "netinf/error.hpp"

namespace netinf {

void NodeStore::store_persistent(InformationObject object) {
  if (auto it = cache_index_.find(object.name); it != cache_index_.end()) {
    cache_.erase(it->second);
    cache_index_.erase(it);
  }
  auto name = object.name;
  persistent_.insert_or_assign(std::move(name), std::move(object));
}

bool NodeStore::remove_persistent(const ObjectName& name) { return persistent_.erase(name) > 0; }

NodeStore::Admission NodeStore::admit(InformationObject object) {
  Admission result;
  if (capacity_ == 0 || persistent_.contains(object.name)) return result;
  if (auto it = cache_index_.find(object.name); it != cache_index_.end()) {
    cache_.splice(cache_.begin(), cache_, it->second);
    result.admitted = true;
    return result;
  }
  while (cache_.size() >= capacity_) {
    result.evicted.push_back(cache_.back().name);
    cache_index_.erase(cache_.back().name);
    cache_.pop_back();
  }
  cache_.push_front(std::move(object));
  cache_index_.emplace(cache_.front().name, cache_.begin());
  result.admitted = true;
  return result;
}

const InformationObject* NodeStore::fetch(const ObjectName& name) {
  if (auto it = persistent_.find(name); it != persistent_.end()) return &it->second;
  auto it = cache_index_.find(name);
  if (it == cache_index_.end()) return nullptr;
  cache_.splice(cache_.begin(), cache_, it->second);
  return &*it->second;
}

const InformationObject* NodeStore::peek(const ObjectName& name) const {
  if (auto it = persistent_.find(name); it != persistent_.end()) return &it->second;
  auto it = cache_index_.find(name);
  return it == cache_index_.end() ? nullptr : &*it->second;
}

std::vector<ObjectName> NodeStore::cached_names() const {
  std::vector<ObjectName> out;
  for (const auto& o : cache_) out.push_back(o.name);
  return out;
}

std::string_view to_string(System system) {
  switch (system) {
    case System::Llc: return "llc";
    case System::FlatDht: return "flat-dht";
    case System::Anchor: return "anchor";
  }
  return "?";
}

System parse_system(std::string_view text) {
  if (text == "llc") return System::Llc;
  if (text == "flat-dht") return System::FlatDht;
  if (text == "anchor") return System::Anchor;
  throw std::invalid_argument("unknown system '" + std::string(text) + "'");
}

Counters& Counters::operator+=(const Counters& o) {
  ar_writes += o.ar_writes;
  dht_writes += o.dht_writes;
  dht_reads += o.dht_reads;
  ar_queries += o.ar_queries;
  gets_attempted += o.gets_attempted;
  gets_delivered += o.gets_delivered;
  retries += o.retries;
  total_data_hops += o.total_data_hops;
  stretch_samples += o.stretch_samples;
  stretch_actual_sum += o.stretch_actual_sum;
  stretch_oracle_sum += o.stretch_oracle_sum;
  stretch_exact += o.stretch_exact;
  cache_hits += o.cache_hits;
  cache_misses += o.cache_misses;
  return *this;
}

Counters operator-(Counters a, const Counters& b) {
  a.ar_writes -= b.ar_writes;
  a.dht_writes -= b.dht_writes;
  a.dht_reads -= b.dht_reads;
  a.ar_queries -= b.ar_queries;
  a.gets_attempted -= b.gets_attempted;
  a.gets_delivered -= b.gets_delivered;
  a.retries -= b.retries;
  a.total_data_hops -= b.total_data_hops;
  a.stretch_samples -= b.stretch_samples;
  a.stretch_actual_sum -= b.stretch_actual_sum;
  a.stretch_oracle_sum -= b.stretch_oracle_sum;
  a.stretch_exact -= b.stretch_exact;
  a.cache_hits -= b.cache_hits;
  a.cache_misses -= b.cache_misses;
  return a;
}

NetInf::NetInf(NetInfConfig config)
    : config_(config), dht_(config.resolvers), flat_(config.resolvers), routes_(graph_) {}

ChangeSet NetInf::apply_and_sync(const TopologyChange& change, std::int64_t tick) {
  ChangeSet cs = graph_.apply(change);
  auto writes = registers_.sync_from_changeset(graph_, cs, tick);
  if (uses_registers()) counters_.ar_writes += writes;
  if (config_.system == System::FlatDht) counters_.dht_writes += flat_.on_topology_change(graph_, cs);
  if (config_.system == System::Anchor) {
    // Networks get their home anchor the first time they reach an edge.
    bool unanchored = false;
    for (auto e : cs.entities) {
      if (graph_.kind(e) != EntityKind::AccessNode) continue;
      for (auto d : subtree(graph_, e)) {
        unanchored |= graph_.kind(d) == EntityKind::AccessNode && !anchors_.anchor(d);
      }
    }
    if (unanchored) anchors_.assign_home_anchors(graph_);
  }
  return cs;
}

ChangeSet NetInf::apply(const TopologyChange& change, std::int64_t tick) { return apply_and_sync(change, tick); }

void NetInf::add_entity(EntityKind kind, std::string_view id, std::int64_t tick) {
  apply_and_sync(change::AddEntity{kind, std::string(id)}, tick);
}

void NetInf::add_core_link(std::string_view a, std::string_view b) {
  apply_and_sync(change::AddCoreLink{std::string(a), std::string(b)}, 0);
}

ChangeSet NetInf::attach(std::string_view child, std::string_view parent, std::int64_t tick) {
  return apply_and_sync(change::Attach{std::string(child), std::string(parent)}, tick);
}

ChangeSet NetInf::detach(std::string_view child, std::string_view parent, std::int64_t tick) {
  return apply_and_sync(change::Detach{std::string(child), std::string(parent)}, tick);
}

ChangeSet NetInf::move(std::string_view child, std::string_view from, std::string_view to, std::int64_t tick) {
  return apply_and_sync(change::Move{std::string(child), std::string(from), std::string(to)}, tick);
}

void NetInf::end_tick() { flat_.flush(); }

EntityIndex NetInf::require_host(std::string_view host) const {
  auto h = graph_.find(host);
  if (!h || graph_.kind(*h) != EntityKind::Host) throw Error(Errc::UnknownHost, "'" + std::string(host) + "'");
  return *h;
}

NodeStore& NetInf::store_for(EntityIndex host) {
  auto it = stores_.find(host);
  if (it == stores_.end()) it = stores_.emplace(host, NodeStore(host, config_.cache_capacity)).first;
  return it->second;
}

const NodeStore* NetInf::store(std::string_view host) const {
  auto h = graph_.find(host);
  if (!h) return nullptr;
  auto it = stores_.find(*h);
  return it == stores_.end() ? nullptr : &it->second;
}

std::vector<EntityIndex> NetInf::holders(const ObjectName& name) const {
  auto it = holders_.find(name);
  if (it == holders_.end()) return {};
  return {it->second.begin(), it->second.end()};
}

std::vector<ObjectName> NetInf::names() const {
  std::vector<ObjectName> out;
  for (const auto& [name, _] : holders_) out.push_back(name);
  return out;
}

std::string NetInf::object_entity_id(const ObjectName& name, std::string_view host) {
  return "o." + to_hex(sha256(format_name(name))).substr(0, 16) + "." + std::string(host);
}

std::optional<EntityIndex> NetInf::object_entity(const ObjectName& name, EntityIndex host) const {
  return graph_.find(object_entity_id(name, graph_.entity(host).id));
}

void NetInf::register_copy(const ObjectName& name, EntityIndex host, std::int64_t tick) {
  const std::string id = object_entity_id(name, graph_.entity(host).id);
  auto obj = graph_.find(id);
  if (!obj) {
    apply_and_sync(change::AddEntity{EntityKind::Object, id}, tick);
    obj = graph_.find(id);
  }
  if (!graph_.is_attached(*obj, host)) apply_and_sync(change::Attach{id, graph_.entity(host).id}, tick);
  holders_[name].insert(host);
  if (config_.system == System::FlatDht) {
    flat_.publish(graph_, name, *obj);
  } else {
    dht_.put(name, registers_.address_of(*obj));
  }
  ++counters_.dht_writes;
}

void NetInf::unregister_copy(const ObjectName& name, EntityIndex host, std::int64_t tick) {
  auto obj = object_entity(name, host);
  if (auto it = holders_.find(name); it != holders_.end()) {
    it->second.erase(host);
    if (it->second.empty()) holders_.erase(it);
  }
  if (!obj) return;
  if (config_.system == System::FlatDht) {
    flat_.unpublish(name, *obj);
  } else {
    dht_.remove(name, registers_.address_of(*obj));
  }
  ++counters_.dht_writes;
  if (graph_.is_attached(*obj, host)) {
    apply_and_sync(change::Detach{graph_.entity(*obj).id, graph_.entity(host).id}, tick);
  }
}

void NetInf::publish(const InformationObject& object, std::string_view host, std::int64_t tick) {
  EntityIndex h = require_host(host);
  if (object.name.scheme == NameScheme::ContentHash && !verify_name(object.name, object.payload)) {
    throw Error(Errc::VerificationFailed, "payload does not match " + format_name(object.name));
  }
  if (!reaches_edge(graph_, h)) throw Error(Errc::Detached, "host '" + std::string(host) + "' is not attached");
  auto& st = store_for(h);
  bool registered = st.holds(object.name);
  st.store_persistent(object);
  if (!registered) register_copy(object.name, h, tick);
}

void NetInf::unpublish(const ObjectName& name, std::string_view host, std::int64_t tick) {
  EntityIndex h = require_host(host);
  if (!store_for(h).remove_persistent(name)) return;
  unregister_copy(name, h, tick);
}

LocatorSet NetInf::resolve(const ObjectName& name) {
  ++counters_.dht_reads;
  LocatorSet ls = config_.system == System::FlatDht
                      ? flat_.resolve(name)
                      : construct_locators(dht_, registers_, name, graph_.version());
  counters_.ar_queries += ls.trace.ar_queries;
  return ls;
}

GetResult NetInf::get(const ObjectName& name, std::string_view requester_host, std::int64_t tick) {
  ++counters_.gets_attempted;
  EntityIndex h = require_host(requester_host);
  auto& st = store_for(h);
  if (const auto* local = st.fetch(name)) {
    ++counters_.cache_hits;
    ++counters_.gets_delivered;
    GetResult hit;
    hit.object = *local;
    hit.local_hit = true;
    return hit;
  }
  ++counters_.cache_misses;

  std::vector<LocatorPath> requesters;
  for (const auto& chain : up_chains(graph_, h)) requesters.push_back(make_locator(graph_, chain));
  if (requesters.empty()) throw Error(Errc::Detached, "requester '" + std::string(requester_host) + "'");

  GetResult result;
  for (int attempt = 0;; ++attempt) {
    auto candidates = resolve(name);
    Route r = best_route(routes_, requesters, candidates.locators);
    if (config_.system == System::Anchor) r = anchor_route(routes_, anchors_, r.source_leg, r.dest_leg);
    auto delivery = forward(r, graph_);
    if (delivery.delivered) {
      result.route = std::move(r);
      break;
    }
    if (attempt == 1) {
      throw Error(Errc::StaleRoute, format_name(name) + " stale at '" + delivery.stale_at->id + "' after retry");
    }
    ++counters_.retries;
    ++result.retries;
  }

  const Route& route = *result.route;
  const LocatorPath& source = route.dest_leg;
  EntityIndex source_object = graph_.require(source.front().id);
  EntityIndex source_host = graph_.require(source.chain.at(1).id);
  const InformationObject* origin = store_for(source_host).fetch(name);
  if (!origin) throw Error(Errc::NameNotFound, format_name(name) + " missing at '" + graph_.entity(source_host).id + "'");

  InformationObject copy = *origin;
  if (transfer_hook_) transfer_hook_(copy.payload);
  if (name.scheme == NameScheme::ContentHash && !verify_name(name, copy.payload)) {
    throw Error(Errc::VerificationFailed, "transfer of " + format_name(name) + " corrupted");
  }

  result.hops = route.total_hops;
  result.oracle_hops = oracle_shortest_hops(graph_, h, source_object);
  result.source = source;
  ++counters_.gets_delivered;
  counters_.total_data_hops += static_cast<std::uint64_t>(result.hops);
  ++counters_.stretch_samples;
  counters_.stretch_actual_sum += static_cast<std::uint64_t>(result.hops);
  counters_.stretch_oracle_sum += static_cast<std::uint64_t>(result.oracle_hops);
  if (result.hops == result.oracle_hops) ++counters_.stretch_exact;

  auto admission = st.admit(copy);
  for (const auto& evicted : admission.evicted) unregister_copy(evicted, h, tick);
  if (admission.admitted) register_copy(name, h, tick);
  result.object = std::move(copy);
  return result;
}

void NetInf::check_invariants(std::mt19937_64& rng, std::size_t freshness_samples) const {
  auto fail = [](const std::string& what) { throw Error(Errc::InvariantViolation, what); };
  graph_.validate();
  registers_.check_mirror(graph_);
  const bool flat = config_.system == System::FlatDht;

  // Holders -> stores and registrations.
  std::size_t copies = 0;
  for (const auto& [name, hosts] : holders_) {
    for (auto h : hosts) {
      auto sit = stores_.find(h);
      if (sit == stores_.end() || !sit->second.holds(name)) fail("holder without stored copy");
      auto obj = object_entity(name, h);
      if (!obj || !graph_.is_attached(*obj, h)) fail("stored copy without attached object entity");
      if (flat) {
        if (!flat_.is_registered(*obj)) fail("copy missing from flat DHT");
      } else {
        auto addrs = dht_.get(name);
        if (std::find(addrs.begin(), addrs.end(), registers_.address_of(*obj)) == addrs.end()) {
          fail("copy missing from DHT: " + format_name(name));
        }
      }
      ++copies;
    }
  }

  // Registrations -> holders.
  std::size_t registered = 0;
  auto check_registered = [&](const ObjectName& name, EntityIndex obj) {
    auto parents = graph_.parents(obj);
    auto it = holders_.find(name);
    if (parents.size() != 1 || it == holders_.end() || !it->second.contains(parents[0])) {
      fail("DHT entry without holder: " + format_name(name));
    }
    ++registered;
  };
  if (flat) {
    flat_.for_each_entry([&](const ObjectName& name, EntityIndex obj, const auto&) { check_registered(name, obj); });
  } else {
    dht_.for_each_entry([&](const ObjectName& name, const auto& addrs) {
      for (auto a : addrs) check_registered(name, registers_.entity_of(a));
    });
  }
  if (registered != copies) fail("DHT registrations differ from stored copies");

  // Stores -> holders.
  for (const auto& [h, st] : stores_) {
    if (st.cache_size() > st.cache_capacity()) fail("cache over capacity");
    for (const auto& name : st.cached_names()) {
      auto it = holders_.find(name);
      if (it == holders_.end() || !it->second.contains(h)) fail("cached copy not registered");
    }
  }

  // Freshness on sampled names.
  if (flat && flat_.pending() != 0) return;
  auto all = names();
  for (std::size_t i = 0; i < freshness_samples && !all.empty(); ++i) {
    const ObjectName& name = all[rng() % all.size()];
    std::set<std::string> expected;
    for (auto h : holders(name)) {
      for (const auto& chain : up_chains(graph_, *object_entity(name, h))) {
        expected.insert(make_locator(graph_, chain).text());
      }
    }
    std::set<std::string> actual;
    try {
      auto ls = flat ? flat_.resolve(name) : construct_locators(dht_, registers_, name);
      for (const auto& l : ls.locators) actual.insert(l.text());
    } catch (const Error& e) {
      if (e.code() != Errc::Detached && e.code() != Errc::NameNotFound) throw;
    }
    if (expected != actual) fail("stale locators for " + format_name(name));
  }
}

}  // namespace netinf
