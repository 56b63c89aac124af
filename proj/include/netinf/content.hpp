#pragma once

// The NetInf API facade: publish / resolve / get over the attachment graph,
// the register store and the name resolution ring, with per-host storage and
// LRU caches. A client that completes a get caches the object and registers
// itself as a further copy.

#include <cstdint>
#include <functional>
#include <list>
#include <map>
#include <optional>
#include <random>
#include <set>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "netinf/baselines.hpp"
#include "netinf/llc.hpp"
#include "netinf/naming.hpp"
#include "netinf/registers.hpp"
#include "netinf/resolution.hpp"
#include "netinf/topology.hpp"

namespace netinf {

struct InformationObject {
  ObjectName name;
  Bytes payload;
  std::map<std::string, std::string> metadata;

  friend bool operator==(const InformationObject&, const InformationObject&) = default;
};

/// Persistent storage plus a bounded LRU cache for one host.
class NodeStore {
 public:
  NodeStore(EntityIndex host, std::size_t cache_capacity) : host_(host), capacity_(cache_capacity) {}

  struct Admission {
    bool admitted = false;
    std::vector<ObjectName> evicted;
  };

  /// Moves a cached copy to persistent storage if present.
  void store_persistent(InformationObject object);
  bool remove_persistent(const ObjectName& name);

  /// Inserts into the cache, evicting least-recently-used entries beyond
  /// capacity. Capacity 0 admits nothing.
  Admission admit(InformationObject object);

  /// Marks a cached entry as most recently used.
  const InformationObject* fetch(const ObjectName& name);
  const InformationObject* peek(const ObjectName& name) const;

  bool holds(const ObjectName& name) const { return holds_persistent(name) || holds_cached(name); }
  bool holds_persistent(const ObjectName& name) const { return persistent_.contains(name); }
  bool holds_cached(const ObjectName& name) const { return cache_index_.contains(name); }

  EntityIndex host() const noexcept { return host_; }
  std::size_t cache_size() const noexcept { return cache_.size(); }
  std::size_t cache_capacity() const noexcept { return capacity_; }
  std::size_t persistent_size() const noexcept { return persistent_.size(); }

  /// Cached names, most recently used first.
  std::vector<ObjectName> cached_names() const;

 private:
  EntityIndex host_;
  std::size_t capacity_;
  std::map<ObjectName, InformationObject> persistent_;
  std::list<InformationObject> cache_;  // front = most recently used
  std::map<ObjectName, std::list<InformationObject>::iterator> cache_index_;
};

enum class System : std::uint8_t { Llc, FlatDht, Anchor };

std::string_view to_string(System system);
/// Accepts "llc", "flat-dht", "anchor". Throws std::invalid_argument.
System parse_system(std::string_view text);

struct Counters {
  std::uint64_t ar_writes = 0;
  std::uint64_t dht_writes = 0;
  std::uint64_t dht_reads = 0;
  std::uint64_t ar_queries = 0;
  std::uint64_t gets_attempted = 0;
  std::uint64_t gets_delivered = 0;
  std::uint64_t retries = 0;
  std::uint64_t total_data_hops = 0;
  std::uint64_t stretch_samples = 0;
  std::uint64_t stretch_actual_sum = 0;
  std::uint64_t stretch_oracle_sum = 0;
  std::uint64_t stretch_exact = 0;
  std::uint64_t cache_hits = 0;
  std::uint64_t cache_misses = 0;

  Counters& operator+=(const Counters& o);
  friend Counters operator-(Counters a, const Counters& b);
  friend bool operator==(const Counters&, const Counters&) = default;
};

struct NetInfConfig {
  std::size_t resolvers = 8;
  std::size_t cache_capacity = 8;
  System system = System::Llc;
};

struct GetResult {
  InformationObject object;
  bool local_hit = false;
  int hops = 0;
  int oracle_hops = 0;
  int retries = 0;
  std::optional<LocatorPath> source;
  std::optional<Route> route;
};

class NetInf {
 public:
  explicit NetInf(NetInfConfig config);
  NetInf(const NetInf&) = delete;
  NetInf& operator=(const NetInf&) = delete;

  // Topology

  ChangeSet apply(const TopologyChange& change, std::int64_t tick = 0);
  void add_entity(EntityKind kind, std::string_view id, std::int64_t tick = 0);
  void add_core_link(std::string_view a, std::string_view b);
  ChangeSet attach(std::string_view child, std::string_view parent, std::int64_t tick = 0);
  ChangeSet detach(std::string_view child, std::string_view parent, std::int64_t tick = 0);
  ChangeSet move(std::string_view child, std::string_view from, std::string_view to, std::int64_t tick = 0);

  /// Makes queued baseline updates visible; called once per simulated tick.
  void end_tick();

  // API

  /// Stores `object` persistently at `host` and registers the copy.
  /// Throws VerificationFailed, UnknownHost or Detached.
  void publish(const InformationObject& object, std::string_view host, std::int64_t tick = 0);
  void unpublish(const ObjectName& name, std::string_view host, std::int64_t tick = 0);

  /// Current locators of every copy. Throws NameNotFound or Detached.
  LocatorSet resolve(const ObjectName& name);

  /// Retrieves `name` for `requester_host` from the nearest copy.
  /// Throws NameNotFound, Unreachable, VerificationFailed, Detached or StaleRoute.
  GetResult get(const ObjectName& name, std::string_view requester_host, std::int64_t tick = 0);

  // State

  const AttachmentGraph& graph() const noexcept { return graph_; }
  const RegisterStore& registers() const noexcept { return registers_; }
  const ResolverRing& dht() const noexcept { return dht_; }
  const FlatDhtResolver& flat_dht() const noexcept { return flat_; }
  AnchorTable& anchors() noexcept { return anchors_; }
  CoreRoutes& core_routes() noexcept { return routes_; }
  const Counters& counters() const noexcept { return counters_; }
  const NetInfConfig& config() const noexcept { return config_; }

  const NodeStore* store(std::string_view host) const;
  /// Hosts holding `name` persistently or in cache.
  std::vector<EntityIndex> holders(const ObjectName& name) const;
  std::vector<ObjectName> names() const;

  /// Object entity representing the copy of `name` at `host`.
  static std::string object_entity_id(const ObjectName& name, std::string_view host);
  std::optional<EntityIndex> object_entity(const ObjectName& name, EntityIndex host) const;

  /// Test hook applied to every payload in transit.
  void set_transfer_hook(std::function<void(Bytes&)> hook) { transfer_hook_ = std::move(hook); }

  /// Graph, register mirror, DHT/store coherence and (for up to
  /// `freshness_samples` names drawn from `rng`) locator freshness.
  /// Throws Error(InvariantViolation).
  void check_invariants(std::mt19937_64& rng, std::size_t freshness_samples = 20) const;

 private:
  NodeStore& store_for(EntityIndex host);
  EntityIndex require_host(std::string_view host) const;
  ChangeSet apply_and_sync(const TopologyChange& change, std::int64_t tick);
  void register_copy(const ObjectName& name, EntityIndex host, std::int64_t tick);
  void unregister_copy(const ObjectName& name, EntityIndex host, std::int64_t tick);
  bool uses_registers() const noexcept { return config_.system != System::FlatDht; }

  NetInfConfig config_;
  AttachmentGraph graph_;
  RegisterStore registers_;
  ResolverRing dht_;
  FlatDhtResolver flat_;
  AnchorTable anchors_;
  CoreRoutes routes_;
  std::unordered_map<EntityIndex, NodeStore> stores_;
  std::map<ObjectName, std::set<EntityIndex>> holders_;
  Counters counters_;
  std::function<void(Bytes&)> transfer_hook_;
};

}  // namespace netinf
