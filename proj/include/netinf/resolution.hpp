#pragma once

// Global name resolution: a consistent-hash ring of resolvers mapping each
// object name to the Attachment Register addresses of its published copies.

#include <cstdint>
#include <map>
#include <set>
#include <vector>

#include "netinf/naming.hpp"
#include "netinf/registers.hpp"

namespace netinf {

/// First 8 bytes (big endian) of SHA-256 over the canonical name text.
std::uint64_t name_key(const ObjectName& name);

/// Simulated overlay lookup cost: ceil(log2(resolvers)), at least 1.
int dht_hop_cost(std::size_t resolver_count);

class HashRing {
 public:
  explicit HashRing(std::size_t resolver_count, std::size_t virtual_nodes = 64);

  std::size_t resolver_count() const noexcept { return resolver_count_; }
  /// Owner of the first ring point at or after `key`, wrapping around.
  std::size_t responsible(std::uint64_t key) const;
  std::size_t responsible(const ObjectName& name) const { return responsible(name_key(name)); }

 private:
  std::size_t resolver_count_;
  std::map<std::uint64_t, std::size_t> points_;
};

class ResolverRing {
 public:
  explicit ResolverRing(std::size_t resolver_count);

  /// Idempotent. Returns the simulated hop count of the lookup.
  int put(const ObjectName& name, ARAddress address);
  std::vector<ARAddress> get(const ObjectName& name) const;
  /// Removing the last address deletes the key.
  void remove(const ObjectName& name, ARAddress address);

  std::size_t resolver_count() const noexcept { return ring_.resolver_count(); }
  std::size_t responsible(const ObjectName& name) const { return ring_.responsible(name); }
  int hop_cost() const noexcept { return dht_hop_cost(resolver_count()); }

  /// put() and remove() calls, successful or not.
  std::uint64_t write_count() const noexcept { return writes_; }
  std::size_t name_count() const;

  template <class F>
  void for_each_entry(F&& f) const {
    for (const auto& table : tables_)
      for (const auto& [name, addrs] : table) f(name, addrs);
  }

 private:
  HashRing ring_;
  std::vector<std::map<ObjectName, std::set<ARAddress>>> tables_;
  std::uint64_t writes_ = 0;
};

}  // namespace netinf
