#include "netinf/resolution.hpp"

#include <bit>
#include <stdexcept>
#include <string>

namespace netinf {

namespace {

std::uint64_t prefix64(const Digest& d) {
  std::uint64_t v = 0;
  for (int i = 0; i < 8; ++i) v = v << 8 | d[i];
  return v;
}

}  // namespace

std::uint64_t name_key(const ObjectName& name) { return prefix64(sha256(format_name(name))); }

int dht_hop_cost(std::size_t resolver_count) {
  if (resolver_count <= 1) return 1;
  return static_cast<int>(std::bit_width(resolver_count - 1));
}

HashRing::HashRing(std::size_t resolver_count, std::size_t virtual_nodes) : resolver_count_(resolver_count) {
  if (resolver_count == 0) throw std::invalid_argument("resolver count must be >= 1");
  for (std::size_t r = 0; r < resolver_count; ++r) {
    for (std::size_t v = 0; v < virtual_nodes; ++v) {
      points_.emplace(prefix64(sha256("resolver:" + std::to_string(r) + ":" + std::to_string(v))), r);
    }
  }
}

std::size_t HashRing::responsible(std::uint64_t key) const {
  auto it = points_.lower_bound(key);
  if (it == points_.end()) it = points_.begin();
  return it->second;
}

ResolverRing::ResolverRing(std::size_t resolver_count) : ring_(resolver_count), tables_(resolver_count) {}

int ResolverRing::put(const ObjectName& name, ARAddress address) {
  ++writes_;
  tables_[ring_.responsible(name)][name].insert(address);
  return hop_cost();
}

std::vector<ARAddress> ResolverRing::get(const ObjectName& name) const {
  const auto& table = tables_[ring_.responsible(name)];
  auto it = table.find(name);
  if (it == table.end()) return {};
  return {it->second.begin(), it->second.end()};
}

void ResolverRing::remove(const ObjectName& name, ARAddress address) {
  ++writes_;
  auto& table = tables_[ring_.responsible(name)];
  auto it = table.find(name);
  if (it == table.end()) return;
  it->second.erase(address);
  if (it->second.empty()) table.erase(it);
}

std::size_t ResolverRing::name_count() const {
  std::size_t n = 0;
  for (const auto& t : tables_) n += t.size();
  return n;
}

}  // namespace netinf
