#include <doctest.h>

#include <map>

#include "netinf/resolution.hpp"

using namespace netinf;

namespace {

ObjectName name(int i) {
  std::string s = "object-" + std::to_string(i);
  return derive_content_name(Bytes(s.begin(), s.end()));
}

}  // namespace

TEST_CASE("hop cost model") {
  CHECK(dht_hop_cost(1) == 1);
  CHECK(dht_hop_cost(2) == 1);
  CHECK(dht_hop_cost(3) == 2);
  CHECK(dht_hop_cost(16) == 4);
  CHECK(dht_hop_cost(17) == 5);
  CHECK(ResolverRing(1).put(name(0), ARAddress{1}) == 1);
  CHECK(ResolverRing(16).put(name(0), ARAddress{1}) == 4);
}

TEST_CASE("put / get / remove") {
  ResolverRing ring(8);
  auto n = name(1);
  CHECK(ring.get(n).empty());

  ring.put(n, ARAddress{5});
  ring.put(n, ARAddress{5});
  CHECK(ring.get(n).size() == 1);

  ring.put(n, ARAddress{6});
  ring.put(n, ARAddress{7});
  CHECK(ring.get(n) == std::vector<ARAddress>{{5}, {6}, {7}});

  ring.remove(n, ARAddress{6});
  CHECK(ring.get(n) == std::vector<ARAddress>{{5}, {7}});
  ring.remove(n, ARAddress{42});
  CHECK(ring.get(n).size() == 2);

  ring.remove(n, ARAddress{5});
  ring.remove(n, ARAddress{7});
  CHECK(ring.get(n).empty());
  CHECK(ring.name_count() == 0);
  CHECK(ring.write_count() == 8);
}

TEST_CASE("responsibility is total, deterministic and spread") {
  HashRing a(16), b(16);
  std::map<std::size_t, int> load;
  for (int i = 0; i < 4000; ++i) {
    auto n = name(i);
    auto r = a.responsible(n);
    CHECK(r < 16);
    CHECK(r == b.responsible(n));
    ++load[r];
  }
  CHECK(load.size() == 16);
  for (auto [_, count] : load) CHECK(count > 50);

  HashRing single(1);
  CHECK(single.responsible(name(3)) == 0);
  CHECK(single.responsible(~std::uint64_t{0}) == 0);
}

TEST_CASE("union of tables holds exactly the published names") {
  ResolverRing ring(4);
  for (int i = 0; i < 50; ++i) ring.put(name(i), ARAddress{static_cast<std::uint64_t>(i + 1)});
  for (int i = 0; i < 50; i += 2) ring.remove(name(i), ARAddress{static_cast<std::uint64_t>(i + 1)});
  std::size_t seen = 0;
  ring.for_each_entry([&](const ObjectName& n, const auto& addrs) {
    ++seen;
    CHECK(addrs.size() == 1);
    CHECK(ring.get(n).size() == 1);
  });
  CHECK(seen == 25);
  CHECK(ring.name_count() == 25);
}
