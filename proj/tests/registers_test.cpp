#include <doctest.h>

#include <set>

#include "netinf/registers.hpp"
#include "test_util.hpp"

using namespace netinf;
using namespace netinf::test;

namespace {

struct Fixture {
  AttachmentGraph g;
  RegisterStore regs;

  Fixture() {
    add(g, EntityKind::EdgeRouter, "e1");
    add(g, EntityKind::AccessNode, "n1");
    add(g, EntityKind::AccessNode, "n2");
    add(g, EntityKind::Host, "h1");
    sync(attach(g, "n1", "e1"), 0);
    sync(attach(g, "n2", "e1"), 0);
    sync(attach(g, "h1", "n1"), 0);
  }

  std::size_t sync(const ChangeSet& cs, std::int64_t tick) { return regs.sync_from_changeset(g, cs, tick); }
  const AttachmentRegister& reg(const std::string& id) { return regs.lookup(regs.address_of(g.require(id))); }
};

}  // namespace

TEST_CASE("sync_from_changeset write counts") {
  Fixture f;
  std::vector<std::string> objects;
  for (int i = 0; i < 100; ++i) {
    auto o = "o" + std::to_string(i);
    add(f.g, EntityKind::Object, o);
    f.sync(attach(f.g, o, "h1"), 1);
  }
  f.regs.check_mirror(f.g);

  CHECK(f.sync(f.g.apply(change::Move{"h1", "n1", "n2"}), 5) == 1);
  f.regs.check_mirror(f.g);

  f.sync(f.g.apply(change::Detach{"n2", "e1"}), 6);
  CHECK(f.sync(attach(f.g, "n2", "e1"), 7) == 1);
  CHECK(f.sync(ChangeSet{}, 8) == 0);
  f.regs.check_mirror(f.g);
}

TEST_CASE("lookup") {
  Fixture f;
  CHECK(f.reg("e1").parent_refs.empty());
  CHECK(f.reg("e1").owner == EntityId{EntityKind::EdgeRouter, "e1"});

  f.sync(attach(f.g, "h1", "n2"), 2);
  auto refs = f.reg("h1").parent_refs;
  REQUIRE(refs.size() == 2);
  CHECK(f.regs.entity_of(refs[0]) == f.g.require("n1"));
  CHECK(f.regs.entity_of(refs[1]) == f.g.require("n2"));

  CHECK(code_of([&] { f.regs.lookup(ARAddress{0}); }) == Errc::UnknownAR);
  CHECK(code_of([&] { f.regs.lookup(ARAddress{999}); }) == Errc::UnknownAR);
}

TEST_CASE("object register is not rewritten when its host moves") {
  Fixture f;
  add(f.g, EntityKind::Object, "o1");
  f.sync(attach(f.g, "o1", "h1"), 3);
  auto addr = f.regs.address_of(f.g.require("o1"));
  CHECK(f.regs.lookup(addr).last_update_tick == 3);

  f.sync(f.g.apply(change::Move{"h1", "n1", "n2"}), 10);
  f.sync(f.g.apply(change::Move{"h1", "n2", "n1"}), 11);
  CHECK(f.regs.lookup(addr).last_update_tick == 3);
  CHECK(f.reg("h1").last_update_tick == 11);
  CHECK(f.regs.address_of(f.g.require("o1")) == addr);
}

TEST_CASE("mirror sweep detects an out-of-sync register") {
  Fixture f;
  f.g.apply(change::Move{"h1", "n1", "n2"});  // not synced
  CHECK(code_of([&] { f.regs.check_mirror(f.g); }) == Errc::InvariantViolation);
}

TEST_CASE("addresses form a bijection with entities") {
  Fixture f;
  std::set<std::uint64_t> seen;
  for (EntityIndex e = 0; e < f.g.size(); ++e) {
    auto a = f.regs.address_of(e);
    CHECK(seen.insert(a.value).second);
    CHECK(f.regs.entity_of(a) == e);
  }
}
