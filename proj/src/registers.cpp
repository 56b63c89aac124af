#include "netinf/registers.hpp"

#include <algorithm>
#include <string>

#include "netinf/error.hpp"

namespace netinf {

void RegisterStore::track_new_entities(const AttachmentGraph& graph, std::int64_t tick) {
  for (auto e = static_cast<EntityIndex>(by_entity_.size()); e < graph.size(); ++e) {
    ARAddress addr{registers_.size() + 1};
    registers_.push_back(AttachmentRegister{graph.entity(e), {}, tick});
    owners_.push_back(e);
    by_entity_.push_back(addr);
    rewrite(graph, e, tick);
  }
}

std::size_t RegisterStore::sync_from_changeset(const AttachmentGraph& graph, const ChangeSet& changes,
                                               std::int64_t tick) {
  track_new_entities(graph, tick);
  for (auto e : changes.entities) {
    if (e >= by_entity_.size()) throw Error(Errc::UnknownEntity, "entity index " + std::to_string(e));
    rewrite(graph, e, tick);
  }
  total_writes_ += changes.size();
  return changes.size();
}

void RegisterStore::rewrite(const AttachmentGraph& graph, EntityIndex entity, std::int64_t tick) {
  auto& reg = registers_[by_entity_[entity].value - 1];
  reg.parent_refs.clear();
  for (auto p : graph.parents(entity)) reg.parent_refs.push_back(by_entity_.at(p));
  std::sort(reg.parent_refs.begin(), reg.parent_refs.end());
  reg.last_update_tick = tick;
}

const AttachmentRegister& RegisterStore::lookup(ARAddress address) const {
  if (address.value == 0 || address.value > registers_.size()) {
    throw Error(Errc::UnknownAR, "address " + std::to_string(address.value));
  }
  return registers_[address.value - 1];
}

ARAddress RegisterStore::address_of(EntityIndex entity) const {
  if (entity >= by_entity_.size()) throw Error(Errc::UnknownEntity, "entity index " + std::to_string(entity));
  return by_entity_[entity];
}

EntityIndex RegisterStore::entity_of(ARAddress address) const {
  lookup(address);
  return owners_[address.value - 1];
}

void RegisterStore::check_mirror(const AttachmentGraph& graph) const {
  if (by_entity_.size() != graph.size()) {
    throw Error(Errc::InvariantViolation, "register count differs from entity count");
  }
  for (EntityIndex e = 0; e < graph.size(); ++e) {
    const auto& reg = lookup(by_entity_[e]);
    if (reg.owner != graph.entity(e)) throw Error(Errc::InvariantViolation, "register owner mismatch");
    std::vector<ARAddress> expect;
    for (auto p : graph.parents(e)) expect.push_back(by_entity_[p]);
    std::sort(expect.begin(), expect.end());
    if (expect != reg.parent_refs) {
      throw Error(Errc::InvariantViolation, "register of '" + reg.owner.id + "' out of sync");
    }
  }
}

}  // namespace netinf
