#pragma once

// Attachment Registers: one record per entity mirroring its current upward
// attachments. Mobility events rewrite only the registers of the entities
// whose parent set changed.

#include <compare>
#include <cstdint>
#include <vector>

#include "netinf/topology.hpp"

namespace netinf {

struct ARAddress {
  std::uint64_t value = 0;
  friend auto operator<=>(const ARAddress&, const ARAddress&) = default;
};

struct AttachmentRegister {
  EntityId owner;
  std::vector<ARAddress> parent_refs;  // sorted
  std::int64_t last_update_tick = 0;
};

class RegisterStore {
 public:
  /// Creates registers for entities added to `graph` since the last call.
  /// Addresses are assigned once and never change.
  void track_new_entities(const AttachmentGraph& graph, std::int64_t tick);

  /// Rewrites the register of every entity in `changes` from the graph.
  /// Returns the number of register writes performed.
  std::size_t sync_from_changeset(const AttachmentGraph& graph, const ChangeSet& changes, std::int64_t tick);

  /// Throws Error(UnknownAR).
  const AttachmentRegister& lookup(ARAddress address) const;

  /// Throws Error(UnknownEntity) for untracked entities.
  ARAddress address_of(EntityIndex entity) const;
  EntityIndex entity_of(ARAddress address) const;

  std::size_t size() const noexcept { return registers_.size(); }
  std::uint64_t total_writes() const noexcept { return total_writes_; }

  /// Sweep: every register's parent_refs names exactly the graph parents.
  /// Throws Error(InvariantViolation).
  void check_mirror(const AttachmentGraph& graph) const;

 private:
  void rewrite(const AttachmentGraph& graph, EntityIndex entity, std::int64_t tick);

  // Address value v lives at registers_[v - 1]; addresses start at 1 so a
  // default-constructed ARAddress is never valid.
  std::vector<AttachmentRegister> registers_;
  std::vector<EntityIndex> owners_;
  std::vector<ARAddress> by_entity_;
  std::uint64_t total_writes_ = 0;
};

}  // namespace netinf
