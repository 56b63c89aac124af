#pragma once

// Line-oriented scenario files. One directive per line, '#' starts a comment:
//
//   core <id> | edge <id> | access <id> | host <id>
//   corelink <id> <id>
//   attach <child> <parent>
//   resolvers <n>
//   cachecap <n>
//   at <tick> move <child> <from> <to>
//   at <tick> attach|detach <child> <parent>
//   at <tick> publish <host> <name-text> <payload-hex>
//   at <tick> get <host> <name-text>

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "netinf/naming.hpp"
#include "netinf/topology.hpp"

namespace netinf {

using Declaration = std::variant<change::AddEntity, change::AddCoreLink, change::Attach>;

namespace action {
struct Publish {
  std::string host;
  ObjectName name;
  Bytes payload;
  friend bool operator==(const Publish&, const Publish&) = default;
};
struct Get {
  std::string host;
  ObjectName name;
  friend bool operator==(const Get&, const Get&) = default;
};
}  // namespace action

using Action = std::variant<change::Move, change::Attach, change::Detach, action::Publish, action::Get>;

struct TimedEvent {
  std::int64_t tick = 0;
  Action action;
  std::size_t line = 0;  // source line, 0 when generated
};

struct Scenario {
  std::optional<std::size_t> resolvers;
  std::optional<std::size_t> cache_capacity;
  std::vector<Declaration> declarations;
  std::vector<TimedEvent> events;
};

/// Equivalence ignoring source line numbers.
bool equivalent(const Scenario& a, const Scenario& b);

/// Throws Error(ScenarioError) with the offending line number.
Scenario parse_scenario(std::string_view text);
std::string format_scenario(const Scenario& scenario);

/// Canonical text of one event, as it appears after "at <tick> ".
std::string format_action(const Action& action);

}  // namespace netinf
