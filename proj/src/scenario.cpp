#include "netinf/scenario.hpp"

#include <charconv>
#include <map>
#include <sstream>

#include "netinf/error.hpp"

namespace netinf {

bool equivalent(const Scenario& a, const Scenario& b) {
  if (a.resolvers != b.resolvers || a.cache_capacity != b.cache_capacity) return false;
  if (a.declarations != b.declarations || a.events.size() != b.events.size()) return false;
  for (std::size_t i = 0; i < a.events.size(); ++i) {
    if (a.events[i].tick != b.events[i].tick || a.events[i].action != b.events[i].action) return false;
  }
  return true;
}

namespace {

std::vector<std::string_view> split_words(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t' || line[i] == '\r')) ++i;
    std::size_t start = i;
    while (i < line.size() && line[i] != ' ' && line[i] != '\t' && line[i] != '\r') ++i;
    if (i > start) out.push_back(line.substr(start, i - start));
  }
  return out;
}

class Parser {
 public:
  Scenario run(std::string_view text) {
    std::size_t line_no = 0;
    while (!text.empty()) {
      ++line_no;
      auto nl = text.find('\n');
      std::string_view line = text.substr(0, nl);
      text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
      if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
      line_ = line_no;
      auto words = split_words(line);
      if (!words.empty()) directive(words);
    }
    return std::move(scenario_);
  }

 private:
  [[noreturn]] void fail(const std::string& what) const {
    throw Error(Errc::ScenarioError, "line " + std::to_string(line_) + ": " + what);
  }

  void arity(const std::vector<std::string_view>& w, std::size_t n) const {
    if (w.size() != n) fail("'" + std::string(w[0]) + "' expects " + std::to_string(n - 1) + " argument(s)");
  }

  std::uint64_t number(std::string_view s) const {
    std::uint64_t v = 0;
    auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || p != s.data() + s.size()) fail("expected a non-negative integer, got '" + std::string(s) + "'");
    return v;
  }

  const std::string& declared(std::string_view id) const {
    auto it = kinds_.find(std::string(id));
    if (it == kinds_.end()) fail("undeclared id '" + std::string(id) + "'");
    return it->first;
  }

  std::string host(std::string_view id) const {
    auto it = kinds_.find(std::string(id));
    if (it == kinds_.end()) fail("undeclared id '" + std::string(id) + "'");
    if (it->second != EntityKind::Host) fail("'" + std::string(id) + "' is not a host");
    return it->first;
  }

  ObjectName name(std::string_view text) const {
    try {
      return parse_name(text);
    } catch (const Error& e) {
      fail(e.what());
    }
  }

  void directive(const std::vector<std::string_view>& w) {
    static const std::map<std::string_view, EntityKind> kEntityWords{
        {"core", EntityKind::CoreRouter},
        {"edge", EntityKind::EdgeRouter},
        {"access", EntityKind::AccessNode},
        {"host", EntityKind::Host},
    };
    std::string_view head = w[0];
    if (auto k = kEntityWords.find(head); k != kEntityWords.end()) {
      arity(w, 2);
      std::string id(w[1]);
      if (!is_valid_entity_id(id)) fail("invalid id '" + id + "'");
      if (!kinds_.emplace(id, k->second).second) fail("duplicate id '" + id + "'");
      scenario_.declarations.push_back(change::AddEntity{k->second, id});
    } else if (head == "corelink") {
      arity(w, 3);
      scenario_.declarations.push_back(change::AddCoreLink{declared(w[1]), declared(w[2])});
    } else if (head == "attach") {
      arity(w, 3);
      scenario_.declarations.push_back(change::Attach{declared(w[1]), declared(w[2])});
    } else if (head == "resolvers") {
      arity(w, 2);
      auto n = number(w[1]);
      if (n == 0) fail("resolvers must be >= 1");
      scenario_.resolvers = n;
    } else if (head == "cachecap") {
      arity(w, 2);
      scenario_.cache_capacity = number(w[1]);
    } else if (head == "at") {
      event(w);
    } else {
      fail("unknown directive '" + std::string(head) + "'");
    }
  }

  void event(const std::vector<std::string_view>& w) {
    if (w.size() < 3) fail("'at' expects a tick and an action");
    auto tick = static_cast<std::int64_t>(number(w[1]));
    if (!scenario_.events.empty() && tick < scenario_.events.back().tick) fail("event ticks must be non-decreasing");
    std::string_view verb = w[2];
    Action action;
    if (verb == "move") {
      if (w.size() != 6) fail("'move' expects <child> <from> <to>");
      action = change::Move{declared(w[3]), declared(w[4]), declared(w[5])};
    } else if (verb == "attach" || verb == "detach") {
      if (w.size() != 5) fail("'" + std::string(verb) + "' expects <child> <parent>");
      if (verb == "attach") action = change::Attach{declared(w[3]), declared(w[4])};
      else action = change::Detach{declared(w[3]), declared(w[4])};
    } else if (verb == "publish") {
      if (w.size() != 6) fail("'publish' expects <host> <name> <payload-hex>");
      Bytes payload;
      try {
        payload = from_hex(w[5]);
      } catch (const Error& e) {
        fail(e.what());
      }
      if (payload.empty()) fail("empty payload");
      action = action::Publish{host(w[3]), name(w[4]), std::move(payload)};
    } else if (verb == "get") {
      if (w.size() != 5) fail("'get' expects <host> <name>");
      action = action::Get{host(w[3]), name(w[4])};
    } else {
      fail("unknown action '" + std::string(verb) + "'");
    }
    scenario_.events.push_back(TimedEvent{tick, std::move(action), line_});
  }

  Scenario scenario_;
  std::map<std::string, EntityKind, std::less<>> kinds_;
  std::size_t line_ = 0;
};

}  // namespace

Scenario parse_scenario(std::string_view text) { return Parser{}.run(text); }

std::string format_action(const Action& action) {
  return std::visit(
      [](const auto& a) -> std::string {
        using T = std::decay_t<decltype(a)>;
        if constexpr (std::is_same_v<T, change::Move>) return "move " + a.child + " " + a.from + " " + a.to;
        else if constexpr (std::is_same_v<T, change::Attach>) return "attach " + a.child + " " + a.parent;
        else if constexpr (std::is_same_v<T, change::Detach>) return "detach " + a.child + " " + a.parent;
        else if constexpr (std::is_same_v<T, action::Publish>)
          return "publish " + a.host + " " + format_name(a.name) + " " + to_hex(a.payload);
        else return "get " + a.host + " " + format_name(a.name);
      },
      action);
}

std::string format_scenario(const Scenario& s) {
  std::ostringstream out;
  if (s.resolvers) out << "resolvers " << *s.resolvers << '\n';
  if (s.cache_capacity) out << "cachecap " << *s.cache_capacity << '\n';
  for (const auto& d : s.declarations) {
    std::visit(
        [&](const auto& c) {
          using T = std::decay_t<decltype(c)>;
          if constexpr (std::is_same_v<T, change::AddEntity>) out << to_string(c.kind) << ' ' << c.id << '\n';
          else if constexpr (std::is_same_v<T, change::AddCoreLink>) out << "corelink " << c.a << ' ' << c.b << '\n';
          else out << "attach " << c.child << ' ' << c.parent << '\n';
        },
        d);
  }
  for (const auto& e : s.events) out << "at " << e.tick << ' ' << format_action(e.action) << '\n';
  return out.str();
}

}  // namespace netinf
