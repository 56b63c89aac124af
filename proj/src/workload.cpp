#include "netinf/workload.hpp"

#include <algorithm>
#include <random>
#include <stdexcept>

namespace netinf {

namespace {

// Library distributions are not portable across standard libraries; these are.
class Draw {
 public:
  explicit Draw(std::uint64_t seed) : rng_(seed) {}

  std::size_t below(std::size_t n) { return n == 0 ? 0 : static_cast<std::size_t>(rng_() % n); }
  double unit() { return static_cast<double>(rng_() >> 11) * 0x1.0p-53; }
  bool chance(double p) { return unit() < p; }

  template <class V>
  const auto& pick(const V& v) {
    return v[below(v.size())];
  }

  std::uint64_t bits() { return rng_(); }

 private:
  std::mt19937_64 rng_;
};

std::string id(char prefix, std::size_t i) { return std::string(1, prefix) + std::to_string(i); }

class Generator {
 public:
  Generator(const WorkloadParams& p, std::uint64_t seed) : p_(p), draw_(seed) {}

  Scenario run() {
    s_.resolvers = p_.resolvers;
    s_.cache_capacity = p_.cache_capacity;
    build_network();
    publish_objects();
    for (std::size_t i = 0; i < p_.events; ++i) {
      auto tick = static_cast<std::int64_t>(1 + i / std::max<std::size_t>(1, p_.events_per_tick));
      // A draw can come up empty (e.g. no free target); redraw a few times.
      for (int attempt = 0; attempt < 16; ++attempt) {
        if (auto a = next_action()) {
          s_.events.push_back(TimedEvent{tick, std::move(*a), 0});
          break;
        }
      }
    }
    return std::move(s_);
  }

 private:
  void declare(EntityKind kind, const std::string& name) {
    s_.declarations.push_back(change::AddEntity{kind, name});
    graph_.apply(change::AddEntity{kind, name});
  }
  void link(const std::string& a, const std::string& b) {
    s_.declarations.push_back(change::AddCoreLink{a, b});
    graph_.apply(change::AddCoreLink{a, b});
  }
  void attach(const std::string& child, const std::string& parent) {
    s_.declarations.push_back(change::Attach{child, parent});
    graph_.apply(change::Attach{child, parent});
  }

  void build_network() {
    std::size_t n_core = std::max<std::size_t>(1, p_.nodes / 10);
    std::size_t n_edge = std::max<std::size_t>(1, p_.nodes / 5);
    std::size_t n_access = std::max<std::size_t>(1, p_.nodes > n_core + n_edge ? p_.nodes - n_core - n_edge : 1);

    for (std::size_t i = 0; i < n_core; ++i) declare(EntityKind::CoreRouter, cores_.emplace_back(id('c', i)));
    for (std::size_t i = 0; i < n_edge; ++i) declare(EntityKind::EdgeRouter, edges_.emplace_back(id('e', i)));
    for (std::size_t i = 0; i < n_access; ++i) declare(EntityKind::AccessNode, access_.emplace_back(id('n', i)));
    for (std::size_t i = 0; i < p_.hosts; ++i) declare(EntityKind::Host, hosts_.emplace_back(id('h', i)));

    // Core: a ring with a few random chords; each edge hangs off one core.
    if (n_core == 2) link(cores_[0], cores_[1]);
    if (n_core >= 3) {
      for (std::size_t i = 0; i < n_core; ++i) link(cores_[i], cores_[(i + 1) % n_core]);
      for (std::size_t k = 0; k < n_core / 4; ++k) {
        const auto& a = draw_.pick(cores_);
        const auto& b = draw_.pick(cores_);
        auto ia = graph_.require(a), ib = graph_.require(b);
        if (ia != ib && !graph_.core_linked(ia, ib)) link(a, b);
      }
    }
    for (const auto& e : edges_) link(e, draw_.pick(cores_));

    // Access networks nest at most nesting_depth levels below a top-level one.
    std::vector<std::size_t> level(n_access, 0);
    for (std::size_t i = 0; i < n_access; ++i) {
      std::vector<std::size_t> nestable;
      for (std::size_t j = 0; j < i; ++j) {
        if (level[j] <= p_.nesting_depth) nestable.push_back(j);
      }
      if (p_.nesting_depth > 0 && !nestable.empty() && draw_.chance(0.5)) {
        auto parent = draw_.pick(nestable);
        level[i] = level[parent] + 1;
        attach(access_[i], access_[parent]);
      } else {
        level[i] = 1;
        const auto& e = draw_.pick(edges_);
        attach(access_[i], e);
        if (edges_.size() > 1 && draw_.chance(p_.multihome_prob)) {
          const auto& e2 = draw_.pick(edges_);
          if (e2 != e) attach(access_[i], e2);
        }
      }
    }
    for (const auto& h : hosts_) {
      const auto& a = draw_.pick(access_);
      attach(h, a);
      if (access_.size() > 1 && draw_.chance(p_.multihome_prob)) {
        const auto& a2 = draw_.pick(access_);
        if (a2 != a) attach(h, a2);
      }
    }
  }

  void publish_objects() {
    if (hosts_.empty()) return;
    for (std::size_t i = 0; i < p_.objects; ++i) {
      Bytes payload(16);
      for (auto& b : payload) b = static_cast<std::uint8_t>(draw_.bits());
      for (int k = 0; k < 8; ++k) payload.push_back(static_cast<std::uint8_t>(i >> (8 * k)));
      auto name = derive_content_name(payload);
      names_.push_back(name);
      s_.events.push_back(TimedEvent{0, action::Publish{hosts_[i % hosts_.size()], name, std::move(payload)}, 0});
    }
  }

  std::optional<Action> next_action() {
    if (hosts_.empty()) return std::nullopt;
    double r = draw_.unit();
    if (r < p_.move_prob) return move();
    if (r < p_.move_prob + p_.get_prob && !names_.empty()) {
      return action::Get{draw_.pick(hosts_), draw_.pick(names_)};
    }
    return toggle_multihoming();
  }

  std::optional<Action> move() {
    bool nested_networks = p_.nesting_depth > 0 && access_.size() > 1;
    if (nested_networks && draw_.chance(0.25)) {
      if (auto a = move_network()) return a;
    }
    const auto& h = draw_.pick(hosts_);
    auto hi = graph_.require(h);
    auto parents = graph_.parents(hi);
    if (parents.empty()) return std::nullopt;
    std::vector<std::string> targets;
    for (const auto& a : access_) {
      auto ai = graph_.require(a);
      if (!graph_.is_attached(hi, ai)) targets.push_back(a);
    }
    if (targets.empty()) return std::nullopt;
    change::Move m{h, graph_.entity(draw_.pick(parents)).id, draw_.pick(targets)};
    graph_.apply(m);
    return m;
  }

  std::optional<Action> move_network() {
    const auto& n = draw_.pick(access_);
    auto ni = graph_.require(n);
    auto parents = graph_.parents(ni);
    if (parents.empty()) return std::nullopt;
    auto below = subtree(graph_, ni);
    std::vector<std::string> targets;
    for (const auto* pool : {&edges_, &access_}) {
      for (const auto& t : *pool) {
        auto ti = graph_.require(t);
        if (graph_.is_attached(ni, ti) || std::binary_search(below.begin(), below.end(), ti)) continue;
        targets.push_back(t);
      }
    }
    if (targets.empty()) return std::nullopt;
    change::Move m{n, graph_.entity(draw_.pick(parents)).id, draw_.pick(targets)};
    graph_.apply(m);
    return m;
  }

  std::optional<Action> toggle_multihoming() {
    const auto& h = draw_.pick(hosts_);
    auto hi = graph_.require(h);
    auto parents = graph_.parents(hi);
    if (parents.size() >= 2) {
      change::Detach d{h, graph_.entity(draw_.pick(parents)).id};
      graph_.apply(d);
      return d;
    }
    std::vector<std::string> targets;
    for (const auto& a : access_) {
      if (!graph_.is_attached(hi, graph_.require(a))) targets.push_back(a);
    }
    if (targets.empty()) return std::nullopt;
    change::Attach a{h, draw_.pick(targets)};
    graph_.apply(a);
    return a;
  }

  const WorkloadParams& p_;
  Draw draw_;
  Scenario s_;
  AttachmentGraph graph_;
  std::vector<std::string> cores_, edges_, access_, hosts_;
  std::vector<ObjectName> names_;
};

}  // namespace

Scenario generate_workload(const WorkloadParams& params, std::uint64_t seed) {
  if (params.resolvers == 0) throw std::invalid_argument("resolvers must be >= 1");
  return Generator(params, seed).run();
}

}  // namespace netinf
