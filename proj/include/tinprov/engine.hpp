#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <type_traits>
#include <variant>
#include <vector>

#include "tinprov/element.hpp"
#include "tinprov/noprov.hpp"
#include "tinprov/proportional.hpp"
#include "tinprov/scope.hpp"
#include "tinprov/window.hpp"

namespace tinprov {

enum class Policy {
  noprov,
  least_recently_born,
  most_recently_born,
  fifo,
  lifo,
  proportional_dense,
  proportional_sparse,
};

inline bool is_element_policy(Policy p) {
  return p == Policy::least_recently_born || p == Policy::most_recently_born ||
         p == Policy::fifo || p == Policy::lifo;
}

inline bool is_proportional_policy(Policy p) {
  return p == Policy::proportional_dense || p == Policy::proportional_sparse;
}

inline std::optional<Policy> parse_policy(std::string_view name) {
  if (name == "noprov") return Policy::noprov;
  if (name == "lrb") return Policy::least_recently_born;
  if (name == "mrb") return Policy::most_recently_born;
  if (name == "fifo") return Policy::fifo;
  if (name == "lifo") return Policy::lifo;
  if (name == "prop-dense") return Policy::proportional_dense;
  if (name == "prop-sparse") return Policy::proportional_sparse;
  return std::nullopt;
}

inline std::string_view policy_name(Policy p) {
  switch (p) {
    case Policy::noprov: return "noprov";
    case Policy::least_recently_born: return "lrb";
    case Policy::most_recently_born: return "mrb";
    case Policy::fifo: return "fifo";
    case Policy::lifo: return "lifo";
    case Policy::proportional_dense: return "prop-dense";
    case Policy::proportional_sparse: return "prop-sparse";
  }
  return "?";
}

struct FullScope {};
struct SelectiveScope {
  std::vector<VertexId> tracked;
};
struct GroupedScope {
  std::vector<Slot> group_of;
  std::size_t num_groups{0};
};
struct WindowScope {
  std::uint64_t window{0};
};
struct BudgetScope {
  BudgetConfig budget;
};

using Scope = std::variant<FullScope, SelectiveScope, GroupedScope, WindowScope, BudgetScope>;

struct EngineConfig {
  Policy policy{Policy::noprov};
  Scope scope{FullScope{}};
  bool track_paths{false};
  bool coalesce{false};
  Quantity epsilon{kDefaultEpsilon};

  void validate() const {
    if (!(epsilon >= 0)) throw ConfigError("epsilon must be non-negative");
    const bool scoped = !std::holds_alternative<FullScope>(scope);
    if (scoped && !is_proportional_policy(policy)) {
      throw ConfigError("selective/grouped/window/budget scopes need a proportional policy");
    }
    if ((std::holds_alternative<WindowScope>(scope) || std::holds_alternative<BudgetScope>(scope)) &&
        policy != Policy::proportional_sparse) {
      throw ConfigError("window and budget scopes work on sparse lists; use prop-sparse");
    }
    if (track_paths && !is_element_policy(policy)) {
      throw ConfigError("path tracking needs an element policy (lrb, mrb, fifo, lifo)");
    }
    if (coalesce && policy != Policy::least_recently_born && policy != Policy::most_recently_born) {
      throw ConfigError("coalescing applies to lrb/mrb only");
    }
    if (coalesce && track_paths) throw ConfigError("coalescing cannot be combined with paths");
    if (auto* w = std::get_if<WindowScope>(&scope); w && w->window == 0) {
      throw ConfigError("window W must be positive");
    }
    if (auto* b = std::get_if<BudgetScope>(&scope)) b->budget.validate();
  }
};

// Who a provenance amount is attributed to.
struct Origin {
  enum class Kind { vertex, group, rest, unknown };
  Kind kind{Kind::vertex};
  std::uint32_t id{0};  // vertex index or group index

  bool operator==(const Origin&) const = default;
};

struct SnapshotEntry {
  Origin origin;
  Quantity quantity{0};
  std::optional<Time> birth_time;
  std::optional<std::vector<VertexId>> path;
};

// Runtime-configured front end over the policy engines.
class Engine {
 public:
  Engine(const EngineConfig& config, std::size_t num_vertices) : config_(config) {
    config_.validate();
    const ElementOptions element{config.epsilon, config.track_paths};
    switch (config.policy) {
      case Policy::noprov:
        impl_.emplace<NoProvEngine>(num_vertices);
        break;
      case Policy::least_recently_born:
        if (config.coalesce) {
          impl_.emplace<CoalescedLrb>(num_vertices, element);
        } else {
          impl_.emplace<LeastRecentlyBornEngine>(num_vertices, element);
        }
        break;
      case Policy::most_recently_born:
        if (config.coalesce) {
          impl_.emplace<CoalescedMrb>(num_vertices, element);
        } else {
          impl_.emplace<MostRecentlyBornEngine>(num_vertices, element);
        }
        break;
      case Policy::fifo:
        impl_.emplace<FifoEngine>(num_vertices, element);
        break;
      case Policy::lifo:
        impl_.emplace<LifoEngine>(num_vertices, element);
        break;
      case Policy::proportional_dense:
        impl_.emplace<DenseProportionalEngine>(num_vertices, make_scope(num_vertices),
                                               ProportionalOptions{config.epsilon});
        break;
      case Policy::proportional_sparse:
        if (auto* w = std::get_if<WindowScope>(&config.scope)) {
          impl_.emplace<WindowedEngine>(num_vertices, w->window, ScopeMap::full(num_vertices),
                                        config.epsilon);
        } else {
          SparseProportionalEngine::Options o;
          o.epsilon = config.epsilon;
          if (auto* b = std::get_if<BudgetScope>(&config.scope)) o.budget = b->budget;
          if (!std::holds_alternative<FullScope>(config.scope)) o.dust = DustPolicy::fold_to_unknown;
          impl_.emplace<SparseProportionalEngine>(num_vertices, make_scope(num_vertices), o);
        }
        break;
    }
  }

  StepResult process(const Interaction& r) {
    StepResult step = std::visit([&](auto& e) { return e.process(r); }, impl_);
    ++processed_;
    return step;
  }

  Quantity total(VertexId v) const {
    return std::visit([&](const auto& e) { return e.total(v); }, impl_);
  }

  std::vector<SnapshotEntry> snapshot(VertexId v) const {
    return std::visit(
        [&](const auto& e) -> std::vector<SnapshotEntry> {
          using E = std::decay_t<decltype(e)>;
          std::vector<SnapshotEntry> out;
          if constexpr (std::is_same_v<E, NoProvEngine>) {
            // totals only
          } else if constexpr (is_element_engine<E>) {
            const bool born = config_.policy == Policy::least_recently_born ||
                              config_.policy == Policy::most_recently_born;
            for (const Parcel& p : e.snapshot(v)) {
              SnapshotEntry s{{Origin::Kind::vertex, p.origin.index}, p.quantity, {}, {}};
              if (born) s.birth_time = p.birth_time;
              if (config_.track_paths) s.path = e.paths().materialize(p.path);
              out.push_back(std::move(s));
            }
          } else {
            for (const ProvEntry& p : e.snapshot(v)) {
              out.push_back({slot_origin(e.scope(), p.slot), p.amount, {}, {}});
            }
          }
          return out;
        },
        impl_);
  }

  // Mass in v's buffer attributed to origin u under the active scope.
  // Zero for non-proportional policies.
  Quantity attributable(VertexId v, VertexId u) const {
    return std::visit(
        [&](const auto& e) -> Quantity {
          using E = std::decay_t<decltype(e)>;
          if constexpr (std::is_same_v<E, NoProvEngine> || is_element_engine<E>) {
            return 0.0;
          } else {
            return e.attributable(v, e.scope().slot(u));
          }
        },
        impl_);
  }

  // Parcels or list entries currently held (allocated slots for dense).
  std::size_t entry_count() const {
    return std::visit(
        [](const auto& e) -> std::size_t {
          using E = std::decay_t<decltype(e)>;
          if constexpr (std::is_same_v<E, NoProvEngine>) {
            return 0;
          } else if constexpr (is_element_engine<E>) {
            return e.parcel_count();
          } else {
            return e.entry_count();
          }
        },
        impl_);
  }

  Quantity dropped_dust(VertexId v) const {
    if (auto* s = std::get_if<SparseProportionalEngine>(&impl_)) return s->dropped_dust(v);
    if (auto* w = std::get_if<WindowedEngine>(&impl_)) return w->dropped_dust(v);
    return 0.0;
  }

  std::size_t shrink_count(VertexId v) const {
    if (auto* s = std::get_if<SparseProportionalEngine>(&impl_)) return s->shrink_count(v);
    return 0;
  }

  const PathStore* paths() const {
    return std::visit(
        [](const auto& e) -> const PathStore* {
          if constexpr (is_element_engine<std::decay_t<decltype(e)>>) {
            return &e.paths();
          } else {
            return nullptr;
          }
        },
        impl_);
  }

  std::size_t num_vertices() const {
    return std::visit([](const auto& e) { return e.num_vertices(); }, impl_);
  }

  const EngineConfig& config() const { return config_; }
  std::uint64_t processed() const { return processed_; }

  // Direct access to the concrete engine, e.g. for the windowed side state.
  template <class E>
  const E* as() const {
    return std::get_if<E>(&impl_);
  }

  static Origin slot_origin(const ScopeMap& scope, Slot slot) {
    if (slot == kUnknownSlot) return {Origin::Kind::unknown, 0};
    switch (scope.kind()) {
      case ScopeMap::Kind::full:
        return {Origin::Kind::vertex, slot};
      case ScopeMap::Kind::selective:
        if (scope.is_rest(slot)) return {Origin::Kind::rest, 0};
        return {Origin::Kind::vertex, scope.tracked_vertex(slot).index};
      case ScopeMap::Kind::grouped:
        return {Origin::Kind::group, slot};
    }
    return {Origin::Kind::unknown, 0};
  }

 private:
  using CoalescedLrb = ElementEngine<CoalescedBuffer<BirthOrder::least_recent>>;
  using CoalescedMrb = ElementEngine<CoalescedBuffer<BirthOrder::most_recent>>;

  template <class E>
  static constexpr bool is_element_engine =
      std::is_same_v<E, LeastRecentlyBornEngine> || std::is_same_v<E, MostRecentlyBornEngine> ||
      std::is_same_v<E, CoalescedLrb> || std::is_same_v<E, CoalescedMrb> ||
      std::is_same_v<E, FifoEngine> || std::is_same_v<E, LifoEngine>;

  ScopeMap make_scope(std::size_t num_vertices) const {
    if (auto* s = std::get_if<SelectiveScope>(&config_.scope)) return ScopeMap::selective(s->tracked);
    if (auto* g = std::get_if<GroupedScope>(&config_.scope)) {
      return ScopeMap::grouped(g->group_of, g->num_groups);
    }
    return ScopeMap::full(num_vertices);
  }

  EngineConfig config_;
  std::variant<NoProvEngine, LeastRecentlyBornEngine, MostRecentlyBornEngine, CoalescedLrb,
               CoalescedMrb, FifoEngine, LifoEngine, DenseProportionalEngine,
               SparseProportionalEngine, WindowedEngine>
      impl_;
  std::uint64_t processed_{0};
};

}  // namespace tinprov
