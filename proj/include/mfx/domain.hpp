#pragma once

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "mfx/common.hpp"

namespace mfx {

/// Runtime values. Lists and options get their own alternatives so that the
/// builtin types render in literal syntax; user datatypes are CtorV.
struct Value {
  struct Unit {};
  struct ListV {
    std::vector<Value> elems;
  };
  // Empty for None, one element for Some.
  struct OptionV {
    std::vector<Value> inner;
  };
  struct CtorV {
    std::string name;
    std::vector<Value> args;
  };
  struct RefV {
    RefId id;
  };

  using Node = std::variant<Unit, bool, Nat, ListV, OptionV, CtorV, RefV>;
  Node node = Unit{};

  static Value unit() { return Value{Unit{}}; }
  static Value boolean(bool b) { return Value{b}; }
  static Value nat(Nat n) { return Value{std::move(n)}; }
  static Value list(std::vector<Value> elems) { return Value{ListV{std::move(elems)}}; }
  static Value none() { return Value{OptionV{}}; }
  static Value some(Value v) { return Value{OptionV{{std::move(v)}}}; }
  static Value ctor(std::string name, std::vector<Value> args = {}) {
    return Value{CtorV{std::move(name), std::move(args)}};
  }
  static Value ref(RefId id) { return Value{RefV{id}}; }

  template <typename T>
  const T* as() const {
    return std::get_if<T>(&node);
  }

  friend bool operator==(const Value& a, const Value& b) { return compare(a, b) == 0; }
  friend bool operator<(const Value& a, const Value& b) { return compare(a, b) < 0; }

  /// Total order used for containers and deterministic output.
  static int compare(const Value& a, const Value& b);
};

class DanglingRef : public std::runtime_error {
 public:
  explicit DanglingRef(RefId id);
  RefId id() const { return id_; }

 private:
  RefId id_;
};

struct Heap {
  std::map<RefId, Value> store;
  RefId next = 0;

  bool operator==(const Heap&) const = default;
};

std::pair<Value, Heap> heap_alloc(const Heap& h, Value v);
const Value& heap_get(const Heap& h, RefId r);
Heap heap_set(const Heap& h, RefId r, Value v);

/// Every id below `next` and every reference stored in a cell is allocated.
bool heap_well_formed(const Heap& h);

/// References occurring anywhere inside `v`.
void collect_refs(const Value& v, std::vector<RefId>& out);

struct Outcome {
  enum class Kind { Bottom, Ok, OkPure };

  Kind kind = Kind::Bottom;
  Value value;
  Heap heap;

  static Outcome bottom() { return {}; }
  static Outcome ok(Value v, Heap h) { return {Kind::Ok, std::move(v), std::move(h)}; }
  static Outcome ok_pure(Value v) { return {Kind::OkPure, std::move(v), {}}; }

  bool is_bottom() const { return kind == Kind::Bottom; }

  friend bool operator==(const Outcome& a, const Outcome& b) {
    if (a.kind != b.kind) return false;
    switch (a.kind) {
      case Kind::Bottom: return true;
      case Kind::OkPure: return a.value == b.value;
      case Kind::Ok: return a.value == b.value && a.heap == b.heap;
    }
    return false;
  }
};

/// The flat order: a ⊑ b iff a is Bottom or a = b.
bool outcome_le(const Outcome& a, const Outcome& b);

struct Chain {
  std::vector<Outcome> elems;
};

class NotStabilized : public std::runtime_error {
 public:
  NotStabilized() : std::runtime_error("chain has not stabilized at a non-bottom value") {}
};

class ChainViolation : public std::runtime_error {
 public:
  ChainViolation(std::size_t index, const std::string& detail);
  std::size_t index() const { return index_; }

 private:
  std::size_t index_;
};

/// Index of the first i with !(c[i] ⊑ c[i+1]), if any.
std::optional<std::size_t> first_chain_violation(const Chain& c);

/// The stabilized value of a flat chain. Throws ChainViolation if `c` is not
/// a chain and NotStabilized if it is empty or still ends in Bottom.
Outcome lub_eventually_constant(const Chain& c);

std::string render(const Value& v);
std::string render(const Heap& h);
std::string render(const Outcome& o);

}  // namespace mfx
