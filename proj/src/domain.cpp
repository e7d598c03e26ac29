#include "mfx/domain.hpp"

namespace mfx {

namespace {

int compare_seq(const std::vector<Value>& a, const std::vector<Value>& b) {
  for (std::size_t i = 0; i < a.size() && i < b.size(); ++i) {
    if (int c = Value::compare(a[i], b[i])) return c;
  }
  if (a.size() == b.size()) return 0;
  return a.size() < b.size() ? -1 : 1;
}

}  // namespace

int Value::compare(const Value& a, const Value& b) {
  if (a.node.index() != b.node.index()) return a.node.index() < b.node.index() ? -1 : 1;
  return std::visit(
      [&](const auto& x) -> int {
        using N = std::decay_t<decltype(x)>;
        const N& y = std::get<N>(b.node);
        if constexpr (std::is_same_v<N, Unit>) {
          return 0;
        } else if constexpr (std::is_same_v<N, bool>) {
          return x == y ? 0 : (x < y ? -1 : 1);
        } else if constexpr (std::is_same_v<N, Nat>) {
          return x.compare(y) < 0 ? -1 : (x.compare(y) > 0 ? 1 : 0);
        } else if constexpr (std::is_same_v<N, ListV>) {
          return compare_seq(x.elems, y.elems);
        } else if constexpr (std::is_same_v<N, OptionV>) {
          return compare_seq(x.inner, y.inner);
        } else if constexpr (std::is_same_v<N, CtorV>) {
          if (int c = x.name.compare(y.name)) return c < 0 ? -1 : 1;
          return compare_seq(x.args, y.args);
        } else {
          return x.id == y.id ? 0 : (x.id < y.id ? -1 : 1);
        }
      },
      a.node);
}

DanglingRef::DanglingRef(RefId id)
    : std::runtime_error("dangling reference ref" + std::to_string(id)), id_(id) {}

std::pair<Value, Heap> heap_alloc(const Heap& h, Value v) {
  Heap out = h;
  RefId id = out.next++;
  out.store[id] = std::move(v);
  return {Value::ref(id), std::move(out)};
}

const Value& heap_get(const Heap& h, RefId r) {
  auto it = h.store.find(r);
  if (it == h.store.end()) throw DanglingRef(r);
  return it->second;
}

Heap heap_set(const Heap& h, RefId r, Value v) {
  if (!h.store.count(r)) throw DanglingRef(r);
  Heap out = h;
  out.store[r] = std::move(v);
  return out;
}

void collect_refs(const Value& v, std::vector<RefId>& out) {
  if (const auto* r = v.as<Value::RefV>()) {
    out.push_back(r->id);
  } else if (const auto* l = v.as<Value::ListV>()) {
    for (const auto& e : l->elems) collect_refs(e, out);
  } else if (const auto* o = v.as<Value::OptionV>()) {
    for (const auto& e : o->inner) collect_refs(e, out);
  } else if (const auto* c = v.as<Value::CtorV>()) {
    for (const auto& e : c->args) collect_refs(e, out);
  }
}

bool heap_well_formed(const Heap& h) {
  for (const auto& [id, v] : h.store) {
    if (id >= h.next) return false;
    std::vector<RefId> refs;
    collect_refs(v, refs);
    for (RefId r : refs) {
      if (!h.store.count(r)) return false;
    }
  }
  return true;
}

bool outcome_le(const Outcome& a, const Outcome& b) { return a.is_bottom() || a == b; }

ChainViolation::ChainViolation(std::size_t index, const std::string& detail)
    : std::runtime_error("chain condition violated at index " + std::to_string(index) + ": " +
                         detail),
      index_(index) {}

std::optional<std::size_t> first_chain_violation(const Chain& c) {
  for (std::size_t i = 0; i + 1 < c.elems.size(); ++i) {
    if (!outcome_le(c.elems[i], c.elems[i + 1])) return i;
  }
  return std::nullopt;
}

Outcome lub_eventually_constant(const Chain& c) {
  if (auto i = first_chain_violation(c)) {
    throw ChainViolation(*i, render(c.elems[*i]) + " is not below " + render(c.elems[*i + 1]));
  }
  if (c.elems.empty() || c.elems.back().is_bottom()) throw NotStabilized();
  // In a flat chain every element after the first non-bottom one is equal to
  // it, so the last element is the least upper bound.
  return c.elems.back();
}

// ---------------------------------------------------------------------------
// Rendering
// ---------------------------------------------------------------------------

namespace {

std::string render_value(const Value& v, bool atom) {
  auto paren = [&](std::string s) { return atom ? "(" + s + ")" : s; };
  return std::visit(
      [&](const auto& x) -> std::string {
        using N = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<N, Value::Unit>) {
          return "()";
        } else if constexpr (std::is_same_v<N, bool>) {
          return x ? "True" : "False";
        } else if constexpr (std::is_same_v<N, Nat>) {
          return x.str();
        } else if constexpr (std::is_same_v<N, Value::ListV>) {
          std::string out = "[";
          for (std::size_t i = 0; i < x.elems.size(); ++i) {
            if (i) out += ", ";
            out += render_value(x.elems[i], false);
          }
          return out + "]";
        } else if constexpr (std::is_same_v<N, Value::OptionV>) {
          if (x.inner.empty()) return "None";
          return paren("Some " + render_value(x.inner[0], true));
        } else if constexpr (std::is_same_v<N, Value::CtorV>) {
          if (x.args.empty()) return x.name;
          std::string out = x.name;
          for (const auto& a : x.args) out += " " + render_value(a, true);
          return paren(out);
        } else {
          return "ref" + std::to_string(x.id);
        }
      },
      v.node);
}

}  // namespace

std::string render(const Value& v) { return render_value(v, false); }

std::string render(const Heap& h) {
  std::string out = "{";
  bool first = true;
  for (const auto& [id, v] : h.store) {
    if (!first) out += ", ";
    first = false;
    out += std::to_string(id) + " ↦ " + render(v);
  }
  if (!first) out += "; ";
  return out + "next=" + std::to_string(h.next) + "}";
}

std::string render(const Outcome& o) {
  switch (o.kind) {
    case Outcome::Kind::Bottom: return "Bottom";
    case Outcome::Kind::OkPure: return "OkPure(" + render(o.value) + ")";
    case Outcome::Kind::Ok: return "Ok(" + render(o.value) + ", " + render(o.heap) + ")";
  }
  return "?";
}

}  // namespace mfx
