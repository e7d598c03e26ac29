#include "support.hpp"

#include <fstream>
#include <functional>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>

namespace mfx::testing {

namespace {

std::uint64_t pick(Rng& rng, std::uint64_t n) {
  return std::uniform_int_distribution<std::uint64_t>(0, n - 1)(rng);
}

Type instantiate(const Type& t, const std::map<std::string, Type>& sub) {
  if (t.kind == Type::Kind::Var) {
    auto it = sub.find(t.name);
    return it == sub.end() ? Type::nat() : it->second;
  }
  Type out = t;
  for (auto& a : out.args) a = instantiate(a, sub);
  return out;
}

std::vector<Type> fields_of(const DataDecl& d, const Constructor& c, const Type& t) {
  std::map<std::string, Type> sub;
  for (std::size_t i = 0; i < d.type_params.size() && i < t.args.size(); ++i) {
    sub[d.type_params[i]] = t.args[i];
  }
  std::vector<Type> out;
  for (const auto& f : c.fields) out.push_back(instantiate(f, sub));
  return out;
}

void stored_refs(const Value& v, std::vector<RefId>& out) {
  if (const auto* r = v.as<Value::RefV>()) {
    out.push_back(r->id);
  } else if (const auto* l = v.as<Value::ListV>()) {
    for (const auto& e : l->elems) stored_refs(e, out);
  } else if (const auto* o = v.as<Value::OptionV>()) {
    for (const auto& e : o->inner) stored_refs(e, out);
  } else if (const auto* c = v.as<Value::CtorV>()) {
    for (const auto& e : c->args) stored_refs(e, out);
  }
}

std::optional<Type> find_cell(const Program& program, const Type& t, std::set<std::string>& seen) {
  if (t.kind != Type::Kind::Con) return std::nullopt;
  if (t.name == "ref") return t.args[0];
  for (const auto& a : t.args) {
    if (auto c = find_cell(program, a, seen)) return c;
  }
  const DataDecl* d = program.find_data(t.name);
  if (!d || !seen.insert(to_string(t)).second) return std::nullopt;
  for (const auto& c : d->constructors) {
    for (const auto& f : fields_of(*d, c, t)) {
      if (auto cell = find_cell(program, f, seen)) return cell;
    }
  }
  return std::nullopt;
}

}  // namespace

std::string corpus_path(const std::string& name) { return std::string(MFX_CORPUS_DIR) + "/" + name; }

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

Program load_corpus(const std::string& name) { return parse_program(read_file(corpus_path(name))); }

Value random_value(const Program& program, const Type& type, Rng& rng, RefId ref_bound,
                   int depth) {
  if (type.kind != Type::Kind::Con) return Value::nat(pick(rng, 10));
  const std::string& n = type.name;
  if (n == "nat") return Value::nat(pick(rng, 10));
  if (n == "bool") return Value::boolean(pick(rng, 2) == 1);
  if (n == "unit") return Value::unit();
  if (n == "list") {
    std::vector<Value> elems;
    std::uint64_t len = depth > 0 ? pick(rng, 4) : 0;
    for (std::uint64_t i = 0; i < len; ++i) {
      elems.push_back(random_value(program, type.args[0], rng, ref_bound, depth - 1));
    }
    return Value::list(std::move(elems));
  }
  if (n == "option") {
    if (depth <= 0 || pick(rng, 2) == 0) return Value::none();
    return Value::some(random_value(program, type.args[0], rng, ref_bound, depth - 1));
  }
  if (n == "ref") {
    if (ref_bound == 0) throw std::runtime_error("no references available");
    return Value::ref(pick(rng, ref_bound));
  }
  const DataDecl* d = program.find_data(n);
  if (!d) throw std::runtime_error("unknown type " + n);
  const Constructor& c = d->constructors[pick(rng, d->constructors.size())];
  std::vector<Value> args;
  for (const auto& f : fields_of(*d, c, type)) {
    args.push_back(random_value(program, f, rng, ref_bound, depth - 1));
  }
  return Value::ctor(c.name, std::move(args));
}

std::optional<Type> cell_type(const Program& program, const Type& root) {
  std::set<std::string> seen;
  return find_cell(program, root, seen);
}

Heap random_heap(const Program& program, const Type& cell, Rng& rng, std::size_t cells) {
  Heap h;
  h.next = cells;
  for (std::size_t i = 0; i < cells; ++i) h.store[i] = random_value(program, cell, rng, cells);
  return h;
}

Outcome random_outcome(Rng& rng) {
  switch (pick(rng, 3)) {
    case 0:
      return Outcome::bottom();
    case 1:
      return Outcome::ok_pure(Value::nat(pick(rng, 3)));
    default: {
      Heap h;
      std::uint64_t cells = pick(rng, 2);
      h.next = cells;
      for (std::uint64_t i = 0; i < cells; ++i) h.store[i] = Value::nat(pick(rng, 2));
      return Outcome::ok(Value::nat(pick(rng, 3)), h);
    }
  }
}

std::vector<Sample> random_samples(const Program& program, const FunDef& fun, Rng& rng,
                                   std::size_t count) {
  std::optional<Type> cell;
  if (fun.monad == Monad::Heap) {
    for (const auto& p : fun.params) {
      if ((cell = cell_type(program, p.type))) break;
    }
  }
  std::vector<Sample> out;
  for (std::size_t i = 0; i < count; ++i) {
    Sample s;
    if (cell) s.heap = random_heap(program, *cell, rng, 1 + pick(rng, 4));
    for (const auto& p : fun.params) {
      if (p.type.kind == Type::Kind::Con && p.type.name == "nat") {
        s.args.push_back(Value::nat(pick(rng, 200)));
      } else {
        s.args.push_back(random_value(program, p.type, rng, s.heap.next));
      }
    }
    out.push_back(std::move(s));
  }
  return out;
}

std::vector<Value> trace_oracle(std::uint64_t n) {
  std::vector<Value> out;
  for (; n != 0; n /= 2) {
    if (n % 2 == 0) out.push_back(Value::nat(n));
  }
  return out;
}

std::optional<std::vector<Value>> walk_list(const Heap& h, const Value& start) {
  std::vector<Value> out;
  std::set<RefId> visited;
  const Value* cur = &start;
  while (true) {
    const auto* c = cur->as<Value::CtorV>();
    if (!c || c->name == "Empty") return out;
    out.push_back(c->args[0]);
    RefId r = c->args[1].as<Value::RefV>()->id;
    if (!visited.insert(r).second) return std::nullopt;
    cur = &h.store.at(r);
  }
}

bool reaches(const Heap& h, RefId r1, RefId r2) {
  std::set<RefId> seen;
  std::vector<RefId> stack{r2};
  while (!stack.empty()) {
    RefId r = stack.back();
    stack.pop_back();
    if (r == r1) return true;
    if (!seen.insert(r).second) continue;
    auto it = h.store.find(r);
    if (it != h.store.end()) stored_refs(it->second, stack);
  }
  return false;
}

bool has_cycle_from(const Heap& h, RefId r) {
  std::map<RefId, int> color;
  std::function<bool(RefId)> visit = [&](RefId x) {
    int& c = color[x];
    if (c == 1) return true;
    if (c == 2) return false;
    c = 1;
    std::vector<RefId> next;
    if (auto it = h.store.find(x); it != h.store.end()) stored_refs(it->second, next);
    for (RefId y : next) {
      if (visit(y)) return true;
    }
    color[x] = 2;
    return false;
  };
  return visit(r);
}

}  // namespace mfx::testing
