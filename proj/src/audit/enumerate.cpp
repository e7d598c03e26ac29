#include "audit/enumerate.hpp"

#include <set>

namespace mfx {

namespace {

Type substitute(const Type& t, const std::vector<std::string>& params, const std::vector<Type>& args) {
  if (t.kind == Type::Kind::Var) {
    for (std::size_t i = 0; i < params.size(); ++i) {
      if (params[i] == t.name && i < args.size()) return args[i];
    }
    return Type::nat();
  }
  Type out = t;
  for (auto& a : out.args) a = substitute(a, params, args);
  return out;
}

std::vector<Type> fields_of(const DataDecl& d, const Constructor& c, const Type& t) {
  std::vector<Type> out;
  for (const auto& f : c.fields) out.push_back(substitute(f, d.type_params, t.args));
  return out;
}

void product(const std::vector<std::vector<Value>>& domains,
             const std::function<void(std::vector<Value>)>& emit) {
  std::vector<std::size_t> idx(domains.size(), 0);
  for (const auto& d : domains) {
    if (d.empty()) return;
  }
  while (true) {
    std::vector<Value> tuple;
    tuple.reserve(domains.size());
    for (std::size_t i = 0; i < domains.size(); ++i) tuple.push_back(domains[i][idx[i]]);
    emit(std::move(tuple));
    std::size_t k = domains.size();
    while (k > 0) {
      --k;
      if (++idx[k] < domains[k].size()) break;
      idx[k] = 0;
      if (k == 0) return;
    }
    if (domains.empty()) return;
  }
}

std::vector<Value> enumerate(const Program& program, const Type& type, const DomainBounds& b,
                             std::uint64_t ref_bound, std::uint64_t depth) {
  std::vector<Value> out;
  if (type.kind == Type::Kind::Var) return enumerate(program, Type::nat(), b, ref_bound, depth);
  if (type.is("nat")) {
    for (std::uint64_t i = 0; i < b.nat_count; ++i) out.push_back(Value::nat(Nat(i)));
  } else if (type.is("bool")) {
    out = {Value::boolean(false), Value::boolean(true)};
  } else if (type.is("unit")) {
    out = {Value::unit()};
  } else if (type.is("ref")) {
    for (std::uint64_t i = 0; i < ref_bound; ++i) out.push_back(Value::ref(i));
  } else if (type.is("option")) {
    out.push_back(Value::none());
    for (auto& v : enumerate(program, type.args[0], b, ref_bound, depth)) {
      out.push_back(Value::some(std::move(v)));
    }
  } else if (type.is("list")) {
    std::vector<Value> elems = enumerate(program, type.args[0], b, ref_bound, depth);
    for (std::uint64_t len = 0; len <= b.max_list_len; ++len) {
      std::vector<std::vector<Value>> domains(len, elems);
      product(domains, [&](std::vector<Value> xs) { out.push_back(Value::list(std::move(xs))); });
    }
  } else if (type.is("heap")) {
    throw std::invalid_argument("heaps are enumerated separately");
  } else if (const DataDecl* d = program.find_data(type.name)) {
    if (depth == 0) return out;
    for (const auto& c : d->constructors) {
      std::vector<std::vector<Value>> domains;
      for (const auto& f : fields_of(*d, c, type)) {
        domains.push_back(enumerate(program, f, b, ref_bound, depth - 1));
      }
      product(domains, [&](std::vector<Value> xs) { out.push_back(Value::ctor(c.name, std::move(xs))); });
    }
  } else {
    throw std::invalid_argument("cannot enumerate type " + to_string(type));
  }
  return out;
}

void collect_cells(const Program& program, const Type& t, std::set<std::string>& seen,
                   std::vector<Type>& out) {
  if (t.kind != Type::Kind::Con) return;
  if (!seen.insert(to_string(t)).second) return;
  if (t.is("ref")) {
    Type cell = substitute(t.args[0], {}, {});
    bool known = false;
    for (const auto& c : out) known = known || c == cell;
    if (!known) out.push_back(cell);
  }
  for (const auto& a : t.args) collect_cells(program, a, seen, out);
  if (const DataDecl* d = program.find_data(t.name)) {
    for (const auto& c : d->constructors) {
      for (const auto& f : fields_of(*d, c, t)) collect_cells(program, f, seen, out);
    }
  }
}

}  // namespace

std::vector<Value> enumerate_values(const Program& program, const Type& type,
                                    const DomainBounds& bounds, std::uint64_t ref_bound) {
  return enumerate(program, type, bounds, ref_bound, bounds.max_depth);
}

namespace detail {

std::vector<Type> cell_types(const Program& program, const std::vector<Type>& roots) {
  std::set<std::string> seen;
  std::vector<Type> out;
  for (const auto& t : roots) collect_cells(program, t, seen, out);
  return out;
}

void for_each_heap(const Program& program, const std::vector<Type>& cells,
                   const DomainBounds& bounds, const std::function<bool(const Heap&)>& visit) {
  for (std::uint64_t k = 0; k <= bounds.max_cells; ++k) {
    std::vector<Value> domain;
    for (const auto& t : cells) {
      auto vs = enumerate_values(program, t, bounds, k);
      domain.insert(domain.end(), vs.begin(), vs.end());
    }
    if (k > 0 && domain.empty()) return;
    std::vector<std::size_t> idx(k, 0);
    while (true) {
      Heap h;
      h.next = k;
      for (std::uint64_t i = 0; i < k; ++i) h.store.emplace(i, domain[idx[i]]);
      if (!visit(h)) return;
      std::size_t pos = k;
      bool done = true;
      while (pos > 0) {
        --pos;
        if (++idx[pos] < domain.size()) {
          done = false;
          break;
        }
        idx[pos] = 0;
      }
      if (done) break;
    }
  }
}

}  // namespace detail

}  // namespace mfx
