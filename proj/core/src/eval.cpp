// Expression evaluation and atomic-step execution over flat slot vectors.

#include <algorithm>

#include "linchk/errors.hpp"
#include "linchk/modelir.hpp"

namespace linchk {

namespace {

using Op = Expr::Op;

Value* base_of(bool frame, const Frame& f) { return frame ? f.locals : f.shared; }

[[noreturn]] void fault(const std::string& msg) { throw ExecFault(msg); }

Value checked_index(const Expr& e, const Frame& f, Value* base) {
  Value i = eval_scalar(*e.args[0], f);
  const Domain& d = *e.domain;
  Value bound = d.kind == Domain::Kind::sequence ? base[e.offset] : d.size;
  if (i < 0 || i >= bound) {
    fault("index " + std::to_string(i) + " out of bounds for " + e.name + " (size " +
          std::to_string(bound) + ")");
  }
  return i;
}

Value read_index(const Expr& e, const Frame& f) {
  Value* base = base_of(e.frame, f);
  Value i = checked_index(e, f, base);
  int first = e.domain->kind == Domain::Kind::sequence ? e.offset + 1 : e.offset;
  return base[first + i];
}

void store_scalar(const LValue& lv, Value index, Value v, const Frame& f) {
  Value* base = base_of(lv.frame, f);
  const Domain& d = *lv.domain;
  if (!lv.index) {
    if (!d.contains(v)) {
      fault("value " + std::to_string(v) + " outside " + d.describe() + " for " + lv.name);
    }
    base[lv.offset] = v;
    return;
  }
  Value bound = d.kind == Domain::Kind::sequence ? base[lv.offset] : d.size;
  if (index < 0 || index >= bound) {
    fault("index " + std::to_string(index) + " out of bounds for " + lv.name + " (size " +
          std::to_string(bound) + ")");
  }
  if (!d.element->contains(v)) {
    fault("value " + std::to_string(v) + " outside " + d.element->describe() + " for " + lv.name +
          "[" + std::to_string(index) + "]");
  }
  int first = d.kind == Domain::Kind::sequence ? lv.offset + 1 : lv.offset;
  base[first + index] = v;
}

void store_list(const LValue& lv, const std::vector<Value>& items, const Frame& f) {
  Value* base = base_of(lv.frame, f);
  const Domain& d = *lv.domain;
  if (static_cast<int>(items.size()) > d.size) {
    fault("sequence " + lv.name + " overflows capacity " + std::to_string(d.size));
  }
  for (Value v : items) {
    if (!d.element->contains(v)) {
      fault("value " + std::to_string(v) + " outside " + d.element->describe() + " for element of " +
            lv.name);
    }
  }
  base[lv.offset] = static_cast<Value>(items.size());
  for (int i = 0; i < d.size; ++i) {
    base[lv.offset + 1 + i] = i < static_cast<int>(items.size()) ? items[i] : 0;
  }
}

struct Component {
  bool is_list = false;
  Value scalar = 0;
  std::vector<Value> list;
};

void eval_component(const Expr& e, const Frame& f, Component& out) {
  if (e.sort == ValueSort::list) {
    out.is_list = true;
    out.list.clear();
    eval_list(e, f, out.list);
  } else {
    out.is_list = false;
    out.scalar = eval_scalar(e, f);
  }
}

void eval_tuple(const Expr& e, const Frame& f, std::vector<Component>& out) {
  if (e.op == Op::ite) {
    eval_tuple(eval_scalar(*e.args[0], f) ? *e.args[1] : *e.args[2], f, out);
    return;
  }
  if (e.op != Op::tuple) {
    out.resize(1);
    eval_component(e, f, out[0]);
    return;
  }
  out.resize(e.args.size());
  for (std::size_t i = 0; i < e.args.size(); ++i) eval_component(*e.args[i], f, out[i]);
}

void store_component(const LValue& lv, const Component& c, Value index, const Frame& f) {
  if (c.is_list) {
    store_list(lv, c.list, f);
  } else {
    store_scalar(lv, index, c.scalar, f);
  }
}

Value index_of(const LValue& lv, const Frame& f) {
  return lv.index ? eval_scalar(*lv.index, f) : 0;
}

}  // namespace

Value eval_scalar(const Expr& e, const Frame& f) {
  switch (e.op) {
    case Op::constant:
      return e.constant;
    case Op::var:
      return base_of(e.frame, f)[e.offset];
    case Op::index:
      return read_index(e, f);
    case Op::neg:
      return -eval_scalar(*e.args[0], f);
    case Op::lnot:
      return eval_scalar(*e.args[0], f) ? 0 : 1;
    case Op::add:
      return eval_scalar(*e.args[0], f) + eval_scalar(*e.args[1], f);
    case Op::sub:
      return eval_scalar(*e.args[0], f) - eval_scalar(*e.args[1], f);
    case Op::mul:
      return eval_scalar(*e.args[0], f) * eval_scalar(*e.args[1], f);
    case Op::div:
    case Op::mod: {
      Value a = eval_scalar(*e.args[0], f);
      Value b = eval_scalar(*e.args[1], f);
      if (b == 0) fault("division by zero");
      return e.op == Op::div ? a / b : a % b;
    }
    case Op::eq:
      return eval_scalar(*e.args[0], f) == eval_scalar(*e.args[1], f);
    case Op::ne:
      return eval_scalar(*e.args[0], f) != eval_scalar(*e.args[1], f);
    case Op::lt:
      return eval_scalar(*e.args[0], f) < eval_scalar(*e.args[1], f);
    case Op::le:
      return eval_scalar(*e.args[0], f) <= eval_scalar(*e.args[1], f);
    case Op::gt:
      return eval_scalar(*e.args[0], f) > eval_scalar(*e.args[1], f);
    case Op::ge:
      return eval_scalar(*e.args[0], f) >= eval_scalar(*e.args[1], f);
    case Op::land:
      return eval_scalar(*e.args[0], f) && eval_scalar(*e.args[1], f);
    case Op::lor:
      return eval_scalar(*e.args[0], f) || eval_scalar(*e.args[1], f);
    case Op::ite:
      return eval_scalar(*e.args[0], f) ? eval_scalar(*e.args[1], f) : eval_scalar(*e.args[2], f);
    case Op::len: {
      const Expr& a = *e.args[0];
      if (a.op == Op::var) return base_of(a.frame, f)[a.offset];
      std::vector<Value> items;
      eval_list(a, f, items);
      return static_cast<Value>(items.size());
    }
    case Op::head:
    case Op::last: {
      std::vector<Value> items;
      eval_list(*e.args[0], f, items);
      if (items.empty()) fault(e.op == Op::head ? "head of empty sequence" : "last of empty sequence");
      return e.op == Op::head ? items.front() : items.back();
    }
    case Op::contains: {
      std::vector<Value> items;
      eval_list(*e.args[0], f, items);
      Value x = eval_scalar(*e.args[1], f);
      return std::find(items.begin(), items.end(), x) != items.end();
    }
    default:
      fault("expression does not denote a scalar");
  }
}

void eval_list(const Expr& e, const Frame& f, std::vector<Value>& out) {
  switch (e.op) {
    case Op::var: {
      const Value* base = base_of(e.frame, f);
      Value n = base[e.offset];
      out.assign(base + e.offset + 1, base + e.offset + 1 + n);
      return;
    }
    case Op::list:
      out.clear();
      for (const auto& a : e.args) out.push_back(eval_scalar(*a, f));
      return;
    case Op::ite:
      eval_list(eval_scalar(*e.args[0], f) ? *e.args[1] : *e.args[2], f, out);
      return;
    case Op::tail:
    case Op::butlast:
      eval_list(*e.args[0], f, out);
      if (out.empty()) fault(e.op == Op::tail ? "tail of empty sequence" : "butlast of empty sequence");
      if (e.op == Op::tail) {
        out.erase(out.begin());
      } else {
        out.pop_back();
      }
      return;
    case Op::append: {
      Value x = eval_scalar(*e.args[1], f);
      eval_list(*e.args[0], f, out);
      out.push_back(x);
      return;
    }
    case Op::insert: {
      Value x = eval_scalar(*e.args[1], f);
      eval_list(*e.args[0], f, out);
      auto it = std::lower_bound(out.begin(), out.end(), x);
      if (it == out.end() || *it != x) out.insert(it, x);
      return;
    }
    case Op::remove: {
      Value x = eval_scalar(*e.args[1], f);
      eval_list(*e.args[0], f, out);
      auto it = std::find(out.begin(), out.end(), x);
      if (it != out.end()) out.erase(it);
      return;
    }
    default:
      fault("expression does not denote a sequence");
  }
}

bool guard_holds(const Stmt& s, const Frame& f) { return !s.guard || eval_scalar(*s.guard, f) != 0; }

void apply_updates(const Stmt& s, const Frame& f) {
  std::vector<Component> values;
  std::vector<Value> indices;
  for (const Update& u : s.updates) {
    if (u.kind == Update::Kind::cas) {
      const LValue& target = u.targets[0];
      Value index = index_of(target, f);
      Value expected = eval_scalar(*u.values[0], f);
      Value desired = eval_scalar(*u.values[1], f);
      Value* base = base_of(target.frame, f);
      Value current;
      if (target.index) {
        const Domain& d = *target.domain;
        Value bound = d.kind == Domain::Kind::sequence ? base[target.offset] : d.size;
        if (index < 0 || index >= bound) {
          fault("index " + std::to_string(index) + " out of bounds for " + target.name);
        }
        current = base[(d.kind == Domain::Kind::sequence ? target.offset + 1 : target.offset) + index];
      } else {
        current = base[target.offset];
      }
      bool ok = current == expected;
      if (ok) store_scalar(target, index, desired, f);
      if (u.result) store_scalar(*u.result, index_of(*u.result, f), ok ? 1 : 0, f);
      continue;
    }
    if (u.destructure) {
      eval_tuple(*u.values[0], f, values);
      indices.resize(u.targets.size());
      for (std::size_t i = 0; i < u.targets.size(); ++i) indices[i] = index_of(u.targets[i], f);
    } else {
      values.resize(u.values.size());
      indices.resize(u.targets.size());
      for (std::size_t i = 0; i < u.values.size(); ++i) eval_component(*u.values[i], f, values[i]);
      for (std::size_t i = 0; i < u.targets.size(); ++i) indices[i] = index_of(u.targets[i], f);
    }
    for (std::size_t i = 0; i < u.targets.size(); ++i) {
      store_component(u.targets[i], values[i], indices[i], f);
    }
  }
}

SequentialSpec::Step SequentialSpec::step(const std::vector<Value>& st, int rule,
                                          const std::vector<Value>& args) const {
  const Rule& r = rules.at(rule);
  std::vector<Value> shared = st;
  std::vector<Value> frame(std::max<std::size_t>(r.frame_size, args.size()), 0);
  std::copy(args.begin(), args.end(), frame.begin());
  Frame f{shared.data(), frame.data()};
  std::vector<Component> parts;
  eval_tuple(*r.body, f, parts);
  Step out;
  out.state = shared;
  Frame g{out.state.data(), frame.data()};
  for (std::size_t i = 0; i < state.size(); ++i) {
    LValue lv;
    lv.name = state[i].name;
    lv.offset = state[i].offset;
    lv.domain = state[i].domain;
    store_component(lv, parts[i], 0, g);
  }
  if (r.returns) {
    const Component& c = parts.back();
    if (!r.returns->contains(c.scalar)) {
      fault("return value " + std::to_string(c.scalar) + " outside " + r.returns->describe() +
            " in spec of " + r.method);
    }
    out.ret = c.scalar;
  }
  return out;
}

}  // namespace linchk
