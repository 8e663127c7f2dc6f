/*
 * Copyright 2026 The linchk Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "linchk/modelir.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <sstream>

#include "linchk/errors.hpp"

namespace linchk {

int Domain::slot_count() const noexcept {
  switch (kind) {
    case Kind::array:
      return size;
    case Kind::sequence:
      return size + 1;
    default:
      return 1;
  }
}

bool Domain::contains(Value v) const noexcept {
  switch (kind) {
    case Kind::integer:
      return v >= lo && v <= hi;
    case Kind::boolean:
      return v == 0 || v == 1;
    case Kind::enumeration:
      return std::find(atoms.begin(), atoms.end(), v) != atoms.end();
    default:
      return false;
  }
}

std::vector<Value> Domain::carrier() const {
  std::vector<Value> out;
  switch (kind) {
    case Kind::integer:
      for (Value v = lo; v <= hi; ++v) out.push_back(v);
      break;
    case Kind::boolean:
      out = {0, 1};
      break;
    case Kind::enumeration:
      out = atoms;
      break;
    default:
      break;
  }
  return out;
}

Value Domain::default_value() const {
  switch (kind) {
    case Kind::integer:
      return lo;
    case Kind::enumeration:
      return atoms.empty() ? 0 : atoms.front();
    default:
      return 0;
  }
}

std::string Domain::describe() const {
  switch (kind) {
    case Kind::integer:
      return "int[" + std::to_string(lo) + ".." + std::to_string(hi) + "]";
    case Kind::boolean:
      return "bool";
    case Kind::enumeration:
      return "enum of " + std::to_string(atoms.size());
    case Kind::array:
      return "array[" + std::to_string(size) + "] of " + element->describe();
    case Kind::sequence:
      return "seq[" + std::to_string(size) + "] of " + element->describe();
  }
  return "?";
}

bool Location::is_return() const noexcept {
  return std::any_of(edges.begin(), edges.end(),
                     [](const Stmt& s) { return s.kind == Stmt::Kind::ret; });
}

std::string value_text(const std::vector<std::string>& atoms, const Domain& d, Value v) {
  switch (d.kind) {
    case Domain::Kind::boolean:
      return v ? "true" : "false";
    case Domain::Kind::enumeration:
      if (v >= 0 && static_cast<std::size_t>(v) < atoms.size()) return atoms[v];
      return "?" + std::to_string(v);
    default:
      return std::to_string(v);
  }
}

std::optional<Value> parse_value(const std::vector<std::string>& atoms, const Domain& d,
                                 std::string_view text) {
  switch (d.kind) {
    case Domain::Kind::boolean:
      if (text == "true") return 1;
      if (text == "false") return 0;
      return std::nullopt;
    case Domain::Kind::enumeration: {
      for (Value a : d.atoms) {
        if (atoms[a] == text) return a;
      }
      return std::nullopt;
    }
    case Domain::Kind::integer: {
      Value v = 0;
      auto [p, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
      if (ec != std::errc() || p != text.data() + text.size() || !d.contains(v)) return std::nullopt;
      return v;
    }
    default:
      return std::nullopt;
  }
}

int ObjectModel::method_index(std::string_view n) const {
  for (std::size_t i = 0; i < methods.size(); ++i) {
    if (methods[i].name == n) return static_cast<int>(i);
  }
  return -1;
}

std::string ObjectModel::value_text(const Domain& d, Value v) const {
  return linchk::value_text(*atoms, d, v);
}

std::optional<Value> ObjectModel::parse_value(const Domain& d, std::string_view text) const {
  return linchk::parse_value(*atoms, d, text);
}

std::vector<Value> SequentialSpec::initial() const {
  std::vector<Value> s(state_size, 0);
  for (const auto& v : state) std::copy(v.init.begin(), v.init.end(), s.begin() + v.offset);
  return s;
}

int SequentialSpec::rule_index(std::string_view method) const {
  for (std::size_t i = 0; i < rules.size(); ++i) {
    if (rules[i].method == method) return static_cast<int>(i);
  }
  return -1;
}

std::string SequentialSpec::value_text(const Domain& d, Value v) const {
  return linchk::value_text(*atoms, d, v);
}

std::optional<Value> SequentialSpec::parse_value(const Domain& d, std::string_view text) const {
  return linchk::parse_value(*atoms, d, text);
}

ObjectModel parse_model_file(const std::string& path, const std::map<std::string, Value>& overrides) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_model(buf.str(), overrides);
}

ObjectModel make_spec(const ObjectModel& model) {
  if (!model.seqspec && model.methods.empty()) {
    ObjectModel out = model;
    out.name = model.name + "_spec";
    out.shared.clear();
    out.shared_size = 0;
    return out;
  }
  if (!model.seqspec) throw ModelError("model " + model.name + " has no sequential specification");
  const SequentialSpec& spec = *model.seqspec;

  ObjectModel out;
  out.name = model.name + "_spec";
  out.atoms = model.atoms;
  out.constants = model.constants;
  out.shared = spec.state;
  out.shared_size = spec.state_size;
  out.seqspec = spec;

  for (const Method& m : model.methods) {
    int r = spec.rule_index(m.name);
    if (r < 0) throw ModelError("sequential specification has no rule for " + m.name);
    const SequentialSpec::Rule& rule = spec.rules[r];

    Method sm;
    sm.name = m.name;
    sm.params = m.params;
    sm.returns = m.returns;
    int frame = 0;
    for (const auto& p : sm.params) frame = std::max(frame, p.offset + p.domain->slot_count());
    frame = std::max(frame, rule.frame_size);
    int result_offset = frame;
    if (m.returns) {
      VarDecl result;
      result.name = "result";
      result.domain = m.returns;
      result.init = {m.returns->default_value()};
      result.offset = result_offset;
      sm.locals.push_back(result);
      ++frame;
    }
    sm.frame_size = frame;

    Update u;
    for (const auto& v : spec.state) {
      LValue lv;
      lv.name = v.name;
      lv.offset = v.offset;
      lv.domain = v.domain;
      u.targets.push_back(lv);
    }
    if (m.returns) {
      LValue lv;
      lv.name = "result";
      lv.frame = true;
      lv.offset = result_offset;
      lv.domain = m.returns;
      u.targets.push_back(lv);
    }
    u.values.push_back(rule.body);
    u.destructure = u.targets.size() > 1;

    Location apply;
    apply.name = "S";
    Stmt step;
    if (!u.targets.empty()) step.updates.push_back(std::move(u));
    step.target = 1;
    apply.edges.push_back(std::move(step));

    Location back;
    back.name = "R";
    Stmt ret;
    ret.kind = Stmt::Kind::ret;
    if (m.returns) {
      auto e = std::make_shared<Expr>();
      e->op = Expr::Op::var;
      e->frame = true;
      e->offset = result_offset;
      e->domain = m.returns;
      e->name = "result";
      e->sort = m.returns->kind == Domain::Kind::boolean       ? ValueSort::boolean
                : m.returns->kind == Domain::Kind::enumeration ? ValueSort::atom
                                                               : ValueSort::integer;
      ret.ret_value = e;
    }
    back.edges.push_back(std::move(ret));

    sm.locations.push_back(std::move(apply));
    sm.locations.push_back(std::move(back));
    sm.entry = 0;
    out.methods.push_back(std::move(sm));
  }
  return out;
}

}  // namespace linchk
