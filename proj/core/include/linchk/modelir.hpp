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

#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace linchk {

using Value = std::int32_t;

struct Domain;
using DomainPtr = std::shared_ptr<const Domain>;

/// Finite domain of a variable. Enumeration values are atoms, interned
/// model-wide and represented by their index.
struct Domain {
  enum class Kind : std::uint8_t { integer, boolean, enumeration, array, sequence };

  Kind kind = Kind::integer;
  Value lo = 0;
  Value hi = 0;
  std::vector<Value> atoms;
  int size = 0;
  DomainPtr element;

  bool scalar() const noexcept { return kind != Kind::array && kind != Kind::sequence; }
  int slot_count() const noexcept;
  bool contains(Value v) const noexcept;
  std::vector<Value> carrier() const;
  Value default_value() const;
  std::string describe() const;
};

enum class ValueSort : std::uint8_t { integer, boolean, atom, list, tuple, array, none };

struct Expr;
using ExprPtr = std::shared_ptr<const Expr>;

struct Expr {
  enum class Op : std::uint8_t {
    constant,
    var,        // whole variable (scalar, or list for sequences)
    index,      // args[0] is the subscript of variable (offset, domain)
    neg,
    lnot,
    add, sub, mul, div, mod,
    eq, ne, lt, le, gt, ge,
    land, lor,
    ite,
    tuple,
    list,       // literal [a, b, ...]
    len, head, last, tail, butlast, append, insert, contains, remove,
  };

  Op op = Op::constant;
  ValueSort sort = ValueSort::integer;
  ValueSort elem_sort = ValueSort::none;  // element sort of list-valued expressions
  Value constant = 0;
  bool frame = false;  // variable lives in the thread frame, not in shared state
  int offset = 0;
  DomainPtr domain;    // variable domain for var/index
  std::string name;    // variable name for var/index
  std::vector<ExprPtr> args;
  int line = 0;
};

struct VarDecl {
  std::string name;
  DomainPtr domain;
  std::vector<Value> init;  // one value per slot
  int offset = 0;
};

struct LValue {
  std::string name;
  bool frame = false;
  int offset = 0;
  DomainPtr domain;  // domain of the whole variable
  ExprPtr index;     // set when assigning one element of an array or sequence
};

/// One assignment or compare-and-swap inside an atomic block.
struct Update {
  enum class Kind : std::uint8_t { assign, cas };

  Kind kind = Kind::assign;
  std::vector<LValue> targets;
  std::vector<ExprPtr> values;
  bool destructure = false;  // several targets, one tuple-valued expression
  std::optional<LValue> result;  // cas only
  int line = 0;
};

/// An atomic edge of a method's control-flow graph.
struct Stmt {
  enum class Kind : std::uint8_t { plain, ret };

  ExprPtr guard;  // null means true
  std::vector<Update> updates;
  Kind kind = Kind::plain;
  int target = -1;
  ExprPtr ret_value;
  int line = 0;
};

struct Location {
  std::string name;
  std::vector<Stmt> edges;

  bool is_return() const noexcept;
};

struct Method {
  std::string name;
  std::vector<VarDecl> params;
  std::vector<VarDecl> locals;
  DomainPtr returns;  // null for void methods
  std::vector<Location> locations;
  int entry = 0;
  int frame_size = 0;
};

/// Deterministic, total step function over a finite abstract state.
class SequentialSpec {
 public:
  struct Rule {
    std::string method;
    std::vector<VarDecl> params;
    DomainPtr returns;
    ExprPtr body;  // tuple (state'..., ret) or a single expression
    int frame_size = 0;
  };

  struct Step {
    std::vector<Value> state;
    Value ret = 0;
  };

  std::vector<VarDecl> state;
  int state_size = 0;
  std::vector<Rule> rules;
  std::shared_ptr<const std::vector<std::string>> atoms;

  std::vector<Value> initial() const;
  int rule_index(std::string_view method) const;
  Step step(const std::vector<Value>& state, int rule, const std::vector<Value>& args) const;

  std::string value_text(const Domain& d, Value v) const;
  std::optional<Value> parse_value(const Domain& d, std::string_view text) const;
};

struct ObjectModel {
  std::string name;
  std::shared_ptr<const std::vector<std::string>> atoms;
  std::map<std::string, Value> constants;
  std::vector<VarDecl> shared;
  int shared_size = 0;
  std::vector<Method> methods;
  std::optional<SequentialSpec> seqspec;

  int method_index(std::string_view name) const;
  std::string value_text(const Domain& d, Value v) const;
  std::optional<Value> parse_value(const Domain& d, std::string_view text) const;
};

/// Constants declared with `const` may be overridden by name (e.g. THREADS, OPS).
ObjectModel parse_model(std::string_view text, const std::map<std::string, Value>& overrides = {});
ObjectModel parse_model_file(const std::string& path,
                             const std::map<std::string, Value>& overrides = {});

/// The atomic-block specification object: call, one internal step applying
/// the sequential specification, return.
ObjectModel make_spec(const ObjectModel& model);

/// Text of a value of domain d; "VOID" stands for the absent value.
std::string value_text(const std::vector<std::string>& atoms, const Domain& d, Value v);
std::optional<Value> parse_value(const std::vector<std::string>& atoms, const Domain& d,
                                 std::string_view text);

inline constexpr std::string_view kVoid = "VOID";

// Execution of atomic edges over a flat slot vector.
struct Frame {
  Value* shared;
  Value* locals;
};

Value eval_scalar(const Expr& e, const Frame& f);
void eval_list(const Expr& e, const Frame& f, std::vector<Value>& out);
bool guard_holds(const Stmt& s, const Frame& f);
void apply_updates(const Stmt& s, const Frame& f);

}  // namespace linchk
