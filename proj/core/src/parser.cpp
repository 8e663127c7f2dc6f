// Recursive-descent parser and type checker for the modeling language.

#include <algorithm>
#include <cctype>
#include <functional>
#include <set>
#include <unordered_map>

#include "linchk/errors.hpp"
#include "linchk/modelir.hpp"

namespace linchk {

namespace {

struct Token {
  enum class Kind { ident, number, punct, end };
  Kind kind = Kind::end;
  std::string text;
  long long number = 0;
  int line = 1;
  int col = 1;
};

std::vector<Token> tokenize(std::string_view src) {
  static const char* kLong[] = {":=", "==", "!=", "<=", ">=", "&&", "||", "..", "->"};
  std::vector<Token> out;
  int line = 1, col = 1;
  std::size_t i = 0;
  auto advance = [&](std::size_t n) {
    for (std::size_t k = 0; k < n; ++k) {
      if (src[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
      ++i;
    }
  };
  while (i < src.size()) {
    char c = src[i];
    if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
      advance(1);
      continue;
    }
    if (c == '/' && i + 1 < src.size() && src[i + 1] == '/') {
      while (i < src.size() && src[i] != '\n') advance(1);
      continue;
    }
    if (c == '/' && i + 1 < src.size() && src[i + 1] == '*') {
      int l0 = line, c0 = col;
      advance(2);
      while (i + 1 < src.size() && !(src[i] == '*' && src[i + 1] == '/')) advance(1);
      if (i + 1 >= src.size()) throw ParseError("unterminated comment", l0, c0);
      advance(2);
      continue;
    }
    Token t;
    t.line = line;
    t.col = col;
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t j = i;
      while (j < src.size() && (std::isalnum(static_cast<unsigned char>(src[j])) || src[j] == '_')) ++j;
      t.kind = Token::Kind::ident;
      t.text = std::string(src.substr(i, j - i));
      advance(j - i);
    } else if (std::isdigit(static_cast<unsigned char>(c))) {
      std::size_t j = i;
      while (j < src.size() && std::isdigit(static_cast<unsigned char>(src[j]))) ++j;
      t.kind = Token::Kind::number;
      t.text = std::string(src.substr(i, j - i));
      if (t.text.size() > 9) throw ParseError("integer literal too large", line, col);
      t.number = std::stoll(t.text);
      advance(j - i);
    } else {
      t.kind = Token::Kind::punct;
      bool matched = false;
      for (const char* p : kLong) {
        if (src.substr(i, 2) == p) {
          t.text = p;
          matched = true;
          break;
        }
      }
      if (!matched) {
        if (std::string_view("{}()[],;:=<>+-*/%!|").find(c) == std::string_view::npos) {
          throw ParseError(std::string("unexpected character '") + c + "'", line, col);
        }
        t.text = std::string(1, c);
      }
      advance(t.text.size());
    }
    out.push_back(std::move(t));
  }
  Token end;
  end.line = line;
  end.col = col;
  out.push_back(end);
  return out;
}

const std::set<std::string>& keywords() {
  static const std::set<std::string> k = {
      "object", "shared", "const", "type",  "method", "returns", "local", "atomic",
      "when",   "goto",   "return", "spec", "state",  "on",      "int",   "bool",
      "enum",   "array",  "of",     "seq",  "true",   "false",   "if",    "then",
      "else",   "cas",    "skip"};
  return k;
}

ValueSort sort_of(const Domain& d) {
  switch (d.kind) {
    case Domain::Kind::integer:
      return ValueSort::integer;
    case Domain::Kind::boolean:
      return ValueSort::boolean;
    case Domain::Kind::enumeration:
      return ValueSort::atom;
    case Domain::Kind::sequence:
      return ValueSort::list;
    case Domain::Kind::array:
      return ValueSort::array;
  }
  return ValueSort::none;
}

const char* sort_name(ValueSort s) {
  switch (s) {
    case ValueSort::integer:
      return "int";
    case ValueSort::boolean:
      return "bool";
    case ValueSort::atom:
      return "enum";
    case ValueSort::list:
      return "seq";
    case ValueSort::tuple:
      return "tuple";
    case ValueSort::array:
      return "array";
    case ValueSort::none:
      return "none";
  }
  return "?";
}

struct Shape {
  ValueSort sort;
  ValueSort elem;
};

using Builtin = Expr::Op;

const std::unordered_map<std::string, Builtin>& builtins() {
  static const std::unordered_map<std::string, Builtin> b = {
      {"len", Builtin::len},         {"head", Builtin::head},
      {"last", Builtin::last},       {"tail", Builtin::tail},
      {"butlast", Builtin::butlast}, {"append", Builtin::append},
      {"insert", Builtin::insert},   {"contains", Builtin::contains},
      {"remove", Builtin::remove}};
  return b;
}

class Parser {
 public:
  Parser(std::string_view text, const std::map<std::string, Value>& overrides)
      : toks_(tokenize(text)), overrides_(overrides) {}

  ObjectModel run() {
    expect_kw("object");
    model_.name = ident("object name");
    expect("{");
    while (!peek("}")) {
      if (at_end()) fail("unexpected end of input, missing '}'");
      if (accept_kw("const")) {
        parse_const();
      } else if (accept_kw("type")) {
        parse_type_alias();
      } else if (accept_kw("shared")) {
        parse_shared();
      } else if (accept_kw("method")) {
        parse_method();
      } else if (accept_kw("spec")) {
        parse_spec();
      } else {
        fail("expected 'const', 'type', 'shared', 'method' or 'spec'");
      }
    }
    expect("}");
    if (!at_end()) fail("trailing input after object");
    if (model_.seqspec) {
      for (const auto& m : model_.methods) {
        if (model_.seqspec->rule_index(m.name) < 0) {
          throw ParseError("spec has no rule for method " + m.name, spec_line_);
        }
      }
    }
    auto atoms = std::make_shared<const std::vector<std::string>>(atoms_);
    model_.atoms = atoms;
    if (model_.seqspec) model_.seqspec->atoms = atoms;
    return std::move(model_);
  }

 private:
  // ---- token helpers
  const Token& cur() const { return toks_[pos_]; }
  bool at_end() const { return cur().kind == Token::Kind::end; }
  bool peek(std::string_view p) const {
    return cur().kind == Token::Kind::punct && cur().text == p;
  }
  bool peek_kw(std::string_view k) const {
    return cur().kind == Token::Kind::ident && cur().text == k;
  }
  bool accept(std::string_view p) {
    if (peek(p)) {
      ++pos_;
      return true;
    }
    return false;
  }
  bool accept_kw(std::string_view k) {
    if (peek_kw(k)) {
      ++pos_;
      return true;
    }
    return false;
  }
  void expect(std::string_view p) {
    if (!accept(p)) fail("expected '" + std::string(p) + "'");
  }
  void expect_kw(std::string_view k) {
    if (!accept_kw(k)) fail("expected '" + std::string(k) + "'");
  }
  std::string ident(const char* what) {
    if (cur().kind != Token::Kind::ident || keywords().count(cur().text)) {
      fail(std::string("expected ") + what);
    }
    return toks_[pos_++].text;
  }
  [[noreturn]] void fail(const std::string& msg) const {
    std::string got = at_end() ? "end of input" : "'" + cur().text + "'";
    throw ParseError(msg + " (found " + got + ")", cur().line, cur().col);
  }
  [[noreturn]] void fail_at(const Token& t, const std::string& msg) const {
    throw ParseError(msg, t.line, t.col);
  }

  // ---- constants and domains
  long long cexpr() { return cadd(); }
  long long cadd() {
    long long v = cmul();
    while (true) {
      if (accept("+")) {
        v += cmul();
      } else if (accept("-")) {
        v -= cmul();
      } else {
        return v;
      }
    }
  }
  long long cmul() {
    long long v = cunary();
    while (true) {
      if (accept("*")) {
        v *= cunary();
      } else if (accept("/") || accept("%")) {
        bool is_div = toks_[pos_ - 1].text == "/";
        const Token& t = cur();
        long long d = cunary();
        if (d == 0) fail_at(t, "division by zero in constant expression");
        v = is_div ? v / d : v % d;
      } else {
        return v;
      }
    }
  }
  long long cunary() {
    if (accept("-")) return -cunary();
    if (accept("(")) {
      long long v = cexpr();
      expect(")");
      return v;
    }
    if (cur().kind == Token::Kind::number) return toks_[pos_++].number;
    if (cur().kind == Token::Kind::ident) {
      auto it = model_.constants.find(cur().text);
      if (it != model_.constants.end()) {
        ++pos_;
        return it->second;
      }
      fail("undeclared constant '" + cur().text + "'");
    }
    fail("expected constant expression");
  }

  Value checked_value(long long v, const Token& at) const {
    if (v < -1'000'000'000LL || v > 1'000'000'000LL) fail_at(at, "constant out of range");
    return static_cast<Value>(v);
  }

  void parse_const() {
    const Token& at = cur();
    std::string name = ident("constant name");
    if (model_.constants.count(name)) fail_at(at, "duplicate constant " + name);
    expect("=");
    long long v = cexpr();
    expect(";");
    auto o = overrides_.find(name);
    model_.constants[name] = o != overrides_.end() ? o->second : checked_value(v, at);
  }

  void parse_type_alias() {
    const Token& at = cur();
    std::string name = ident("type name");
    if (aliases_.count(name)) fail_at(at, "duplicate type " + name);
    expect("=");
    aliases_[name] = domain();
    expect(";");
  }

  Value intern_atom(const std::string& name) {
    auto it = atom_index_.find(name);
    if (it != atom_index_.end()) return it->second;
    Value id = static_cast<Value>(atoms_.size());
    atoms_.push_back(name);
    atom_index_[name] = id;
    return id;
  }

  DomainPtr domain() {
    const Token& at = cur();
    auto d = std::make_shared<Domain>();
    if (accept_kw("int")) {
      if (!accept("[")) fail_at(at, "unbounded domain: int needs a range int[lo..hi]");
      d->kind = Domain::Kind::integer;
      d->lo = checked_value(cexpr(), at);
      expect("..");
      d->hi = checked_value(cexpr(), at);
      expect("]");
      if (d->lo > d->hi) fail_at(at, "empty integer range");
    } else if (accept_kw("bool")) {
      d->kind = Domain::Kind::boolean;
    } else if (accept_kw("enum")) {
      d->kind = Domain::Kind::enumeration;
      expect("{");
      do {
        std::string a = ident("enumeration value");
        Value id = intern_atom(a);
        if (std::find(d->atoms.begin(), d->atoms.end(), id) != d->atoms.end()) {
          fail_at(at, "duplicate enumeration value " + a);
        }
        d->atoms.push_back(id);
      } while (accept(","));
      expect("}");
    } else if (accept_kw("array") || accept_kw("seq")) {
      bool is_seq = toks_[pos_ - 1].text == "seq";
      d->kind = is_seq ? Domain::Kind::sequence : Domain::Kind::array;
      expect("[");
      long long n = cexpr();
      expect("]");
      if (n < (is_seq ? 0 : 1) || n > 4096) fail_at(at, "bad size for array or sequence");
      d->size = static_cast<int>(n);
      expect_kw("of");
      d->element = domain();
      if (!d->element->scalar()) fail_at(at, "elements must be scalar");
    } else if (cur().kind == Token::Kind::ident && aliases_.count(cur().text)) {
      return aliases_[toks_[pos_++].text];
    } else {
      fail("expected a domain");
    }
    return d;
  }

  // ---- initial values
  std::vector<Value> initial_value(const Domain& d, const Token& at) {
    auto scalar_init = [&](const Domain& sd) -> Value {
      const Token& t = cur();
      if (accept_kw("true")) return check_fits(sd, 1, ValueSort::boolean, t);
      if (accept_kw("false")) return check_fits(sd, 0, ValueSort::boolean, t);
      if (cur().kind == Token::Kind::ident && !model_.constants.count(cur().text)) {
        std::string a = ident("initial value");
        auto it = atom_index_.find(a);
        if (it == atom_index_.end()) fail_at(t, "undeclared identifier '" + a + "'");
        return check_fits(sd, it->second, ValueSort::atom, t);
      }
      return check_fits(sd, checked_value(cexpr(), t), ValueSort::integer, t);
    };
    std::vector<Value> out;
    if (d.scalar()) {
      out.push_back(scalar_init(d));
      return out;
    }
    if (accept("[")) {
      std::vector<Value> items;
      if (!peek("]")) {
        do {
          items.push_back(scalar_init(*d.element));
        } while (accept(","));
      }
      expect("]");
      if (d.kind == Domain::Kind::array) {
        if (static_cast<int>(items.size()) != d.size) fail_at(at, "array initializer has wrong length");
        return items;
      }
      if (static_cast<int>(items.size()) > d.size) fail_at(at, "sequence initializer too long");
      out.push_back(static_cast<Value>(items.size()));
      out.insert(out.end(), items.begin(), items.end());
      out.resize(d.slot_count(), 0);
      return out;
    }
    if (d.kind == Domain::Kind::sequence) fail_at(at, "sequence initializer must be a list");
    Value fill = scalar_init(*d.element);
    out.assign(d.size, fill);
    return out;
  }

  std::vector<Value> default_init(const Domain& d) {
    if (d.scalar()) return {d.default_value()};
    if (d.kind == Domain::Kind::array) return std::vector<Value>(d.size, d.element->default_value());
    return std::vector<Value>(d.slot_count(), 0);
  }

  Value check_fits(const Domain& d, Value v, ValueSort s, const Token& at) const {
    if (sort_of(d) != s) {
      fail_at(at, std::string("domain mismatch: ") + sort_name(s) + " value for " +
                      sort_name(sort_of(d)) + " domain");
    }
    if (!d.contains(v)) {
      std::string text = s == ValueSort::atom ? atoms_[v] : std::to_string(v);
      fail_at(at, "domain mismatch: " + text + " is not in " + d.describe());
    }
    return v;
  }

  VarDecl var_decl(const Token& at, std::string name, int& offset, bool allow_init) {
    VarDecl v;
    v.name = std::move(name);
    expect(":");
    v.domain = domain();
    if (allow_init && accept("=")) {
      v.init = initial_value(*v.domain, at);
    } else {
      v.init = default_init(*v.domain);
    }
    v.offset = offset;
    offset += v.domain->slot_count();
    return v;
  }

  void parse_shared() {
    const Token& at = cur();
    std::string name = ident("variable name");
    for (const auto& v : model_.shared) {
      if (v.name == name) fail_at(at, "duplicate shared variable " + name);
    }
    model_.shared.push_back(var_decl(at, name, model_.shared_size, true));
    expect(";");
  }

  // ---- expressions
  struct Scope {
    const std::vector<VarDecl>* frame = nullptr;
    const std::vector<VarDecl>* shared = nullptr;
  };

  const VarDecl* find_var(const std::vector<VarDecl>* vars, const std::string& n) const {
    if (!vars) return nullptr;
    for (const auto& v : *vars) {
      if (v.name == n) return &v;
    }
    return nullptr;
  }

  std::shared_ptr<Expr> node(Expr::Op op, ValueSort sort, const Token& at) {
    auto e = std::make_shared<Expr>();
    e->op = op;
    e->sort = sort;
    e->line = at.line;
    return e;
  }

  void need(const Expr& e, ValueSort s, const Token& at, const char* ctx) const {
    if (e.sort != s) {
      fail_at(at, std::string("type error in ") + ctx + ": expected " + sort_name(s) + ", got " +
                      sort_name(e.sort));
    }
  }

  ExprPtr expr(const Scope& sc) {
    const Token& at = cur();
    if (accept_kw("if")) {
      auto c = expr(sc);
      need(*c, ValueSort::boolean, at, "condition");
      expect_kw("then");
      auto a = expr(sc);
      expect_kw("else");
      auto b = expr(sc);
      if (a->sort != b->sort) fail_at(at, "branches of if have different types");
      if (a->sort == ValueSort::tuple) tuple_shape(*a, at), same_shape(*a, *b, at);
      auto e = node(Expr::Op::ite, a->sort, at);
      e->elem_sort = a->elem_sort != ValueSort::none ? a->elem_sort : b->elem_sort;
      e->args = {c, a, b};
      return e;
    }
    return or_expr(sc);
  }

  ExprPtr binary(Expr::Op op, ValueSort sort, ExprPtr a, ExprPtr b, const Token& at) {
    auto e = node(op, sort, at);
    e->args = {std::move(a), std::move(b)};
    return e;
  }

  ExprPtr or_expr(const Scope& sc) {
    auto a = and_expr(sc);
    while (peek("||")) {
      const Token& at = cur();
      ++pos_;
      auto b = and_expr(sc);
      need(*a, ValueSort::boolean, at, "'||'");
      need(*b, ValueSort::boolean, at, "'||'");
      a = binary(Expr::Op::lor, ValueSort::boolean, a, b, at);
    }
    return a;
  }

  ExprPtr and_expr(const Scope& sc) {
    auto a = cmp_expr(sc);
    while (peek("&&")) {
      const Token& at = cur();
      ++pos_;
      auto b = cmp_expr(sc);
      need(*a, ValueSort::boolean, at, "'&&'");
      need(*b, ValueSort::boolean, at, "'&&'");
      a = binary(Expr::Op::land, ValueSort::boolean, a, b, at);
    }
    return a;
  }

  ExprPtr cmp_expr(const Scope& sc) {
    auto a = add_expr(sc);
    static const std::pair<const char*, Expr::Op> ops[] = {
        {"==", Expr::Op::eq}, {"!=", Expr::Op::ne}, {"<=", Expr::Op::le},
        {">=", Expr::Op::ge}, {"<", Expr::Op::lt},  {">", Expr::Op::gt}};
    for (const auto& [text, op] : ops) {
      if (peek(text)) {
        const Token& at = cur();
        ++pos_;
        auto b = add_expr(sc);
        if (op == Expr::Op::eq || op == Expr::Op::ne) {
          if (a->sort != b->sort || a->sort == ValueSort::list || a->sort == ValueSort::tuple ||
              a->sort == ValueSort::array) {
            fail_at(at, "type error: cannot compare " + std::string(sort_name(a->sort)) + " with " +
                            sort_name(b->sort));
          }
        } else {
          need(*a, ValueSort::integer, at, "comparison");
          need(*b, ValueSort::integer, at, "comparison");
        }
        return binary(op, ValueSort::boolean, a, b, at);
      }
    }
    return a;
  }

  ExprPtr add_expr(const Scope& sc) {
    auto a = mul_expr(sc);
    while (peek("+") || peek("-")) {
      const Token& at = cur();
      Expr::Op op = cur().text == "+" ? Expr::Op::add : Expr::Op::sub;
      ++pos_;
      auto b = mul_expr(sc);
      need(*a, ValueSort::integer, at, "arithmetic");
      need(*b, ValueSort::integer, at, "arithmetic");
      a = binary(op, ValueSort::integer, a, b, at);
    }
    return a;
  }

  ExprPtr mul_expr(const Scope& sc) {
    auto a = unary_expr(sc);
    while (peek("*") || peek("/") || peek("%")) {
      const Token& at = cur();
      Expr::Op op = cur().text == "*" ? Expr::Op::mul : cur().text == "/" ? Expr::Op::div : Expr::Op::mod;
      ++pos_;
      auto b = unary_expr(sc);
      need(*a, ValueSort::integer, at, "arithmetic");
      need(*b, ValueSort::integer, at, "arithmetic");
      a = binary(op, ValueSort::integer, a, b, at);
    }
    return a;
  }

  ExprPtr unary_expr(const Scope& sc) {
    const Token& at = cur();
    if (accept("-")) {
      auto a = unary_expr(sc);
      need(*a, ValueSort::integer, at, "negation");
      auto e = node(Expr::Op::neg, ValueSort::integer, at);
      e->args = {a};
      return e;
    }
    if (accept("!")) {
      auto a = unary_expr(sc);
      need(*a, ValueSort::boolean, at, "'!'");
      auto e = node(Expr::Op::lnot, ValueSort::boolean, at);
      e->args = {a};
      return e;
    }
    return primary(sc);
  }

  ExprPtr var_ref(const VarDecl& v, bool frame, const Token& at) {
    auto e = node(Expr::Op::var, sort_of(*v.domain), at);
    e->frame = frame;
    e->offset = v.offset;
    e->domain = v.domain;
    e->name = v.name;
    if (!v.domain->scalar()) e->elem_sort = sort_of(*v.domain->element);
    return e;
  }

  ExprPtr primary(const Scope& sc) {
    const Token& at = cur();
    if (cur().kind == Token::Kind::number) {
      auto e = node(Expr::Op::constant, ValueSort::integer, at);
      e->constant = checked_value(toks_[pos_++].number, at);
      return e;
    }
    if (accept_kw("true") || accept_kw("false")) {
      auto e = node(Expr::Op::constant, ValueSort::boolean, at);
      e->constant = toks_[pos_ - 1].text == "true";
      return e;
    }
    if (accept("(")) {
      if (accept(")")) return node(Expr::Op::tuple, ValueSort::tuple, at);
      std::vector<ExprPtr> items{expr(sc)};
      while (accept(",")) items.push_back(expr(sc));
      expect(")");
      if (items.size() == 1) return items[0];
      for (const auto& i : items) {
        if (i->sort == ValueSort::tuple || i->sort == ValueSort::array) {
          fail_at(at, "tuple components must be scalars or sequences");
        }
      }
      auto e = node(Expr::Op::tuple, ValueSort::tuple, at);
      e->args = std::move(items);
      return e;
    }
    if (accept("[")) {
      auto e = node(Expr::Op::list, ValueSort::list, at);
      if (!peek("]")) {
        do {
          auto item = expr(sc);
          if (item->sort != ValueSort::integer && item->sort != ValueSort::boolean &&
              item->sort != ValueSort::atom) {
            fail_at(at, "list elements must be scalars");
          }
          if (e->elem_sort != ValueSort::none && e->elem_sort != item->sort) {
            fail_at(at, "list elements have different types");
          }
          e->elem_sort = item->sort;
          e->args.push_back(item);
        } while (accept(","));
      }
      expect("]");
      return e;
    }
    if (cur().kind != Token::Kind::ident || keywords().count(cur().text)) fail("expected expression");
    std::string name = toks_[pos_++].text;

    if (peek("(")) {
      auto b = builtins().find(name);
      if (b == builtins().end()) fail_at(at, "unknown function '" + name + "'");
      ++pos_;
      std::vector<ExprPtr> args;
      if (!peek(")")) {
        do {
          args.push_back(expr(sc));
        } while (accept(","));
      }
      expect(")");
      return builtin_call(b->second, name, std::move(args), at);
    }

    const VarDecl* v = find_var(sc.frame, name);
    bool frame = v != nullptr;
    if (!v) v = find_var(sc.shared, name);
    if (v) {
      auto base = var_ref(*v, frame, at);
      if (accept("[")) {
        if (v->domain->scalar()) fail_at(at, "'" + name + "' is not an array or sequence");
        auto idx = expr(sc);
        need(*idx, ValueSort::integer, at, "index");
        expect("]");
        auto e = node(Expr::Op::index, sort_of(*v->domain->element), at);
        e->frame = frame;
        e->offset = v->offset;
        e->domain = v->domain;
        e->name = v->name;
        e->args = {idx};
        return e;
      }
      return base;
    }
    auto c = model_.constants.find(name);
    if (c != model_.constants.end()) {
      auto e = node(Expr::Op::constant, ValueSort::integer, at);
      e->constant = c->second;
      return e;
    }
    auto a = atom_index_.find(name);
    if (a != atom_index_.end()) {
      auto e = node(Expr::Op::constant, ValueSort::atom, at);
      e->constant = a->second;
      return e;
    }
    fail_at(at, "undeclared identifier '" + name + "'");
  }

  ExprPtr builtin_call(Expr::Op op, const std::string& name, std::vector<ExprPtr> args,
                       const Token& at) {
    auto arity = [&](std::size_t n) {
      if (args.size() != n) fail_at(at, name + " expects " + std::to_string(n) + " argument(s)");
    };
    auto list_arg = [&](const ExprPtr& a) {
      if (a->sort != ValueSort::list) fail_at(at, name + " expects a sequence");
    };
    std::shared_ptr<Expr> e;
    switch (op) {
      case Expr::Op::len:
        arity(1);
        list_arg(args[0]);
        e = node(op, ValueSort::integer, at);
        break;
      case Expr::Op::head:
      case Expr::Op::last:
        arity(1);
        list_arg(args[0]);
        if (args[0]->elem_sort == ValueSort::none) fail_at(at, name + " of an untyped empty list");
        e = node(op, args[0]->elem_sort, at);
        break;
      case Expr::Op::tail:
      case Expr::Op::butlast:
        arity(1);
        list_arg(args[0]);
        e = node(op, ValueSort::list, at);
        e->elem_sort = args[0]->elem_sort;
        break;
      case Expr::Op::append:
      case Expr::Op::insert:
      case Expr::Op::remove:
      case Expr::Op::contains: {
        arity(2);
        list_arg(args[0]);
        ValueSort es = args[0]->elem_sort;
        if (es != ValueSort::none && es != args[1]->sort) {
          fail_at(at, "type error in " + name + ": element type mismatch");
        }
        if (op == Expr::Op::contains) {
          e = node(op, ValueSort::boolean, at);
        } else {
          e = node(op, ValueSort::list, at);
          e->elem_sort = args[1]->sort;
        }
        break;
      }
      default:
        fail_at(at, "unknown function '" + name + "'");
    }
    e->args = std::move(args);
    return e;
  }

  std::vector<Shape> tuple_shape(const Expr& e, const Token& at) const {
    if (e.op == Expr::Op::ite) {
      auto a = tuple_shape(*e.args[1], at);
      auto b = tuple_shape(*e.args[2], at);
      if (a.size() != b.size()) fail_at(at, "branches of if have different tuple sizes");
      for (std::size_t i = 0; i < a.size(); ++i) {
        if (a[i].sort != b[i].sort) fail_at(at, "branches of if have different component types");
        if (a[i].elem == ValueSort::none) a[i].elem = b[i].elem;
      }
      return a;
    }
    if (e.op == Expr::Op::tuple) {
      std::vector<Shape> out;
      for (const auto& c : e.args) out.push_back({c->sort, c->elem_sort});
      return out;
    }
    return {{e.sort, e.elem_sort}};
  }

  void same_shape(const Expr& a, const Expr& b, const Token& at) const {
    auto sa = tuple_shape(a, at);
    auto sb = tuple_shape(b, at);
    if (sa.size() != sb.size()) fail_at(at, "branches of if have different tuple sizes");
  }

  /// Leaves of ite/tuple for static domain checks of constants.
  void check_constant_leaves(const Expr& e, const Domain& d, const Token& at) const {
    if (e.op == Expr::Op::ite) {
      check_constant_leaves(*e.args[1], d, at);
      check_constant_leaves(*e.args[2], d, at);
      return;
    }
    if (e.op == Expr::Op::constant && d.scalar()) check_fits(d, e.constant, e.sort, at);
    if (e.op == Expr::Op::list && !d.scalar()) {
      for (const auto& a : e.args) check_constant_leaves(*a, *d.element, at);
    }
  }

  void check_assignable(const Domain& target_domain, bool indexed, const Expr& value,
                        const Token& at, const std::string& name) const {
    const Domain& d = indexed ? *target_domain.element : target_domain;
    ValueSort want = sort_of(d);
    if (want == ValueSort::array) fail_at(at, "cannot assign whole array " + name);
    if (value.sort != want) {
      fail_at(at, std::string("domain mismatch: cannot assign ") + sort_name(value.sort) + " to " +
                      name + " of type " + sort_name(want));
    }
    if (want == ValueSort::list && value.elem_sort != ValueSort::none &&
        value.elem_sort != sort_of(*d.element)) {
      fail_at(at, "domain mismatch: sequence element type for " + name);
    }
    check_constant_leaves(value, d, at);
  }

  // ---- statements
  LValue lvalue(const Scope& sc) {
    const Token& at = cur();
    std::string name = ident("variable");
    const VarDecl* v = find_var(sc.frame, name);
    bool frame = v != nullptr;
    if (!v) v = find_var(sc.shared, name);
    if (!v) fail_at(at, "undeclared identifier '" + name + "'");
    LValue lv;
    lv.name = name;
    lv.frame = frame;
    lv.offset = v->offset;
    lv.domain = v->domain;
    if (accept("[")) {
      if (v->domain->scalar()) fail_at(at, "'" + name + "' is not an array or sequence");
      lv.index = expr(sc);
      need(*lv.index, ValueSort::integer, at, "index");
      expect("]");
    }
    return lv;
  }

  const Domain& lvalue_slot_domain(const LValue& lv) const {
    return lv.index ? *lv.domain->element : *lv.domain;
  }

  Update cas_update(const Scope& sc, const Token& at) {
    Update u;
    u.kind = Update::Kind::cas;
    u.line = at.line;
    expect("(");
    LValue target = lvalue(sc);
    const Domain& td = lvalue_slot_domain(target);
    if (!td.scalar()) fail_at(at, "cas target must be scalar");
    expect(",");
    auto expected = expr(sc);
    expect(",");
    auto desired = expr(sc);
    expect(")");
    check_assignable(*target.domain, target.index != nullptr, *desired, at, target.name);
    if (expected->sort != sort_of(td)) fail_at(at, "type error in cas: expected value type");
    u.targets.push_back(std::move(target));
    u.values = {expected, desired};
    return u;
  }

  Update statement(const Scope& sc) {
    const Token& at = cur();
    if (accept_kw("cas")) {
      Update u = cas_update(sc, at);
      expect(";");
      return u;
    }
    std::vector<LValue> targets{lvalue(sc)};
    while (accept(",")) targets.push_back(lvalue(sc));
    expect(":=");
    if (accept_kw("cas")) {
      if (targets.size() != 1) fail_at(at, "cas assigns exactly one result");
      Update u = cas_update(sc, at);
      const Domain& rd = lvalue_slot_domain(targets[0]);
      if (rd.kind != Domain::Kind::boolean) fail_at(at, "cas result must be bool");
      u.result = std::move(targets[0]);
      expect(";");
      return u;
    }
    Update u;
    u.line = at.line;
    std::vector<ExprPtr> values{expr(sc)};
    while (accept(",")) values.push_back(expr(sc));
    expect(";");
    if (values.size() == targets.size()) {
      for (std::size_t i = 0; i < values.size(); ++i) {
        check_assignable(*targets[i].domain, targets[i].index != nullptr, *values[i], at,
                         targets[i].name);
      }
    } else if (values.size() == 1 && values[0]->sort == ValueSort::tuple) {
      auto shape = tuple_shape(*values[0], at);
      if (shape.size() != targets.size()) fail_at(at, "tuple size does not match targets");
      u.destructure = true;
      for (std::size_t i = 0; i < targets.size(); ++i) {
        const Domain& d = lvalue_slot_domain(targets[i]);
        if (sort_of(d) != shape[i].sort) {
          fail_at(at, "domain mismatch in tuple assignment to " + targets[i].name);
        }
      }
    } else {
      fail_at(at, "number of values does not match number of targets");
    }
    u.targets = std::move(targets);
    u.values = std::move(values);
    return u;
  }

  // ---- methods
  struct PendingGoto {
    Stmt* stmt;
    std::string target;
    Token at;
  };

  void parse_method() {
    const Token& at = cur();
    Method m;
    m.name = ident("method name");
    if (model_.method_index(m.name) >= 0) fail_at(at, "duplicate method " + m.name);
    if (model_.seqspec) fail_at(at, "methods must precede the spec block");
    int offset = 0;
    expect("(");
    if (!peek(")")) {
      do {
        const Token& pt = cur();
        std::string pn = ident("parameter name");
        if (find_var(&m.params, pn)) fail_at(pt, "duplicate parameter " + pn);
        VarDecl p = var_decl(pt, pn, offset, false);
        if (!p.domain->scalar()) fail_at(pt, "parameters must be scalar");
        m.params.push_back(std::move(p));
      } while (accept(","));
    }
    expect(")");
    if (accept_kw("returns")) {
      m.returns = domain();
      if (!m.returns->scalar()) fail_at(at, "return domain must be scalar");
    }
    expect("{");
    while (accept_kw("local")) {
      const Token& lt = cur();
      std::string ln = ident("local name");
      if (find_var(&m.params, ln) || find_var(&m.locals, ln)) fail_at(lt, "duplicate local " + ln);
      m.locals.push_back(var_decl(lt, ln, offset, true));
      expect(";");
    }
    m.frame_size = offset;

    std::vector<VarDecl> frame_vars = m.params;
    frame_vars.insert(frame_vars.end(), m.locals.begin(), m.locals.end());
    Scope sc{&frame_vars, &model_.shared};

    std::vector<std::vector<std::pair<std::string, Token>>> gotos;  // per location, per edge
    std::unordered_map<std::string, int> loc_index;
    std::vector<int> loc_line;
    while (!accept("}")) {
      if (at_end()) fail("unexpected end of input in method " + m.name);
      const Token& lt = cur();
      std::string ln = ident("location label");
      if (loc_index.count(ln)) fail_at(lt, "duplicate location " + ln);
      expect(":");
      loc_index[ln] = static_cast<int>(m.locations.size());
      m.locations.push_back(Location{ln, {}});
      loc_line.push_back(lt.line);
      gotos.emplace_back();
      std::size_t li = m.locations.size() - 1;
      do {
        parse_edge(m, li, sc, gotos, loc_index, loc_line);
      } while (accept("|"));
      expect(";");
    }
    if (m.locations.empty()) fail_at(at, "method " + m.name + " has no locations");

    // Resolve goto targets.
    for (std::size_t li = 0; li < m.locations.size(); ++li) {
      for (std::size_t ei = 0; ei < m.locations[li].edges.size(); ++ei) {
        Stmt& s = m.locations[li].edges[ei];
        const auto& [target, tok] = gotos[li][ei];
        if (s.kind == Stmt::Kind::plain && s.target < 0) {
          auto it = loc_index.find(target);
          if (it == loc_index.end()) fail_at(tok, "undeclared location '" + target + "'");
          s.target = it->second;
        }
      }
    }

    // Every location must be reachable from the entry.
    std::vector<char> seen(m.locations.size(), 0);
    std::vector<int> stack{0};
    seen[0] = 1;
    while (!stack.empty()) {
      int l = stack.back();
      stack.pop_back();
      for (const auto& s : m.locations[l].edges) {
        if (s.kind == Stmt::Kind::plain && !seen[s.target]) {
          seen[s.target] = 1;
          stack.push_back(s.target);
        }
      }
    }
    for (std::size_t li = 0; li < m.locations.size(); ++li) {
      if (!seen[li]) {
        throw ParseError("location " + m.locations[li].name + " of " + m.name +
                             " is unreachable from the entry",
                         loc_line[li]);
      }
    }
    model_.methods.push_back(std::move(m));
  }

  void parse_return(Stmt& s, const Method& m, const Scope& sc, const Token& at) {
    s.kind = Stmt::Kind::ret;
    if (!peek(";") && !peek("|")) {
      if (!m.returns) fail_at(at, "void method " + m.name + " returns a value");
      s.ret_value = expr(sc);
      check_assignable(*m.returns, false, *s.ret_value, at, "return value of " + m.name);
    } else if (m.returns) {
      fail_at(at, "method " + m.name + " must return a value");
    }
  }

  void parse_edge(Method& m, std::size_t li, const Scope& sc,
                  std::vector<std::vector<std::pair<std::string, Token>>>& gotos,
                  std::unordered_map<std::string, int>& loc_index, std::vector<int>& loc_line) {
    const Token& at = cur();
    Stmt s;
    s.line = at.line;
    if (accept_kw("atomic")) {
      expect("{");
      if (accept_kw("when")) {
        s.guard = expr(sc);
        need(*s.guard, ValueSort::boolean, at, "guard");
        expect(";");
      }
      while (!accept("}")) {
        if (accept_kw("skip")) {
          expect(";");
          continue;
        }
        s.updates.push_back(statement(sc));
      }
      if (accept_kw("goto")) {
        const Token& gt = cur();
        std::string target = ident("location label");
        m.locations[li].edges.push_back(std::move(s));
        gotos[li].emplace_back(target, gt);
        return;
      }
      if (accept_kw("return")) {
        // Internal step, then a separate visible return.
        std::string name = m.locations[li].name + "_ret";
        while (loc_index.count(name)) name += "_";
        Stmt r;
        r.line = at.line;
        parse_return(r, m, sc, at);
        Location ret_loc{name, {}};
        ret_loc.edges.push_back(std::move(r));
        int idx = static_cast<int>(m.locations.size());
        loc_index[name] = idx;
        s.target = idx;
        m.locations[li].edges.push_back(std::move(s));
        gotos[li].emplace_back(name, at);
        m.locations.push_back(std::move(ret_loc));
        loc_line.push_back(at.line);
        gotos.emplace_back();
        gotos.back().emplace_back(std::string(), at);
        return;
      }
      fail("expected 'goto' or 'return' after atomic block");
    }
    if (accept_kw("when")) {
      s.guard = expr(sc);
      need(*s.guard, ValueSort::boolean, at, "guard");
      expect_kw("return");
      parse_return(s, m, sc, at);
      m.locations[li].edges.push_back(std::move(s));
      gotos[li].emplace_back(std::string(), at);
      return;
    }
    if (accept_kw("return")) {
      parse_return(s, m, sc, at);
      m.locations[li].edges.push_back(std::move(s));
      gotos[li].emplace_back(std::string(), at);
      return;
    }
    fail("expected 'atomic', 'when' or 'return'");
  }

  // ---- sequential specification
  void parse_spec() {
    spec_line_ = toks_[pos_ - 1].line;
    if (model_.seqspec) fail("duplicate spec block");
    SequentialSpec spec;
    expect("{");
    while (accept_kw("state")) {
      const Token& at = cur();
      std::string name = ident("state variable");
      if (find_var(&spec.state, name)) fail_at(at, "duplicate state variable " + name);
      VarDecl v = var_decl(at, name, spec.state_size, true);
      if (v.domain->kind == Domain::Kind::array) fail_at(at, "spec state must be scalar or seq");
      spec.state.push_back(std::move(v));
      expect(";");
    }
    while (accept_kw("on")) {
      const Token& at = cur();
      std::string mname = ident("method name");
      int mi = model_.method_index(mname);
      if (mi < 0) fail_at(at, "spec rule for undeclared method " + mname);
      if (spec.rule_index(mname) >= 0) fail_at(at, "duplicate spec rule for " + mname);
      const Method& m = model_.methods[mi];
      SequentialSpec::Rule rule;
      rule.method = mname;
      rule.returns = m.returns;
      expect("(");
      std::size_t k = 0;
      if (!peek(")")) {
        do {
          const Token& pt = cur();
          std::string pn = ident("parameter name");
          if (k >= m.params.size()) fail_at(pt, "too many parameters in spec rule for " + mname);
          VarDecl p = m.params[k++];
          p.name = pn;
          rule.params.push_back(std::move(p));
        } while (accept(","));
      }
      expect(")");
      if (k != m.params.size()) fail_at(at, "spec rule for " + mname + " has wrong arity");
      for (const auto& p : rule.params) {
        rule.frame_size = std::max(rule.frame_size, p.offset + p.domain->slot_count());
      }
      expect("->");
      Scope sc{&rule.params, &spec.state};
      const Token& bt = cur();
      rule.body = expr(sc);
      expect(";");

      std::vector<const Domain*> want;
      for (const auto& v : spec.state) want.push_back(v.domain.get());
      if (m.returns) want.push_back(m.returns.get());
      auto shape = tuple_shape(*rule.body, bt);
      if (shape.size() != want.size()) {
        fail_at(bt, "spec rule for " + mname + " must yield " + std::to_string(want.size()) +
                        " component(s)");
      }
      for (std::size_t i = 0; i < want.size(); ++i) {
        if (sort_of(*want[i]) != shape[i].sort) {
          fail_at(bt, "domain mismatch in component " + std::to_string(i + 1) + " of spec rule for " +
                          mname);
        }
      }
      check_rule_constants(*rule.body, want, bt);
      spec.rules.push_back(std::move(rule));
    }
    expect("}");
    model_.seqspec = std::move(spec);
  }

  void check_rule_constants(const Expr& e, const std::vector<const Domain*>& want, const Token& at) {
    if (e.op == Expr::Op::ite) {
      check_rule_constants(*e.args[1], want, at);
      check_rule_constants(*e.args[2], want, at);
      return;
    }
    if (e.op == Expr::Op::tuple) {
      for (std::size_t i = 0; i < e.args.size() && i < want.size(); ++i) {
        check_constant_leaves(*e.args[i], *want[i], at);
      }
      return;
    }
    if (want.size() == 1) check_constant_leaves(e, *want[0], at);
  }

  std::vector<Token> toks_;
  std::size_t pos_ = 0;
  const std::map<std::string, Value>& overrides_;
  ObjectModel model_;
  std::vector<std::string> atoms_;
  std::unordered_map<std::string, Value> atom_index_;
  std::unordered_map<std::string, DomainPtr> aliases_;
  int spec_line_ = 0;
};

}  // namespace

ObjectModel parse_model(std::string_view text, const std::map<std::string, Value>& overrides) {
  Parser p(text, overrides);
  return p.run();
}

}  // namespace linchk
