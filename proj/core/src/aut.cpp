// Aldebaran (.aut) reader and writer.

#include <algorithm>
#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <tuple>

#include "linchk/errors.hpp"
#include "linchk/lts.hpp"

namespace linchk {

namespace {

class LineCursor {
 public:
  LineCursor(std::string_view text, int line) : text_(text), line_(line) {}

  void skip_ws() {
    while (pos_ < text_.size() && (text_[pos_] == ' ' || text_[pos_] == '\t')) ++pos_;
  }

  void expect(char c, const char* what) {
    skip_ws();
    if (pos_ >= text_.size() || text_[pos_] != c) fail(std::string("expected ") + what);
    ++pos_;
  }

  bool consume_word(std::string_view w) {
    skip_ws();
    if (text_.substr(pos_, w.size()) == w) {
      pos_ += w.size();
      return true;
    }
    return false;
  }

  std::uint64_t number(const char* what) {
    skip_ws();
    std::uint64_t v = 0;
    auto [ptr, ec] = std::from_chars(text_.data() + pos_, text_.data() + text_.size(), v);
    if (ec != std::errc() || ptr == text_.data() + pos_) fail(std::string("expected ") + what);
    pos_ = static_cast<std::size_t>(ptr - text_.data());
    return v;
  }

  std::string label() {
    skip_ws();
    if (pos_ < text_.size() && text_[pos_] == '"') {
      std::size_t close = text_.find('"', pos_ + 1);
      if (close == std::string_view::npos) fail("unbalanced quote in label");
      std::string s(text_.substr(pos_ + 1, close - pos_ - 1));
      pos_ = close + 1;
      return s;
    }
    // Unquoted label: everything up to the last comma.
    std::size_t comma = text_.rfind(',');
    if (comma == std::string_view::npos || comma < pos_) fail("expected label");
    std::string s(text_.substr(pos_, comma - pos_));
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.pop_back();
    if (s.find('"') != std::string::npos) fail("unbalanced quote in label");
    pos_ = comma;
    return s;
  }

  void end() {
    skip_ws();
    if (pos_ != text_.size()) fail("trailing characters");
  }

  [[noreturn]] void fail(const std::string& msg) const {
    throw ParseError(msg, line_, static_cast<int>(pos_) + 1);
  }

 private:
  std::string_view text_;
  int line_;
  std::size_t pos_ = 0;
};

}  // namespace

Lts load_aut(std::istream& in) {
  std::string line;
  int line_no = 0;
  bool have_header = false;
  std::uint64_t init = 0, m = 0, n = 0, seen = 0;
  LtsBuilder builder;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos) continue;
    LineCursor cur(line, line_no);
    if (!have_header) {
      if (!cur.consume_word("des")) cur.fail("malformed header: expected 'des'");
      cur.expect('(', "'(' in header");
      init = cur.number("initial state in header");
      cur.expect(',', "',' in header");
      m = cur.number("transition count in header");
      cur.expect(',', "',' in header");
      n = cur.number("state count in header");
      cur.expect(')', "')' in header");
      cur.end();
      if (n == 0) cur.fail("malformed header: state count must be positive");
      if (init >= n) cur.fail("malformed header: initial state out of range");
      builder.ensure_states(n);
      have_header = true;
      continue;
    }
    cur.expect('(', "'('");
    std::uint64_t src = cur.number("source state");
    cur.expect(',', "','");
    std::string text = cur.label();
    cur.expect(',', "','");
    std::uint64_t dst = cur.number("target state");
    cur.expect(')', "')'");
    cur.end();
    if (src >= n) throw ParseError("source state " + std::to_string(src) + " out of range", line_no);
    if (dst >= n) throw ParseError("target state " + std::to_string(dst) + " out of range", line_no);
    if (++seen > m) throw ParseError("more transitions than declared in header", line_no);
    builder.add(static_cast<StateId>(src), parse_label(text), static_cast<StateId>(dst));
  }
  if (!have_header) throw ParseError("malformed header: missing 'des' line", line_no + 1);
  if (seen != m) {
    throw ParseError("header declares " + std::to_string(m) + " transitions, found " +
                         std::to_string(seen),
                     line_no);
  }
  return std::move(builder).build(static_cast<StateId>(init));
}

Lts load_aut(std::string_view text) {
  std::istringstream in{std::string(text)};
  return load_aut(in);
}

Lts load_aut_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path);
  return load_aut(in);
}

void store_aut(const Lts& lts, std::ostream& out) {
  std::vector<std::string> text(lts.labels().size());
  for (LabelId i = 0; i < text.size(); ++i) text[i] = lts.label(i).aut_text();
  std::vector<const Transition*> order;
  order.reserve(lts.transition_count());
  for (const auto& t : lts.transitions()) order.push_back(&t);
  std::sort(order.begin(), order.end(), [&](const Transition* a, const Transition* b) {
    return std::tie(a->src, text[a->label], a->dst) < std::tie(b->src, text[b->label], b->dst);
  });
  out << "des (" << lts.initial() << ", " << lts.transition_count() << ", " << lts.state_count()
      << ")\n";
  for (const Transition* t : order) {
    out << '(' << t->src << ", \"" << text[t->label] << "\", " << t->dst << ")\n";
  }
}

std::string store_aut(const Lts& lts) {
  std::ostringstream out;
  store_aut(lts, out);
  return out.str();
}

}  // namespace linchk
