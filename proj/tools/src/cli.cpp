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

#include "linchk/cli.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "linchk/bench.hpp"
#include "linchk/bisim.hpp"
#include "linchk/errors.hpp"
#include "linchk/explorer.hpp"
#include "linchk/progress.hpp"
#include "linchk/refine.hpp"

namespace linchk {

namespace {

/// Bad input detected after argument parsing (unreadable file, bad flag combination).
struct InputError : Error {
  using Error::Error;
};

struct RunOptions {
  CLI::Option* threads_opt = nullptr;
  CLI::Option* ops_opt = nullptr;
  CLI::Option* values_opt = nullptr;
  CLI::Option* max_states_opt = nullptr;
  int threads = 2;
  int ops = 2;
  int values = 0;
  std::size_t max_states = 10'000'000;
  std::string output;
  std::string report = "text";
  std::string eq = "branching";
};

void add_bounds(CLI::App& cmd, RunOptions& o) {
  o.threads_opt = cmd.add_option("-k,--threads", o.threads, "client threads")
                      ->check(CLI::PositiveNumber);
  o.ops_opt = cmd.add_option("--ops", o.ops, "operations per thread")->check(CLI::PositiveNumber);
  o.values_opt = cmd.add_option("--values", o.values, "argument values per parameter (0: distinct)")
                     ->check(CLI::NonNegativeNumber);
  o.max_states_opt =
      cmd.add_option("--max-states", o.max_states, "state ceiling")->check(CLI::PositiveNumber);
}

std::string read_text(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (in) {
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
  }
  // Benchmark models are embedded, so `linchk check-lin hw_queue.obj` works anywhere.
  std::string base = std::filesystem::path(path).filename().string();
  if (auto text = model_source(base); text && !std::filesystem::exists(path)) {
    return std::string(*text);
  }
  throw InputError("cannot read " + path);
}

std::map<std::string, Value> constant_overrides(const RunOptions& o) {
  std::map<std::string, Value> m;
  if (o.threads_opt->count()) m["THREADS"] = o.threads;
  if (o.ops_opt->count()) m["OPS"] = o.ops;
  return m;
}

ObjectModel load_model(const std::string& path, const RunOptions& o) {
  std::string text = read_text(path);
  try {
    return parse_model(text, constant_overrides(o));
  } catch (const ParseError& e) {
    std::string where = path + ":" + std::to_string(e.line());
    if (e.column() > 0) where += ":" + std::to_string(e.column());
    throw InputError(where + ": " + e.detail());
  }
}

Value constant_or(const ObjectModel& m, const char* name, Value fallback) {
  auto it = m.constants.find(name);
  return it == m.constants.end() ? fallback : it->second;
}

ClientConfig client_config(const ObjectModel& m, const RunOptions& o) {
  ClientConfig c;
  c.threads = o.threads_opt->count() ? o.threads : constant_or(m, "THREADS", c.threads);
  c.max_ops_per_thread = o.ops_opt->count() ? o.ops : constant_or(m, "OPS", c.max_ops_per_thread);
  c.values = o.values;
  c.max_states = o.max_states;
  return c;
}

EquivalenceKind equivalence(const std::string& text) {
  auto k = parse_equivalence(text);
  if (!k) throw InputError("unknown equivalence " + text);
  return *k;
}

class Output {
 public:
  explicit Output(const std::string& path) {
    if (!path.empty()) {
      file_.open(path, std::ios::binary | std::ios::trunc);
      if (!file_) throw InputError("cannot write " + path);
    }
  }
  std::ostream& stream(std::ostream& fallback) { return file_.is_open() ? file_ : fallback; }

 private:
  std::ofstream file_;
};

std::string fixed2(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

std::string stats_text(const Verdict& v) {
  std::string s;
  for (const auto& [k, n] : v.stats) {
    if (!s.empty()) s += ' ';
    s += k + "=" + std::to_string(n);
  }
  return s;
}

std::string steps_text(const std::vector<PathStep>& steps) {
  if (steps.empty()) return "(empty)";
  std::string s;
  for (const auto& st : steps) {
    if (!s.empty()) s += ' ';
    if (s.empty()) s += std::to_string(st.src) + ' ';
    s += "-" + (st.label.find(' ') == std::string::npos ? st.label : "\"" + st.label + "\"");
    if (!st.note.empty()) s += "(" + st.note + ")";
    s += "-> " + std::to_string(st.dst);
  }
  return s;
}

int cmd_lts(const std::string& path, bool spec, RunOptions& o, std::ostream& out) {
  ObjectModel m = load_model(path, o);
  ClientConfig c = client_config(m, o);
  Lts lts = spec ? explore_spec(m, c) : explore(m, c);
  Output file(o.output);
  store_aut(lts, file.stream(out));
  return kExitPass;
}

int cmd_minimize(const std::string& path, RunOptions& o, std::ostream& out) {
  Lts lts;
  {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InputError("cannot read " + path);
    lts = load_aut(in);
  }
  Lts q = quotient(lts, partition_of(lts, equivalence(o.eq)));
  if (!o.output.empty()) {
    Output file(o.output);
    store_aut(q, file.stream(out));
  }
  double factor = q.state_count() ? static_cast<double>(lts.state_count()) / q.state_count() : 1.0;
  out << "states: " << lts.state_count() << " -> " << q.state_count()
      << ", transitions: " << lts.transition_count() << " -> " << q.transition_count()
      << ", factor: " << fixed2(factor) << '\n';
  return kExitPass;
}

int cmd_check_lin(const std::string& path, RunOptions& o, std::ostream& out) {
  ObjectModel m = load_model(path, o);
  ClientConfig c = client_config(m, o);
  LinOptions lo;
  lo.quotient = equivalence(o.eq);
  Verdict v = check_linearizability(m, c, lo);
  Output file(o.output);
  std::ostream& os = file.stream(out);
  if (o.report == "records") {
    os << "check=lin model=" << m.name << " threads=" << c.threads << " ops=" << c.max_ops_per_thread
       << " eq=" << o.eq << " verdict=" << (v.pass ? "pass" : "fail") << ' ' << stats_text(v)
       << '\n';
  } else {
    os << "LINEARIZABLE: " << (v.pass ? "yes" : "no") << '\n';
    if (!v.pass && v.history) os << format_history(*v.history);
    os << "stats: " << stats_text(v) << '\n';
  }
  return v.pass ? kExitPass : kExitViolated;
}

int cmd_check_lockfree(const std::vector<std::string>& paths, bool static_lp, RunOptions& o,
                       std::ostream& out) {
  if (paths.size() == 1 && !static_lp) {
    throw InputError("no abstract model given; pass one or acknowledge --static-lp");
  }
  ObjectModel concrete = load_model(paths[0], o);
  std::optional<ObjectModel> abstract;
  if (paths.size() > 1) abstract = load_model(paths[1], o);
  ProgressCheckRequest req{concrete, abstract, client_config(concrete, o)};
  Verdict v = check_lockfree(req);
  Output file(o.output);
  std::ostream& os = file.stream(out);
  if (o.report == "records") {
    os << "check=lockfree model=" << concrete.name << " abstract=" << abstract_name(req)
       << " threads=" << req.config.threads << " ops=" << req.config.max_ops_per_thread
       << " verdict=" << (v.pass ? "pass" : "fail") << ' ' << stats_text(v) << '\n';
  } else {
    os << "LOCK-FREE: " << (v.pass ? "yes" : "no") << " (relative to abstract model "
       << abstract_name(req) << ")\n";
    if (!v.pass) {
      if (!v.message.empty()) os << v.message << '\n';
      if (v.lasso) {
        os << "divergent side: " << (v.lasso->side == 0 ? "concrete" : "abstract") << '\n';
        os << "prefix: " << steps_text(v.lasso->prefix) << '\n';
        os << "stem: " << steps_text(v.lasso->stem) << " cycle: " << steps_text(v.lasso->cycle)
           << '\n';
      } else if (v.trace) {
        os << "distinguishing trace:";
        for (const auto& l : *v.trace) os << ' ' << l;
        os << '\n';
      }
    }
    os << "stats: " << stats_text(v) << '\n';
  }
  return v.pass ? kExitPass : kExitViolated;
}

int cmd_bench(std::vector<std::string> names, bool all, RunOptions& o, std::ostream& out) {
  if (all) {
    names.clear();
    for (const auto& b : list_benchmarks()) names.push_back(b.name);
  }
  if (names.empty()) throw InputError("name benchmarks or pass --all");
  for (const auto& n : names) {
    if (!find_benchmark(n)) throw InputError("unknown benchmark " + n);
  }
  BenchOverrides ov;
  if (o.threads_opt->count()) ov.threads = o.threads;
  if (o.ops_opt->count()) ov.ops = o.ops;
  if (o.values_opt->count()) ov.values = o.values;
  if (o.max_states_opt->count()) ov.max_states = o.max_states;

  std::vector<BenchRecord> records;
  for (const auto& n : names) {
    auto rs = run_benchmark(n, ov);
    records.insert(records.end(), rs.begin(), rs.end());
  }
  bool ok = true;
  for (const auto& r : records) ok = ok && r.matches();

  Output file(o.output);
  if (o.report == "records") {
    std::ostream& os = file.stream(out);
    for (const auto& r : records) os << format_record(r) << '\n';
  } else {
    std::ostream& os = file.stream(out);
    os << std::left << std::setw(20) << "benchmark" << std::setw(10) << "check" << std::setw(4)
       << "k" << std::setw(5) << "ops" << std::setw(9) << "verdict" << std::setw(10) << "expected"
       << std::right << std::setw(10) << "states" << std::setw(13) << "transitions"
       << std::setw(10) << "quotient" << std::setw(9) << "factor" << std::setw(10) << "seconds"
       << '\n';
    for (const auto& r : records) {
      os << std::left << std::setw(20) << r.benchmark << std::setw(10) << r.check << std::setw(4)
         << r.threads << std::setw(5) << r.ops << std::setw(9) << (r.pass ? "pass" : "fail")
         << std::setw(10) << to_string(r.expected) << std::right << std::setw(10) << r.states
         << std::setw(13) << r.transitions << std::setw(10) << r.quotient_states << std::setw(9)
         << fixed2(r.reduction()) << std::setw(10) << fixed2(r.seconds)
         << (r.matches() ? "" : "  MISMATCH") << '\n';
    }
  }
  return ok ? kExitPass : kExitViolated;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Linearizability and lock-freedom checker for concurrent object models", "linchk"};
  app.require_subcommand(1);

  RunOptions lts_o, min_o, lin_o, lf_o, bench_o;
  std::string model;
  std::vector<std::string> paths;
  std::vector<std::string> names;
  bool spec = false;
  bool static_lp = false;
  bool all = false;
  const std::vector<std::string> kinds = {"strong", "branching", "branching-div", "weak"};

  auto* lts = app.add_subcommand("lts", "explore a model and write its object system as .aut");
  lts->add_option("model", model, "model file")->required();
  add_bounds(*lts, lts_o);
  lts->add_flag("--spec", spec, "explore the atomic specification instead");
  lts->add_option("-o", lts_o.output, "output .aut file (default stdout)");

  auto* minimize = app.add_subcommand("minimize", "quotient an .aut file");
  minimize->add_option("aut", model, "input .aut file")->required();
  minimize->add_option("--eq", min_o.eq, "equivalence")->check(CLI::IsMember(kinds));
  minimize->add_option("-o", min_o.output, "output .aut file");

  auto* lin = app.add_subcommand("check-lin", "check linearizability against the atomic spec");
  lin->add_option("model", model, "model file")->required();
  add_bounds(*lin, lin_o);
  lin->add_option("--eq", lin_o.eq, "equivalence used to quotient both systems")
      ->check(CLI::IsMember(kinds));
  lin->add_option("--report", lin_o.report, "report format")
      ->check(CLI::IsMember({"text", "records"}));
  lin->add_option("-o", lin_o.output, "report file (default stdout)");

  auto* lf = app.add_subcommand("check-lockfree", "check lock-freedom relative to an abstract model");
  lf->add_option("models", paths, "concrete model and optional abstract model")
      ->required()
      ->expected(1, 2);
  add_bounds(*lf, lf_o);
  lf->add_flag("--static-lp", static_lp,
               "compare with the atomic spec (sound for fixed linearization points only)");
  lf->add_option("--report", lf_o.report, "report format")->check(CLI::IsMember({"text", "records"}));
  lf->add_option("-o", lf_o.output, "report file (default stdout)");

  auto* bench = app.add_subcommand("bench", "run registered benchmarks");
  bench->add_option("names", names, "benchmark names");
  bench->add_flag("--all", all, "run every benchmark");
  add_bounds(*bench, bench_o);
  bench->add_option("--report", bench_o.report, "report format")
      ->check(CLI::IsMember({"text", "records"}));
  bench->add_option("-o", bench_o.output, "report file (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e, out, err);
    return code == 0 ? kExitPass : kExitInput;
  }

  try {
    if (*lts) return cmd_lts(model, spec, lts_o, out);
    if (*minimize) return cmd_minimize(model, min_o, out);
    if (*lin) return cmd_check_lin(model, lin_o, out);
    if (*lf) return cmd_check_lockfree(paths, static_lp, lf_o, out);
    if (*bench) return cmd_bench(names, all, bench_o, out);
  } catch (const ResourceLimitError& e) {
    err << "linchk: resource ceiling: " << e.what() << '\n';
    return kExitCeiling;
  } catch (const ParseError& e) {
    err << "linchk: " << model << ": " << e.what() << '\n';
    return kExitInput;
  } catch (const ModelError& e) {
    err << "linchk: model error: " << e.what() << '\n';
    return kExitInput;
  } catch (const Error& e) {
    err << "linchk: " << e.what() << '\n';
    return kExitInput;
  }
  return kExitInput;
}

}  // namespace linchk
