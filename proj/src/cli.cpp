#include "grothlin/cli.hpp"

#include <algorithm>
#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>

#include "grothlin/cell.hpp"
#include "grothlin/error.hpp"
#include "grothlin/euler.hpp"
#include "grothlin/parser.hpp"
#include "grothlin/plmap.hpp"
#include "grothlin/qe.hpp"
#include "grothlin/selftest.hpp"

#ifndef GROTHLIN_CORPUS_DIR
#define GROTHLIN_CORPUS_DIR "corpus"
#endif

namespace grothlin::cli {

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open file '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::vector<std::string> split_csv(const std::string& text) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : text) {
    if (c == ',') {
      out.push_back(cur);
      cur.clear();
    } else if (!std::isspace(static_cast<unsigned char>(c))) {
      cur += c;
    }
  }
  if (!cur.empty() || !out.empty()) out.push_back(cur);
  for (const std::string& s : out)
    if (s.empty()) throw Error("empty variable name in list");
  return out;
}

std::string trim(const std::string& s) {
  std::size_t b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  std::size_t e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

std::string one_line(const std::string& s) {
  std::string out;
  std::istringstream in(s);
  std::string line;
  while (std::getline(in, line)) {
    std::string t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    if (!out.empty()) out += " ";
    out += t;
  }
  return out;
}

long long now_us() {
  return std::chrono::duration_cast<std::chrono::microseconds>(
             std::chrono::steady_clock::now().time_since_epoch())
      .count();
}

}  // namespace

// ---------------------------------------------------------------------------
// Report

nlohmann::json report_to_json(const Report& r) {
  return nlohmann::json{
      {"input", r.input},
      {"vars", r.vars},
      {"cellCount", r.cell_count},
      {"kinds", {{"good", r.good}, {"bad", r.bad}, {"exceptional", r.exceptional}}},
      {"dim", r.dim},
      {"chi_g", r.chi_g},
      {"chi_b", r.chi_b},
      {"class", r.class_str},
      {"bounded", r.bounded},
      {"elapsed_us", r.elapsed_us},
  };
}

std::string report_text(const Report& r) {
  std::ostringstream os;
  os << "input:    " << r.input << "\n";
  os << "vars:     ";
  for (std::size_t i = 0; i < r.vars.size(); ++i) os << (i ? "," : "") << r.vars[i];
  os << "\n";
  os << "cells:    " << r.cell_count << " (good " << r.good << ", bad " << r.bad
     << ", exceptional " << r.exceptional << ")\n";
  os << "dim:      " << r.dim << "\n";
  os << "chi_g:    " << r.chi_g << "\n";
  os << "chi_b:    " << r.chi_b << "\n";
  os << "class:    " << r.class_str << "\n";
  os << "bounded:  " << (r.bounded ? "yes" : "no") << "\n";
  os << "elapsed:  " << r.elapsed_us << " us\n";
  return os.str();
}

// ---------------------------------------------------------------------------
// Corpus

CorpusEntry load_corpus_file(const std::string& path) {
  CorpusEntry e;
  e.path = path;
  e.name = std::filesystem::path(path).stem().string();
  std::istringstream in(read_file(path));
  std::string line;
  std::string formula;
  while (std::getline(in, line)) {
    std::string t = trim(line);
    if (t.empty()) continue;
    if (t[0] == '#') {
      std::string body = trim(t.substr(1));
      auto colon = body.find(':');
      if (colon == std::string::npos) continue;
      std::string key = trim(body.substr(0, colon));
      std::string value = trim(body.substr(colon + 1));
      try {
        if (key == "name") {
          e.name = value;
        } else if (key == "vars") {
          e.vars = split_csv(value);
        } else if (key == "expect-chi-g") {
          e.expect_chi_g = std::stoll(value);
        } else if (key == "expect-chi-b") {
          e.expect_chi_b = std::stoll(value);
        } else if (key == "expect-class") {
          e.expect_class = value;
        } else if (key == "note") {
          e.note = value;
        }
      } catch (const std::exception&) {
        throw Error(path + ": malformed directive '" + key + ": " + value + "'");
      }
      continue;
    }
    formula += line;
    formula += "\n";
  }
  e.formula_text = trim(formula);
  if (e.vars.empty()) throw Error(path + ": missing '# vars:' directive");
  if (e.formula_text.empty()) throw Error(path + ": no formula");
  try {
    (void)parse_formula(e.formula_text, e.vars);
  } catch (const Error& err) {
    throw Error(path + ": " + err.what());
  }
  return e;
}

std::vector<CorpusEntry> load_corpus_dir(const std::string& dir) {
  std::vector<std::string> paths;
  std::error_code ec;
  for (const auto& entry : std::filesystem::directory_iterator(dir, ec)) {
    if (entry.path().extension() == ".def") paths.push_back(entry.path().string());
  }
  if (ec) throw Error("cannot read corpus directory '" + dir + "'");
  if (paths.empty()) throw Error("no corpus files (*.def) in '" + dir + "'");
  std::sort(paths.begin(), paths.end());
  std::vector<CorpusEntry> out;
  out.reserve(paths.size());
  for (const std::string& p : paths) out.push_back(load_corpus_file(p));
  return out;
}

std::string default_corpus_dir() {
  if (const char* env = std::getenv("GROTHLIN_CORPUS")) return env;
  return GROTHLIN_CORPUS_DIR;
}

// ---------------------------------------------------------------------------
// Commands

namespace {

struct EvalArgs {
  std::string file;
  std::string vars_csv;
  bool json = false;
  bool no_verify = false;
};

// Formula files may carry a "# vars:" directive used when --vars is absent.
std::vector<std::string> resolve_vars(const std::string& path, const std::string& vars_csv) {
  if (!vars_csv.empty()) return split_csv(vars_csv);
  CorpusEntry e = load_corpus_file(path);
  return e.vars;
}

DefSet load_set(const std::string& path, const std::vector<std::string>& vars) {
  std::string text = read_file(path);
  Formula f = parse_formula(text, vars);
  return qe(f, static_cast<int>(vars.size()));
}

int cmd_eval(const EvalArgs& args, std::ostream& out) {
  long long start = now_us();
  std::vector<std::string> vars = resolve_vars(args.file, args.vars_csv);
  std::string text = read_file(args.file);
  Formula f = parse_formula(text, vars);
  DefSet s = qe(f, static_cast<int>(vars.size()));
  DecomposeOptions dopts;
  dopts.verify = !args.no_verify;
  Decomposition d = decompose(s, dopts);
  Report r;
  r.input = one_line(text);
  r.vars = vars;
  r.cell_count = d.cells.size();
  long long cg = 0, cb = 0;
  for (const Cell& c : d.cells) {
    long long sign = c.dim() % 2 == 0 ? 1 : -1;
    cg += sign;
    switch (classify(c)) {
      case CellKind::Good: ++r.good; cb += sign; break;
      case CellKind::Bad: ++r.bad; break;
      case CellKind::Exceptional: ++r.exceptional; break;
    }
  }
  r.dim = d.max_dim();
  r.chi_g = cg;
  r.chi_b = cb;
  r.class_str = gclass_str(GClass{cb, cb - cg});
  r.bounded = r.good == r.cell_count;
  r.elapsed_us = now_us() - start;
  if (args.json)
    out << report_to_json(r).dump(2) << "\n";
  else
    out << report_text(r);
  return 0;
}

int cmd_qe(const EvalArgs& args, std::ostream& out) {
  std::vector<std::string> vars = resolve_vars(args.file, args.vars_csv);
  DefSet s = load_set(args.file, vars);
  out << s.str(vars) << "\n";
  return 0;
}

int cmd_cells(const EvalArgs& args, std::ostream& out) {
  std::vector<std::string> vars = resolve_vars(args.file, args.vars_csv);
  DefSet s = load_set(args.file, vars);
  DecomposeOptions dopts;
  dopts.verify = !args.no_verify;
  Decomposition d = decompose(s, dopts);
  if (args.json) {
    nlohmann::json cells = nlohmann::json::array();
    for (const Cell& c : d.cells) cells.push_back(cell_to_json(c));
    out << nlohmann::json{{"cellCount", d.cells.size()}, {"cells", cells}}.dump(2) << "\n";
  } else {
    for (const Cell& c : d.cells)
      out << kind_name(classify(c)) << " dim=" << c.dim() << " " << c.str(vars) << "\n";
    out << d.cells.size() << " cell(s)\n";
  }
  return 0;
}

struct MapArgs {
  std::string map_file;
  std::string set_file;
  std::string target_file;
  std::string vars_csv;
  std::string point_csv;
  std::string action;
  bool json = false;
};

int cmd_map(const MapArgs& args, std::ostream& out) {
  std::vector<std::string> vars = split_csv(args.vars_csv);
  PLMap f = plmap_from_json(nlohmann::json::parse(read_file(args.map_file)), vars);
  auto emit = [&](const char* key, const nlohmann::json& value, const std::string& text) {
    if (args.json)
      out << nlohmann::json{{key, value}}.dump(2) << "\n";
    else
      out << text << "\n";
  };
  if (args.action == "apply") {
    std::vector<std::string> coords = split_csv(args.point_csv);
    Point p;
    for (const std::string& c : coords) p.push_back(Rational::parse(c));
    Point q = f.apply(p);
    nlohmann::json jq = nlohmann::json::array();
    for (const Rational& r : q) jq.push_back(r.str());
    emit("point", jq, point_str(q));
    return 0;
  }
  DefSet s = load_set(args.set_file, vars);
  if (args.action == "image") {
    DefSet img = image(f, s);
    std::vector<std::string> out_names =
        f.dst_dim() == static_cast<int>(vars.size()) ? vars : std::vector<std::string>{};
    emit("image", img.str(out_names), img.str(out_names));
    return 0;
  }
  if (args.action == "injective") {
    bool ok = is_injective_on(f, s);
    emit("injective", ok, ok ? "true" : "false");
    return 0;
  }
  if (args.action == "bijection") {
    std::vector<std::string> target_vars =
        f.dst_dim() == static_cast<int>(vars.size()) ? vars : std::vector<std::string>{};
    if (target_vars.empty())
      for (int i = 0; i < f.dst_dim(); ++i) target_vars.push_back("x" + std::to_string(i));
    DefSet t = load_set(args.target_file, target_vars);
    bool ok = certify_bijection(f, s, t);
    emit("bijection", ok, ok ? "true" : "false");
    return 0;
  }
  throw Error("unknown map action '" + args.action + "'");
}

struct BdArgs {
  std::string set_file;
  std::string dist_file;
  std::string vars_csv;
  std::string tvar = "t";
  bool json = false;
  bool no_verify = false;
};

int cmd_bd(const BdArgs& args, std::ostream& out) {
  std::vector<std::string> vars = split_csv(args.vars_csv);
  for (const std::string& v : vars)
    if (v == args.tvar)
      throw SemanticError("value variable '" + args.tvar + "' collides with a set variable");
  DefSet s = load_set(args.set_file, vars);
  std::vector<std::string> dist_vars;
  dist_vars.push_back(args.tvar);
  dist_vars.insert(dist_vars.end(), vars.begin(), vars.end());
  DefSet graph = load_set(args.dist_file, dist_vars);
  EulerOptions opts;
  opts.decomp.verify = !args.no_verify;
  BdReport r = bd_check(s, graph, opts);
  bool failed = false;
  for (const auto& p : r.preconditions)
    if (p.status == BdReport::Status::Failed) failed = true;
  bool ok = !failed && r.identity_verified();
  if (args.json) {
    nlohmann::json pre = nlohmann::json::array();
    for (const auto& p : r.preconditions) {
      const char* st = p.status == BdReport::Status::Ok        ? "ok"
                       : p.status == BdReport::Status::Failed ? "failed"
                                                              : "unverified";
      pre.push_back({{"name", p.name}, {"status", st}, {"detail", p.detail}});
    }
    nlohmann::json samples = nlohmann::json::array();
    for (const auto& smp : r.samples)
      samples.push_back({{"t", smp.threshold.str()},
                         {"chi_g", smp.chi_g_sublevel},
                         {"match", smp.matches}});
    out << nlohmann::json{{"preconditions", pre},
                          {"mu", r.mu.str()},
                          {"chi_b", r.chi_b_source},
                          {"samples", samples},
                          {"stabilized", ok}}
               .dump(2)
        << "\n";
  } else {
    for (const auto& p : r.preconditions) {
      const char* st = p.status == BdReport::Status::Ok        ? "ok"
                       : p.status == BdReport::Status::Failed ? "FAILED"
                                                              : "unverified";
      out << "precondition " << p.name << ": " << st;
      if (!p.detail.empty()) out << " (" << p.detail << ")";
      out << "\n";
    }
    out << "mu:      " << r.mu.str() << "\n";
    out << "chi_b:   " << r.chi_b_source << "\n";
    for (const auto& smp : r.samples)
      out << "sample t=" << smp.threshold.str() << ": chi_g=" << smp.chi_g_sublevel
          << (smp.matches ? "  match" : "  MISMATCH") << "\n";
    out << "verdict: " << (ok ? "stabilized" : "violation") << "\n";
  }
  return ok ? 0 : 1;
}

struct SelftestArgs {
  std::string corpus_dir;
  std::string filter;
};

int cmd_selftest(const SelftestArgs& args, std::ostream& out) {
  std::string dir = args.corpus_dir.empty() ? default_corpus_dir() : args.corpus_dir;
  std::vector<CorpusEntry> corpus = load_corpus_dir(dir);
  std::vector<SuiteResult> results = run_selftest(corpus, args.filter);
  if (results.empty()) {
    out << "no suite matches filter '" << args.filter << "'\n";
    return 2;
  }
  bool all = true;
  for (const SuiteResult& r : results) {
    out << (r.passed ? "PASS " : "FAIL ") << r.name;
    if (!r.passed && !r.detail.empty()) out << ": " << r.detail;
    out << "\n";
    all = all && r.passed;
  }
  out << (all ? "all suites passed" : "suite failures detected") << " (" << results.size()
      << " suite(s), corpus of " << corpus.size() << ")\n";
  return all ? 0 : 1;
}

}  // namespace

int run_cli(const std::vector<std::string>& argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"symbolic calculator for semilinear sets over the ordered rationals"};
  app.require_subcommand(1);

  EvalArgs eval_args;
  auto* eval_cmd = app.add_subcommand("eval", "cell counts, characteristics and class of a set");
  eval_cmd->add_option("file", eval_args.file, "formula file")->required();
  eval_cmd->add_option("--vars", eval_args.vars_csv, "comma-separated coordinate order");
  eval_cmd->add_flag("--json", eval_args.json, "machine-readable output");
  eval_cmd->add_flag("--no-verify", eval_args.no_verify, "skip QE certification");

  EvalArgs qe_args;
  auto* qe_cmd = app.add_subcommand("qe", "quantifier elimination to DNF");
  qe_cmd->add_option("file", qe_args.file, "formula file")->required();
  qe_cmd->add_option("--vars", qe_args.vars_csv, "comma-separated coordinate order");

  EvalArgs cells_args;
  auto* cells_cmd = app.add_subcommand("cells", "cell decomposition listing");
  cells_cmd->add_option("file", cells_args.file, "formula file")->required();
  cells_cmd->add_option("--vars", cells_args.vars_csv, "comma-separated coordinate order");
  cells_cmd->add_flag("--json", cells_args.json, "machine-readable output");
  cells_cmd->add_flag("--no-verify", cells_args.no_verify, "skip QE certification");

  MapArgs map_args;
  auto* map_cmd = app.add_subcommand("map", "piecewise-affine map operations");
  map_cmd->add_option("action", map_args.action, "apply | image | injective | bijection")
      ->required();
  map_cmd->add_option("--map", map_args.map_file, "map JSON file")->required();
  map_cmd->add_option("--set", map_args.set_file, "set formula file");
  map_cmd->add_option("--target", map_args.target_file, "target set file (bijection)");
  map_cmd->add_option("--vars", map_args.vars_csv, "input coordinate names")->required();
  map_cmd->add_option("--point", map_args.point_csv, "point for apply, e.g. 1/2,3");
  map_cmd->add_flag("--json", map_args.json, "machine-readable output");

  BdArgs bd_args;
  auto* bd_cmd = app.add_subcommand("bd", "sublevel-set stabilization check");
  bd_cmd->add_option("--set", bd_args.set_file, "set formula file")->required();
  bd_cmd->add_option("--dist", bd_args.dist_file, "distance graph formula file (value first)")
      ->required();
  bd_cmd->add_option("--vars", bd_args.vars_csv, "set coordinate names")->required();
  bd_cmd->add_option("--tvar", bd_args.tvar, "name of the value variable (default t)");
  bd_cmd->add_flag("--json", bd_args.json, "machine-readable output");
  bd_cmd->add_flag("--no-verify", bd_args.no_verify, "skip QE certification");

  SelftestArgs st_args;
  auto* st_cmd = app.add_subcommand("selftest", "run the invariant suites over the corpus");
  st_cmd->add_option("--corpus", st_args.corpus_dir, "corpus directory");
  st_cmd->add_option("--filter", st_args.filter, "run only suites whose name contains this");

  std::vector<const char*> cargv;
  cargv.push_back("grothlin");
  for (const std::string& a : argv) cargv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(cargv.size()), cargv.data());
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  }

  try {
    if (*eval_cmd) return cmd_eval(eval_args, out);
    if (*qe_cmd) return cmd_qe(qe_args, out);
    if (*cells_cmd) return cmd_cells(cells_args, out);
    if (*map_cmd) return cmd_map(map_args, out);
    if (*bd_cmd) return cmd_bd(bd_args, out);
    if (*st_cmd) return cmd_selftest(st_args, out);
  } catch (const ParseError& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  } catch (const SemanticError& e) {
    err << "error: " << e.what() << "\n";
    return 3;
  } catch (const DomainError& e) {
    err << "error: " << e.what() << "\n";
    return 3;
  } catch (const DimensionError& e) {
    err << "error: " << e.what() << "\n";
    return 3;
  } catch (const nlohmann::json::exception& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}

}  // namespace grothlin::cli
