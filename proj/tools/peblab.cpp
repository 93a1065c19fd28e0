#include <fcntl.h>
#include <spawn.h>
#include <sys/wait.h>
#include <unistd.h>

#include <atomic>
#include <cerrno>
#include <chrono>
#include <csignal>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <thread>

#include "CLI11.hpp"
#include "peblab/formulas.hpp"
#include "peblab/pebbling.hpp"
#include "peblab/projections.hpp"
#include "peblab/resolution.hpp"

extern char** environ;

namespace fs = std::filesystem;
using namespace peblab;

namespace {

// Exit codes.
constexpr int kOk = 0;
constexpr int kRejected = 1;  // the input was read but is not valid, or a check failed
constexpr int kUsage = 2;     // bad flags, unreadable files, malformed specs
constexpr int kBudget = 3;

struct UsageError : Error {
  using Error::Error;
};

struct Rejected : Error {
  using Error::Error;
};

std::string read_file(const std::string& path) {
  if (path == "-") {
    std::stringstream buf;
    buf << std::cin.rdbuf();
    return buf.str();
  }
  std::ifstream in(path, std::ios::binary);
  if (!in) throw UsageError("cannot read '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

// Writes through a temporary file and a rename, so readers never see a partial file.
void write_file(const std::string& path, const std::string& text) {
  const fs::path target(path);
  if (target.has_parent_path()) fs::create_directories(target.parent_path());
  const fs::path tmp = target.string() + ".tmp" + std::to_string(::getpid());
  {
    std::ofstream out(tmp, std::ios::binary);
    if (!out) throw UsageError("cannot write '" + path + "'");
    out << text;
    if (!out) throw UsageError("cannot write '" + path + "'");
  }
  fs::rename(tmp, target);
}

void emit(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text << std::flush;
  } else {
    write_file(path, text);
  }
}

// Runs fn(i) for i < n on up to `jobs` threads. Errors are collected per item.
std::vector<std::string> parallel_for(std::size_t n, unsigned jobs, const std::function<void(std::size_t)>& fn) {
  std::vector<std::string> errors(n);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i; (i = next++) < n;) {
      try {
        fn(i);
      } catch (const std::exception& e) {
        errors[i] = e.what();
      }
    }
  };
  const unsigned threads = std::max(1u, std::min<unsigned>(jobs, static_cast<unsigned>(n)));
  std::vector<std::thread> pool;
  for (unsigned t = 1; t < threads; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  return errors;
}

std::string slug(const std::string& s) {
  std::string out;
  for (char c : s) out += std::isalnum(static_cast<unsigned char>(c)) ? c : '-';
  return out;
}

std::vector<std::string> split_ws(const std::string& s) {
  std::istringstream in(s);
  std::vector<std::string> out;
  for (std::string tok; in >> tok;) out.push_back(tok);
  return out;
}

std::vector<std::string> split_on(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == sep) {
      out.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  out.push_back(cur);
  return out;
}

std::string measures_text(const Measures& m) {
  std::ostringstream os;
  os << "length=" << m.length << "\ndownloads=" << m.downloads << "\ninferences=" << m.inferences
     << "\nwidth=" << m.width << "\nclause_space=" << m.clause_space << "\nvariable_space=" << m.variable_space
     << "\ntotal_space=" << m.total_space << "\nformula_space=" << m.formula_space
     << "\nsemantically_checked=" << m.semantically_checked << "\n";
  return os.str();
}

struct Globals {
  std::uint64_t seed = 0;
  unsigned jobs = 1;
};

std::string seed_comment(const Globals& g, const char* prefix) {
  return std::string(prefix) + " seed=" + std::to_string(g.seed) + "\n";
}

// A formula named by --formula, or generated from --graph and --fn.
struct FormulaSource {
  std::string file;
  std::string graph;
  std::string fn = "none";

  void add(CLI::App* cmd, const char* fn_help) {
    cmd->add_option("--formula", file, "DIMACS file");
    cmd->add_option("--graph", graph, "graph spec: pyramid:H, tree:H, path:N or file:<path>");
    if (fn_help) cmd->add_option("--fn", fn, fn_help);
  }

  CnfFormula load() const {
    if (!file.empty() && !graph.empty()) throw UsageError("give either --formula or --graph, not both");
    if (!file.empty()) return from_dimacs(read_file(file));
    if (graph.empty()) throw UsageError("a formula is needed: --formula or --graph");
    return substitute(pebbling_contradiction(dag_from_spec(graph)), Substitution::parse(fn));
  }
};

// ---------------------------------------------------------------------------

struct GenArgs {
  std::vector<std::string> graphs, fns{"none"};
  std::string out, out_dir = ".", manifest;
};

int cmd_gen(const GenArgs& a, const Globals& g) {
  struct Item {
    std::string graph, fn, path;
    std::size_t vars = 0, clauses = 0, width = 0;
  };
  std::vector<Item> items;
  for (const auto& gr : a.graphs)
    for (const auto& fn : a.fns) items.push_back({gr, fn, "", 0, 0, 0});
  if (!a.out.empty() && items.size() != 1) throw UsageError("--out needs exactly one graph and one function");
  for (auto& it : items)
    it.path = a.out.empty() ? (fs::path(a.out_dir) / (slug(it.graph) + "_" + slug(it.fn) + ".cnf")).string() : a.out;

  auto errors = parallel_for(items.size(), g.jobs, [&](std::size_t i) {
    auto& it = items[i];
    const auto f = substitute(pebbling_contradiction(dag_from_spec(it.graph)), Substitution::parse(it.fn));
    it.vars = f.variables().size();
    it.clauses = f.size();
    it.width = f.width();
    emit(it.path, seed_comment(g, "c") + to_dimacs(f));
  });

  std::ostringstream manifest;
  manifest << seed_comment(g, "#") << "graph,fn,path,vars,clauses,width\n";
  int rc = kOk;
  for (std::size_t i = 0; i < items.size(); ++i) {
    const auto& it = items[i];
    if (!errors[i].empty()) {
      std::cerr << "gen " << it.graph << " " << it.fn << ": " << errors[i] << "\n";
      rc = kUsage;
      continue;
    }
    manifest << it.graph << ',' << it.fn << ',' << it.path << ',' << it.vars << ',' << it.clauses << ',' << it.width
             << '\n';
    std::cerr << it.path << ": " << it.vars << " variables, " << it.clauses << " clauses, width " << it.width << "\n";
  }
  if (!a.manifest.empty()) write_file(a.manifest, manifest.str());
  return rc;
}

struct Manifest {
  struct Entry {
    std::string graph, fn, path;
    std::size_t vars = 0, clauses = 0, width = 0;
  };
  std::vector<Entry> entries;

  static Manifest read(const std::string& path) {
    Manifest m;
    std::istringstream in(read_file(path));
    bool header = true;
    std::size_t lineno = 0;
    for (std::string line; std::getline(in, line);) {
      ++lineno;
      if (line.empty() || line[0] == '#') continue;
      if (header) {
        header = false;
        if (line != "graph,fn,path,vars,clauses,width") throw UsageError(path + ": unexpected manifest header");
        continue;
      }
      auto cols = split_on(line, ',');
      if (cols.size() != 6) throw UsageError(path + ":" + std::to_string(lineno) + ": expected 6 columns");
      try {
        m.entries.push_back({cols[0], cols[1], cols[2], std::stoul(cols[3]), std::stoul(cols[4]), std::stoul(cols[5])});
      } catch (const std::logic_error&) {
        throw UsageError(path + ":" + std::to_string(lineno) + ": bad count");
      }
    }
    return m;
  }
};

// ---------------------------------------------------------------------------

int cmd_graph(const std::string& spec, const std::string& format, const Globals& gl) {
  const Dag g = dag_from_spec(spec);
  if (format == "dag") {
    std::cout << seed_comment(gl, "#") << serialize_dag(g);
  } else if (format == "stats") {
    std::cout << "seed=" << gl.seed << "\nvertices=" << g.size() << "\nedges=" << g.edge_count()
              << "\nsources=" << g.sources().size() << "\nsink=" << g.name(g.sink())
              << "\nmax_indegree=" << g.max_indegree() << "\n";
  } else {
    throw UsageError("--format must be dag or stats");
  }
  return kOk;
}

int cmd_pebble_validate(const std::string& spec, const std::string& trace, bool black_only, const Globals& gl) {
  const Dag g = dag_from_spec(spec);
  const auto text = read_file(trace);
  std::ostringstream os;
  os << "seed=" << gl.seed << "\n";
  try {
    auto t = parse_pebbling_trace(g, text);
    switch (t.kind) {
      case GameKind::BlackWhite: {
        auto c = validate_bw(g, t.bw, black_only);
        os << "game=" << (black_only ? "black" : "bw") << "\ntime=" << c.time << "\nspace=" << c.space << "\n";
        break;
      }
      case GameKind::Labelled: {
        auto c = validate_labelled(g, t.labelled);
        os << "game=labelled\ntime=" << c.time << "\nspace=" << c.space << "\nb=" << c.max_subconfigs
           << "\nw=" << c.max_support << "\n";
        break;
      }
      case GameKind::Blob: {
        auto c = validate_blob(g, t.blob);
        os << "game=blob\ntime=" << c.time << "\nspace=" << c.space << "\n";
        break;
      }
    }
  } catch (const BudgetExceeded&) {
    throw;
  } catch (const Error& e) {
    throw Rejected(std::string("invalid pebbling: ") + e.what());
  }
  std::cout << "valid\n" << os.str();
  return kOk;
}

int cmd_pebble_price(const std::string& spec, const std::string& game, const std::string& witness, const Globals& gl) {
  const Dag g = dag_from_spec(spec);
  PriceResult r;
  if (game == "black") {
    r = optimal_black_price(g);
  } else if (game == "bw") {
    r = optimal_bw_price(g);
  } else {
    throw UsageError("--game must be black or bw");
  }
  std::cout << "seed=" << gl.seed << "\ngame=" << game << "\nprice=" << r.price << "\nvisited=" << r.visited
            << "\ntime=" << (r.witness.steps.empty() ? 0 : r.witness.steps.size() - 1) << "\n";
  if (!witness.empty()) write_file(witness, seed_comment(gl, "#") + write_bw_trace(g, r.witness));
  return kOk;
}

void write_proof(const std::string& out, const std::string& formula_out, const Refutation& r, const Globals& gl) {
  emit(out, seed_comment(gl, "#") + write_proof_trace(r));
  if (!formula_out.empty()) write_file(formula_out, seed_comment(gl, "c") + to_dimacs(r.target));
}

struct ProofOut {
  std::string out, formula_out;
  void add(CLI::App* cmd) {
    cmd->add_option("--out", out, "proof trace output (default: stdout)");
    cmd->add_option("--formula-out", formula_out, "also write the refuted formula as DIMACS");
  }
};

int cmd_compile(const std::string& spec, const std::string& fn, const std::string& strategy, const ProofOut& po,
                const Globals& gl) {
  const Dag g = dag_from_spec(spec);
  BwPebbling p;
  if (strategy == "greedy") {
    p = greedy_black_strategy(g);
  } else if (strategy == "optimal") {
    p = optimal_black_price(g).witness;
  } else {
    throw UsageError("--strategy must be greedy or optimal");
  }
  const auto cost = validate_bw(g, p, true);
  const auto r = pebbling_to_refutation(g, p, Substitution::parse(fn));
  const auto m = check_refutation(r.refutation);
  write_proof(po.out, po.formula_out, r.refutation, gl);
  const auto& k = r.constants;
  std::cerr << "seed=" << gl.seed << "\npebbling_time=" << cost.time << "\npebbling_space=" << cost.space
            << "\nk_length=" << k.k_length << "\nk_space=" << k.k_space << "\n"
            << measures_text(m);
  return kOk;
}

int cmd_const_space(const std::string& spec, const ProofOut& po, const Globals& gl) {
  const auto r = constant_space_refutation(dag_from_spec(spec));
  const auto m = check_refutation(r);
  write_proof(po.out, po.formula_out, r, gl);
  std::cerr << "seed=" << gl.seed << "\n" << measures_text(m);
  return kOk;
}

Refutation load_proof(const CnfFormula& target, const std::string& path) {
  try {
    return parse_proof_trace(target, read_file(path));
  } catch (const ParseError& e) {
    throw Rejected(std::string("malformed proof trace: ") + e.what());
  }
}

Measures checked(const Refutation& r, std::size_t semantic = 20) {
  try {
    return check_refutation(r, {semantic});
  } catch (const BudgetExceeded&) {
    throw;
  } catch (const Error& e) {
    throw Rejected(std::string("rejected: ") + e.what());
  }
}

int cmd_lift(const FormulaSource& src, const std::string& proof, const std::string& fn, const ProofOut& po,
             const Globals& gl) {
  const auto r = load_proof(src.load(), proof);
  const auto in = checked(r, 0);
  const auto lifted = lift_refutation(r, Substitution::parse(fn));
  const auto m = check_refutation(lifted.refutation);
  write_proof(po.out, po.formula_out, lifted.refutation, gl);
  std::cerr << "seed=" << gl.seed << "\nwidth_in=" << in.width << "\nlength_in=" << in.length
            << "\nobserved_c=" << lifted.c << "\n"
            << measures_text(m);
  return kOk;
}

int cmd_extract(const FormulaSource& src, const std::string& proof, bool local, const ProofOut& po,
                const Globals& gl) {
  const auto f = Substitution::parse(src.fn);
  const auto r = load_proof(src.load(), proof);
  const auto in = checked(r, 0);
  const auto out = extract_refutation(r, f, local);
  const auto m = check_refutation(out.refutation);
  write_proof(po.out, po.formula_out, out.refutation, gl);
  std::cerr << "seed=" << gl.seed << "\ndownloads_in=" << in.downloads << "\nunion_var_bound=" << out.union_var_bound
            << "\nprojected_var_bound=" << out.projected_var_bound << "\n"
            << measures_text(m);
  return m.downloads <= in.downloads ? kOk : kRejected;
}

int cmd_check(const FormulaSource& src, const std::string& proof, std::size_t semantic, const Globals& gl) {
  const auto m = checked(load_proof(src.load(), proof), semantic);
  std::cout << "accepted\nseed=" << gl.seed << "\n" << measures_text(m);
  return kOk;
}

int cmd_minspace(const FormulaSource& src, std::size_t cap, const Globals& gl) {
  const auto s = min_clause_space(src.load(), cap);
  std::cout << "seed=" << gl.seed << "\nmin_clause_space=" << (s ? std::to_string(*s) : "none") << "\ncap=" << cap
            << "\n";
  return kOk;
}

int cmd_minwidth(const FormulaSource& src, std::size_t cap, const Globals& gl) {
  const auto w = min_width(src.load(), cap);
  std::cout << "seed=" << gl.seed << "\nmin_width=" << (w ? std::to_string(*w) : "none") << "\ncap=" << cap << "\n";
  return kOk;
}

// ---------------------------------------------------------------------------

struct ProjectArgs {
  std::string fn = "xor:2";
  std::string config, clauses_file;
  bool local = false;
  std::size_t random = 0, max_clauses = 8, max_base = 4;
  std::string csv, violations;
};

std::string show_clause(const Clause& c) { return c.empty() ? "(empty clause)" : c.str(); }

int cmd_project(const ProjectArgs& a, const Globals& gl) {
  const auto f = Substitution::parse(a.fn);
  if (a.random == 0) {
    Configuration d;
    std::vector<std::string> texts;
    if (!a.clauses_file.empty()) {
      std::istringstream in(read_file(a.clauses_file));
      for (std::string line; std::getline(in, line);)
        if (!line.empty() && line[0] != '#') texts.push_back(line);
    } else {
      texts = split_on(a.config, ';');
    }
    for (const auto& t : texts)
      if (!split_ws(t).empty()) d.push_back(Clause::parse(t));
    const auto p = a.local ? local_project(d, f) : project(d, f);
    std::cout << "# seed=" << gl.seed << "\n";
    for (const auto& c : p) std::cout << show_clause(c) << "\n";
    return kOk;
  }

  // Sweep: samples and per-sample property checks use generators seeded by
  // (seed, sample index), so results do not depend on --jobs.
  std::vector<Configuration> samples(a.random);
  std::vector<AxiomSuiteReport> reports(a.random);
  auto errors = parallel_for(a.random, gl.jobs, [&](std::size_t i) {
    std::seed_seq seq{gl.seed, static_cast<std::uint64_t>(i)};
    std::mt19937_64 rng(seq);
    samples[i] = random_configuration(rng, f, a.max_clauses, a.max_base);
    reports[i] = projection_axiom_suite(f, {samples[i]}, rng);
  });
  AxiomSuiteReport all;
  all.samples = a.random;
  int rc = kOk;
  for (std::size_t i = 0; i < a.random; ++i) {
    if (!errors[i].empty()) {
      std::cerr << "sample " << i << ": " << errors[i] << "\n";
      rc = kBudget;
      continue;
    }
    all.checks += reports[i].checks;
    for (auto v : reports[i].violations) {
      v.sample = i;
      all.violations.push_back(v);
    }
  }
  const auto space = space_respecting_check(f, samples);
  emit(a.csv, seed_comment(gl, "#") + space_report_csv(space));
  if (!a.violations.empty()) write_file(a.violations, violations_jsonl(all) + violations_jsonl(space, samples));
  std::cerr << "seed=" << gl.seed << "\nsamples=" << a.random << "\nproperty_checks=" << all.checks
            << "\nproperty_violations=" << all.violations.size() << "\nspace_bound_asserted=" << space.asserted
            << "\nmax_vars_per_clause=" << space.max_ratio << "\n";
  if (!all.ok() || !space.ok()) rc = std::max(rc, kRejected);
  return rc;
}

// ---------------------------------------------------------------------------

struct ReportArgs {
  std::string family = "pyramid";
  std::size_t from = 1, to = 4;
  std::string fn = "none";
  std::string out;
};

int cmd_report(const ReportArgs& a, const Globals& gl) {
  const auto f = Substitution::parse(a.fn);
  struct Row {
    std::size_t n = 0, vertices = 0;
    std::string black, bw, length, space, const_length, note;
  };
  std::vector<Row> rows;
  for (std::size_t n = a.from; n <= a.to && a.from <= a.to; ++n) rows.push_back({n, 0, "", "", "", "", "", ""});
  auto errors = parallel_for(rows.size(), gl.jobs, [&](std::size_t i) {
    auto& row = rows[i];
    const Dag g = dag_from_spec(a.family + ":" + std::to_string(row.n));
    row.vertices = g.size();
    std::vector<std::string> notes;
    BwPebbling strategy = greedy_black_strategy(g);
    try {
      auto r = optimal_black_price(g);
      row.black = std::to_string(r.price);
      strategy = r.witness;
    } catch (const BudgetExceeded&) {
      notes.push_back("black price over budget");
    }
    try {
      row.bw = std::to_string(optimal_bw_price(g).price);
    } catch (const BudgetExceeded&) {
      notes.push_back("bw price over budget");
    }
    const auto m = check_refutation(pebbling_to_refutation(g, strategy, f).refutation, {0});
    row.length = std::to_string(m.length);
    row.space = std::to_string(m.clause_space);
    row.const_length = std::to_string(check_refutation(constant_space_refutation(g), {0}).length);
    for (std::size_t k = 0; k < notes.size(); ++k) row.note += (k ? "; " : "") + notes[k];
  });
  std::ostringstream os;
  os << seed_comment(gl, "#")
     << "n,vertices,black_price,bw_price,compiled_length,compiled_clause_space,const_space_length,note\n";
  int rc = kOk;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const auto& r = rows[i];
    if (!errors[i].empty()) {
      std::cerr << "row " << r.n << ": " << errors[i] << "\n";
      os << r.n << ",,,,,,," << slug(errors[i]) << "\n";
      rc = kRejected;
      continue;
    }
    os << r.n << ',' << r.vertices << ',' << r.black << ',' << r.bw << ',' << r.length << ',' << r.space << ','
       << r.const_length << ',' << r.note << "\n";
  }
  emit(a.out, os.str());
  return rc;
}

// ---------------------------------------------------------------------------

struct BenchArgs {
  std::string manifest, solver, out;
  double timeout = 60;
};

struct BenchResult {
  std::string status;
  int exit_code = -1;
  double wall_ms = 0;
};

BenchResult run_solver(const std::vector<std::string>& argv_template, const std::string& file, double timeout) {
  if (timeout <= 0) return {"timeout", -1, 0};
  std::vector<std::string> args;
  for (const auto& t : argv_template) {
    std::string s = t;
    for (auto pos = s.find("{file}"); pos != std::string::npos; pos = s.find("{file}", pos + file.size()))
      s.replace(pos, 6, file);
    args.push_back(s);
  }
  std::vector<char*> argv;
  for (auto& s : args) argv.push_back(s.data());
  argv.push_back(nullptr);

  posix_spawn_file_actions_t actions;
  posix_spawn_file_actions_init(&actions);
  posix_spawn_file_actions_addopen(&actions, STDOUT_FILENO, "/dev/null", O_WRONLY, 0);
  posix_spawn_file_actions_addopen(&actions, STDERR_FILENO, "/dev/null", O_WRONLY, 0);
  const auto start = std::chrono::steady_clock::now();
  pid_t pid = 0;
  const int err = posix_spawnp(&pid, argv[0], &actions, nullptr, argv.data(), environ);
  posix_spawn_file_actions_destroy(&actions);
  if (err != 0) return {std::string("spawn-failure: ") + std::strerror(err), -1, 0};

  const auto deadline = start + std::chrono::duration<double>(timeout);
  int status = 0;
  bool timed_out = false;
  for (;;) {
    const pid_t done = ::waitpid(pid, &status, WNOHANG);
    if (done == pid) break;
    if (done < 0 && errno != EINTR) return {"spawn-failure: wait failed", -1, 0};
    if (std::chrono::steady_clock::now() >= deadline) {
      ::kill(pid, SIGKILL);
      ::waitpid(pid, &status, 0);
      timed_out = true;
      break;
    }
    std::this_thread::sleep_for(std::chrono::milliseconds(2));
  }
  const double ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  if (timed_out) return {"timeout", -1, ms};
  if (!WIFEXITED(status)) return {"signal", -1, ms};
  const int code = WEXITSTATUS(status);
  // a shell reports 127 when the command itself was not found
  if (code == 127) return {"spawn-failure: command not found", code, ms};
  return {code == 10 ? "SAT" : code == 20 ? "UNSAT" : "unknown", code, ms};
}

int cmd_bench(const BenchArgs& a, const Globals& gl) {
  if (a.solver.find("{file}") == std::string::npos) throw UsageError("--solver must contain {file}");
  const auto argv_template = split_ws(a.solver);
  const auto manifest = Manifest::read(a.manifest);
  std::vector<BenchResult> results(manifest.entries.size());
  auto errors = parallel_for(results.size(), gl.jobs, [&](std::size_t i) {
    results[i] = run_solver(argv_template, manifest.entries[i].path, a.timeout);
  });
  std::ostringstream os;
  os << seed_comment(gl, "#") << "entry,graph,fn,status,exit_code,wall_ms\n";
  std::size_t failures = 0;
  for (std::size_t i = 0; i < results.size(); ++i) {
    auto& r = results[i];
    if (!errors[i].empty()) r = {"spawn-failure: " + errors[i], -1, 0};
    const auto& e = manifest.entries[i];
    if (r.status.rfind("spawn-failure", 0) == 0) {
      ++failures;
      std::cerr << "entry " << i << " (" << e.path << "): " << r.status << "\n";
    }
    char ms[32];
    std::snprintf(ms, sizeof ms, "%.1f", r.wall_ms);
    os << i << ',' << e.graph << ',' << e.fn << ',' << slug(r.status) << ',' << r.exit_code << ',' << ms << "\n";
  }
  emit(a.out, os.str());
  return failures ? kRejected : kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Pebble games, pebbling formulas and resolution proofs"};
  app.require_subcommand(1);
  app.fallthrough();
  Globals gl;
  app.add_option("--seed", gl.seed, "random seed, echoed into every output");
  app.add_option("--jobs", gl.jobs, "worker threads for independent items")->check(CLI::PositiveNumber);

  std::function<int()> run;

  GenArgs gen;
  auto* c_gen = app.add_subcommand("gen", "write Peb_G[f] as DIMACS and a manifest row");
  c_gen->add_option("--graph", gen.graphs, "graph spec (repeatable)")->required();
  c_gen->add_option("--fn", gen.fns, "function literal or none (repeatable)");
  c_gen->add_option("--out", gen.out, "output file for a single formula");
  c_gen->add_option("--out-dir", gen.out_dir, "output directory");
  c_gen->add_option("--manifest", gen.manifest, "manifest CSV to write");
  c_gen->callback([&] { run = [&] { return cmd_gen(gen, gl); }; });

  std::string graph_spec, graph_format = "dag";
  auto* c_graph = app.add_subcommand("graph", "print a graph");
  c_graph->add_option("--graph", graph_spec, "graph spec")->required();
  c_graph->add_option("--format", graph_format, "dag or stats");
  c_graph->callback([&] { run = [&] { return cmd_graph(graph_spec, graph_format, gl); }; });

  std::string pv_trace;
  bool pv_black = false;
  auto* c_pv = app.add_subcommand("pebble-validate", "validate a pebbling trace");
  c_pv->add_option("--graph", graph_spec, "graph spec")->required();
  c_pv->add_option("--trace", pv_trace, "pebbling trace file")->required();
  c_pv->add_flag("--black-only", pv_black, "reject white pebbles");
  c_pv->callback([&] { run = [&] { return cmd_pebble_validate(graph_spec, pv_trace, pv_black, gl); }; });

  std::string pp_game = "black", pp_witness;
  auto* c_pp = app.add_subcommand("pebble-price", "exact pebbling price");
  c_pp->add_option("--graph", graph_spec, "graph spec")->required();
  c_pp->add_option("--game", pp_game, "black or bw");
  c_pp->add_option("--witness", pp_witness, "write an optimal pebbling trace");
  c_pp->callback([&] { run = [&] { return cmd_pebble_price(graph_spec, pp_game, pp_witness, gl); }; });

  std::string fn = "none", strategy = "greedy";
  ProofOut po;
  auto* c_compile = app.add_subcommand("compile", "black pebbling to a refutation of Peb_G[f]");
  c_compile->add_option("--graph", graph_spec, "graph spec")->required();
  c_compile->add_option("--fn", fn, "function literal or none");
  c_compile->add_option("--strategy", strategy, "greedy or optimal");
  po.add(c_compile);
  c_compile->callback([&] { run = [&] { return cmd_compile(graph_spec, fn, strategy, po, gl); }; });

  auto* c_cs = app.add_subcommand("const-space", "constant clause space refutation of Peb_G");
  c_cs->add_option("--graph", graph_spec, "graph spec")->required();
  po.add(c_cs);
  c_cs->callback([&] { run = [&] { return cmd_const_space(graph_spec, po, gl); }; });

  FormulaSource src;
  std::string proof;
  auto* c_lift = app.add_subcommand("lift", "refutation of F to a refutation of F[f]");
  src.add(c_lift, nullptr);
  c_lift->add_option("--proof", proof, "proof trace of F")->required();
  c_lift->add_option("--fn", fn, "function literal")->required();
  po.add(c_lift);
  c_lift->callback([&] { run = [&] { return cmd_lift(src, proof, fn, po, gl); }; });

  bool local = false;
  auto* c_extract = app.add_subcommand("extract", "refutation of F[f] to a refutation of F");
  src.add(c_extract, "function literal f (also used with --graph)");
  c_extract->add_option("--proof", proof, "proof trace of F[f]")->required();
  c_extract->add_flag("--local", local, "use the local projection");
  po.add(c_extract);
  c_extract->callback([&] { run = [&] { return cmd_extract(src, proof, local, po, gl); }; });

  std::size_t semantic = 20;
  auto* c_check = app.add_subcommand("check", "verify a proof trace");
  src.add(c_check, "function literal used with --graph");
  c_check->add_option("--proof", proof, "proof trace")->required();
  c_check->add_option("--semantic", semantic, "truth-table check up to this many variables (0 = off)");
  c_check->callback([&] { run = [&] { return cmd_check(src, proof, semantic, gl); }; });

  std::size_t cap = 6;
  auto* c_ms = app.add_subcommand("minspace", "exact minimal clause space");
  src.add(c_ms, "function literal used with --graph");
  c_ms->add_option("--cap", cap, "largest space tried");
  c_ms->callback([&] { run = [&] { return cmd_minspace(src, cap, gl); }; });

  auto* c_mw = app.add_subcommand("minwidth", "minimal refutation width");
  src.add(c_mw, "function literal used with --graph");
  c_mw->add_option("--cap", cap, "largest width tried");
  c_mw->callback([&] { run = [&] { return cmd_minwidth(src, cap, gl); }; });

  ProjectArgs pa;
  auto* c_proj = app.add_subcommand("project", "f-projection of a configuration, or a seeded property sweep");
  c_proj->add_option("--fn", pa.fn, "function literal");
  c_proj->add_option("--config", pa.config, "clauses separated by ';'");
  c_proj->add_option("--clauses", pa.clauses_file, "file with one clause per line");
  c_proj->add_flag("--local", pa.local, "local projection");
  c_proj->add_option("--random", pa.random, "number of random configurations to sweep");
  c_proj->add_option("--max-clauses", pa.max_clauses, "clauses per random configuration");
  c_proj->add_option("--max-base", pa.max_base, "base variables per random configuration");
  c_proj->add_option("--csv", pa.csv, "space report CSV (default: stdout)");
  c_proj->add_option("--violations", pa.violations, "JSON-lines violation log");
  c_proj->callback([&] { run = [&] { return cmd_project(pa, gl); }; });

  ReportArgs ra;
  auto* c_report = app.add_subcommand("report", "trade-off table over a graph family");
  c_report->add_option("--family", ra.family, "pyramid, tree or path");
  c_report->add_option("--from", ra.from, "first parameter");
  c_report->add_option("--to", ra.to, "last parameter");
  c_report->add_option("--fn", ra.fn, "function literal for the compiled refutation");
  c_report->add_option("--out", ra.out, "CSV output (default: stdout)");
  c_report->callback([&] { run = [&] { return cmd_report(ra, gl); }; });

  BenchArgs ba;
  auto* c_bench = app.add_subcommand("bench", "run an external SAT solver over a manifest");
  c_bench->add_option("--manifest", ba.manifest, "manifest CSV")->required();
  c_bench->add_option("--solver", ba.solver, "command template containing {file}")->required();
  c_bench->add_option("--timeout", ba.timeout, "seconds per entry");
  c_bench->add_option("--out", ba.out, "CSV output (default: stdout)");
  c_bench->callback([&] { run = [&] { return cmd_bench(ba, gl); }; });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kOk : kUsage;
  }
  try {
    return run();
  } catch (const Rejected& e) {
    std::cout << e.what() << "\n";
    return kRejected;
  } catch (const BudgetExceeded& e) {
    std::cerr << "budget exceeded: " << e.what() << "\n";
    return kBudget;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  }
}
