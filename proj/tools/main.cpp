#include <poll.h>
#include <signal.h>
#include <sys/wait.h>
#include <unistd.h>

#include <chrono>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <map>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "lcs/prover.hpp"

using namespace lcs;
using json = nlohmann::json;

namespace {

enum Exit { Ok = 0, FailedExit = 1, BoundExit = 2, ConfigExit = 3, TransportExit = 4 };

struct Target {
  std::shared_ptr<EquivalenceProblem> problem;
  std::shared_ptr<const LanguageDefinition> language;
  std::string name;
};

Target resolve(DefinitionLibrary& lib, const std::string& what) {
  Target t;
  t.name = what;
  if (lib.hasProblem(what)) {
    t.problem = lib.problem(what);
    return t;
  }
  if (lib.hasLanguage(what)) {
    t.language = lib.language(what);
    return t;
  }
  if (!std::filesystem::exists(what)) throw std::runtime_error("no bundled definition or file named '" + what + "'");
  auto loaded = lib.loadFile(what);
  t.problem = loaded.problem;
  t.language = loaded.language;
  t.name = t.problem ? t.problem->name : t.language->name;
  return t;
}

struct ProveRequest {
  Direction direction;
  SimKind mode;
};

std::vector<ProveRequest> requestsOf(const EquivalenceProblem& p, std::optional<Direction> dir,
                                     std::optional<SimKind> mode) {
  std::vector<ProveRequest> out;
  auto expand = [&](Direction d, SimKind m) {
    if (d == Direction::Both) {
      out.push_back({Direction::Fwd, m});
      out.push_back({Direction::Bwd, m});
    } else {
      out.push_back({d, m});
    }
  };
  if (dir || mode) {
    expand(dir.value_or(Direction::Both), mode.value_or(SimKind::Full));
    return out;
  }
  for (auto& q : p.queries) {
    if (q.kind == Query::Kind::Prove) expand(q.direction, q.mode);
    if (q.kind == Query::Kind::Equiv) expand(Direction::Both, q.mode);
  }
  return out;
}

json reportOf(const std::string& problem, const GoalSetResult& r) {
  json goals = json::array();
  for (auto& o : r.outcomes)
    goals.push_back({{"goal", o.goal},
                     {"verdict", toString(o.verdict)},
                     {"wallMillis", o.wallMillis},
                     {"smtQueries", o.smtQueries},
                     {"proofNodes", o.nodes}});
  return {{"problem", problem},
          {"direction", toString(r.direction)},
          {"mode", toString(r.mode)},
          {"verdict", toString(r.verdict)},
          {"boundExceeded", r.boundHit},
          {"wallMillis", r.wallMillis},
          {"smtQueries", r.smtQueries},
          {"proofNodes", r.proofNodes},
          {"goals", goals}};
}

int exitFor(const std::vector<GoalSetResult>& results) {
  bool anyFailed = false, onlyBound = true;
  for (auto& r : results) {
    if (r.verdict == Verdict::Proved) continue;
    anyFailed = true;
    for (auto& o : r.outcomes)
      if (o.verdict == Verdict::Failed) onlyBound = false;
  }
  if (!anyFailed) return Ok;
  return onlyBound ? BoundExit : FailedExit;
}

void writeJson(const std::string& where, const json& j) {
  if (where == "-") {
    std::cout << j.dump(2) << "\n";
    return;
  }
  std::ofstream out(where);
  if (!out) throw std::runtime_error("cannot write " + where);
  out << j.dump(2) << "\n";
}

int cmdCheck(DefinitionLibrary& lib, const std::vector<std::string>& targets, bool all) {
  std::vector<std::string> names = targets;
  if (all) {
    for (auto& n : lib.languageNames()) names.push_back(n);
    for (auto& n : lib.problemNames()) names.push_back(n);
  }
  if (names.empty()) {
    std::cerr << "check: name a definition or pass --all\n";
    return ConfigExit;
  }
  int bad = 0;
  for (auto& n : names) {
    try {
      Target t = resolve(lib, n);
      std::vector<std::string> errs = t.problem ? validateProblem(*t.problem) : validateLanguage(*t.language);
      if (errs.empty()) {
        std::cout << "ok " << t.name << "\n";
      } else {
        ++bad;
        for (auto& e : errs) std::cout << t.name << ": " << e << "\n";
      }
    } catch (const std::exception& e) {
      ++bad;
      std::cout << e.what() << "\n";
    }
  }
  return bad ? ConfigExit : Ok;
}

Term parseRunTerm(const LanguageDefinition& lang, const std::string& text) {
  ParseScope scope;
  scope.sig = &lang.sig;
  auto toks = tokenize(text);
  for (size_t i = 0; i < toks.size(); ++i) {
    bool call = i + 1 < toks.size() && toks[i + 1].kind == Tok::Punct && toks[i + 1].text == "(";
    if (toks[i].kind == Tok::Ident && !call && !lang.sig.find(toks[i].text)) scope.ids.insert(toks[i].text);
  }
  return parseTerm(text, scope);
}

// A configuration whose stack is empty or holds a single literal value.
bool isFinal(Term c) {
  if (c->tag != Tag::App || c->args.empty()) return false;
  Term es = c->args[0];
  if (es->tag == Tag::App && es->args.empty()) return true;
  return es->tag == Tag::App && es->args.size() == 2 && es->args[0]->isLiteral() && es->args[1]->tag == Tag::App &&
         es->args[1]->args.empty();
}

int runTrace(const LanguageDefinition& lang, Term start, int maxSteps) {
  Engine eng(lang, nullptr);
  Term t = eng.normalize(start);
  std::cout << show(t) << "\n";
  int steps = 0;
  while (steps < maxSteps) {
    auto next = eng.stepConcrete(t);
    if (!next) break;
    t = *next;
    ++steps;
    std::cout << show(t) << "\n";
  }
  bool terminal = !eng.stepConcrete(t);
  std::cout << "steps: " << steps << "\n";
  if (terminal) {
    std::cout << (isFinal(t) ? "final: result stack reached\n" : "stuck: no rule applies\n");
    return Ok;
  }
  std::cout << "terminal: no (max steps " << maxSteps << " exceeded)\n";
  return BoundExit;
}

int cmdRun(DefinitionLibrary& lib, const std::string& target, const std::string& termText, int maxSteps,
           bool right) {
  Target t = resolve(lib, target);
  const LanguageDefinition* lang = t.language.get();
  if (t.problem) lang = right ? t.problem->right.get() : t.problem->left.get();
  if (!termText.empty()) return runTrace(*lang, parseRunTerm(*lang, termText), maxSteps);
  if (!t.problem) throw std::runtime_error("a language needs --term to run");
  int code = Ok;
  bool any = false;
  for (auto& q : t.problem->queries) {
    if (q.kind != Query::Kind::Run) continue;
    if (any) std::cout << "\n";
    any = true;
    code = std::max(code, runTrace(*lang, q.term, std::min(q.steps, maxSteps)));
  }
  if (!any) throw std::runtime_error(t.name + " has no run queries; pass --term");
  return code;
}

int cmdProve(DefinitionLibrary& lib, const std::string& target, std::optional<Direction> dir,
             std::optional<SimKind> mode, const ProverConfig& cfg, const std::string& jsonOut, bool tree,
             bool quiet) {
  Target t = resolve(lib, target);
  if (!t.problem) throw std::runtime_error(t.name + " is a language, not a problem");
  auto reqs = requestsOf(*t.problem, dir, mode);
  if (reqs.empty()) throw std::runtime_error(t.name + " has no prove or equiv queries; pass --mode/--direction");
  std::ostream& out = jsonOut == "-" ? std::cerr : out;
  std::vector<GoalSetResult> results;
  json report = json::array();
  for (auto& rq : reqs) {
    GoalSetResult r = proveAll(*t.problem, rq.direction, rq.mode, cfg);
    out << t.name << " " << toString(r.direction) << " " << toString(r.mode) << ": " << toString(r.verdict)
              << (r.verdict != Verdict::Proved && r.boundHit ? " (bound exceeded)" : "") << "  " << std::fixed
              << std::setprecision(1) << r.wallMillis << " ms, " << r.proofNodes << " nodes, " << r.smtQueries
              << " smt queries\n";
    for (auto& o : r.outcomes) {
      out << "  " << o.goal << ": " << toString(o.verdict) << "\n";
      if (tree) out << renderTree(o.root, 4);
      if (!quiet && o.verdict != Verdict::Proved) out << explainFailure(o);
    }
    report.push_back(reportOf(t.name, r));
    results.push_back(std::move(r));
  }
  if (!jsonOut.empty()) writeJson(jsonOut, report);
  return exitFor(results);
}

struct BenchRow {
  std::string problem;
  std::string row;
  bool bounded = false;
  json results = json::array();
  std::string error;
  double wallMillis = 0;
};

json benchOne(DefinitionLibrary& lib, const std::string& name, const ProverConfig& cfg) {
  auto p = lib.problem(name);
  json out = json::array();
  for (auto& rq : requestsOf(*p, std::nullopt, std::nullopt)) out.push_back(reportOf(name, proveAll(*p, rq.direction, rq.mode, cfg)));
  return out;
}

// Each problem runs in a child process so a per-problem timeout can stop it.
struct Worker {
  pid_t pid = -1;
  int fd = -1;
  size_t index = 0;
  std::string buffer;
  std::chrono::steady_clock::time_point start;
};

int cmdBench(DefinitionLibrary& lib, std::vector<std::string> names, const ProverConfig& cfg, double timeoutSec,
             int jobs, const std::string& jsonOut) {
  if (names.empty()) {
    for (auto& n : corpusProblems()) {
      auto p = lib.problem(n);
      if (!requestsOf(*p, std::nullopt, std::nullopt).empty()) names.push_back(n);
    }
  }
  std::sort(names.begin(), names.end());
  std::vector<BenchRow> rows(names.size());
  for (size_t i = 0; i < names.size(); ++i) {
    auto p = lib.problem(names[i]);
    rows[i].problem = names[i];
    rows[i].row = p->row;
    rows[i].bounded = p->attributes.count("bounded") > 0;
  }
  std::vector<Worker> running;
  size_t next = 0;
  auto launch = [&](size_t i) {
    int fds[2];
    if (pipe(fds) != 0) throw std::runtime_error("cannot create pipe");
    std::cout.flush();
    pid_t pid = fork();
    if (pid < 0) throw std::runtime_error("cannot fork");
    if (pid == 0) {
      close(fds[0]);
      std::string text;
      int code = 0;
      try {
        text = benchOne(lib, names[i], cfg).dump();
      } catch (const std::exception& e) {
        text = json{{"error", e.what()}}.dump();
        code = 1;
      }
      size_t off = 0;
      while (off < text.size()) {
        ssize_t n = write(fds[1], text.data() + off, text.size() - off);
        if (n <= 0) break;
        off += static_cast<size_t>(n);
      }
      close(fds[1]);
      _exit(code);
    }
    close(fds[1]);
    running.push_back(Worker{pid, fds[0], i, {}, std::chrono::steady_clock::now()});
  };
  auto finish = [&](Worker& w, bool timedOut) {
    if (timedOut) kill(w.pid, SIGKILL);
    waitpid(w.pid, nullptr, 0);
    close(w.fd);
    BenchRow& row = rows[w.index];
    row.wallMillis =
        std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - w.start).count();
    if (timedOut) {
      row.error = "timeout after " + std::to_string(static_cast<int>(timeoutSec)) + " s";
      return;
    }
    try {
      json j = json::parse(w.buffer);
      if (j.is_object() && j.contains("error")) row.error = j["error"].get<std::string>();
      else row.results = j;
    } catch (const std::exception& e) {
      row.error = std::string("worker crashed: ") + e.what();
    }
  };
  while (next < names.size() || !running.empty()) {
    while (next < names.size() && static_cast<int>(running.size()) < std::max(1, jobs)) launch(next++);
    std::vector<pollfd> pfds;
    for (auto& w : running) pfds.push_back(pollfd{w.fd, POLLIN, 0});
    poll(pfds.data(), pfds.size(), 200);
    auto now = std::chrono::steady_clock::now();
    for (size_t k = running.size(); k-- > 0;) {
      Worker& w = running[k];
      bool done = false;
      if (pfds[k].revents & (POLLIN | POLLHUP)) {
        char chunk[65536];
        ssize_t n = read(w.fd, chunk, sizeof chunk);
        if (n > 0) w.buffer.append(chunk, static_cast<size_t>(n));
        else done = true;
      }
      bool late = std::chrono::duration<double>(now - w.start).count() > timeoutSec;
      if (done || late) {
        finish(w, !done && late);
        running.erase(running.begin() + static_cast<long>(k));
      }
    }
  }

  std::map<std::tuple<std::string, std::string, std::string>, std::string> expected;
  for (auto& e : expectedVerdicts()) expected[{e.problem, toString(e.direction), toString(e.mode)}] = e.verdict;

  std::ostream& out = jsonOut == "-" ? std::cerr : std::cout;
  int mismatches = 0;
  json report = json::array();
  out << std::left << std::setw(36) << "row" << std::setw(34) << "problem" << std::setw(16) << "query"
            << std::setw(14) << "verdict" << std::setw(10) << "expected" << std::right << std::setw(11) << "ms"
            << std::setw(8) << "nodes" << std::setw(8) << "smt" << "\n";
  for (auto& row : rows) {
    std::string rowName = row.row + (row.bounded ? " [bounded]" : "");
    if (!row.error.empty()) {
      ++mismatches;
      out << std::left << std::setw(36) << rowName << std::setw(34) << row.problem << "ERROR " << row.error
                << "\n";
      report.push_back({{"problem", row.problem}, {"row", row.row}, {"error", row.error}, {"match", false}});
      continue;
    }
    for (auto& r : row.results) {
      std::string d = r["direction"], m = r["mode"], v = r["verdict"];
      auto it = expected.find({row.problem, d, m});
      std::string want = it == expected.end() ? "-" : it->second;
      bool match = it == expected.end() || it->second == v;
      if (!match) ++mismatches;
      std::ostringstream ms;
      ms << std::fixed << std::setprecision(1) << r["wallMillis"].get<double>();
      out << std::left << std::setw(36) << rowName << std::setw(34) << row.problem << std::setw(16)
                << (d + " " + m) << std::setw(14) << v << std::setw(10) << want << std::right << std::setw(11)
                << ms.str() << std::setw(8) << r["proofNodes"].get<size_t>() << std::setw(8)
                << r["smtQueries"].get<size_t>() << (match ? "" : "  MISMATCH") << "\n";
      json entry = r;
      entry["row"] = row.row;
      entry["bounded"] = row.bounded;
      entry["expected"] = want;
      entry["match"] = match;
      entry.erase("goals");
      report.push_back(entry);
    }
  }
  out << (mismatches ? std::to_string(mismatches) + " mismatch(es)" : std::string("all verdicts as expected"))
            << "\n";
  if (!jsonOut.empty()) writeJson(jsonOut, report);
  return mismatches ? FailedExit : Ok;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Constrained term rewriting and program equivalence prover"};
  app.require_subcommand(1);

  ProverConfig cfg;
  auto addProverOptions = [&](CLI::App* sub) {
    sub->add_option("--bound", cfg.lhsStepBound, "symbolic steps on the left before giving up")->check(CLI::PositiveNumber);
    sub->add_option("--rhs-bound", cfg.rhsBound, "symbolic steps searched on the right")->check(CLI::PositiveNumber);
    sub->add_option("--unroll-depth", cfg.unrollDepth, "unrolling depth for axiomatized symbols")->check(CLI::PositiveNumber);
    sub->add_option("--smt-timeout", cfg.smt.timeoutMillis, "per-query solver timeout in ms")->check(CLI::PositiveNumber);
    sub->add_option("--solver-cmd", cfg.smt.command, "SMT-LIB solver command (default $LCS_SOLVER or 'z3 -in')");
    sub->add_option("--smt-log", cfg.smt.logFile, "append every solver query to this file");
  };

  std::vector<std::string> checkTargets;
  bool checkAll = false;
  auto* check = app.add_subcommand("check", "load and validate definitions");
  check->add_option("targets", checkTargets, "bundled names or .def files");
  check->add_flag("--all", checkAll, "every bundled language and problem");

  std::string runTarget, runTerm;
  int maxSteps = 10000;
  bool runRight = false;
  auto* run = app.add_subcommand("run", "print a concrete execution trace");
  run->add_option("target", runTarget, "bundled name or .def file")->required();
  run->add_option("--term", runTerm, "configuration to run instead of the run queries");
  run->add_option("--max-steps", maxSteps, "stop after this many steps")->check(CLI::PositiveNumber);
  run->add_flag("--right", runRight, "use the right-hand language of a problem");

  std::string proveTarget, modeText, dirText, jsonOut;
  bool tree = false, quiet = false;
  auto* prove = app.add_subcommand("prove", "prove the simulation or equivalence queries of a problem");
  prove->add_option("target", proveTarget, "bundled name or .def file")->required();
  prove->add_option("--mode", modeText, "full or partial")->check(CLI::IsMember({"full", "partial"}));
  prove->add_option("--direction", dirText, "fwd, bwd or both")->check(CLI::IsMember({"fwd", "bwd", "both"}));
  prove->add_option("--json", jsonOut, "write a structured report ('-' for stdout)");
  prove->add_flag("--tree", tree, "print proof trees");
  prove->add_flag("--quiet", quiet, "omit failure explanations");
  addProverOptions(prove);

  std::vector<std::string> benchNames;
  double timeoutSec = 600;
  int jobs = 1;
  bool corpus = false;
  std::string benchJson;
  auto* bench = app.add_subcommand("bench", "run the bundled problems and compare with the expected verdicts");
  bench->add_flag("--corpus", corpus, "the whole bundled corpus (default)");
  bench->add_option("--problem", benchNames, "restrict to these problems");
  bench->add_option("--timeout-per-problem", timeoutSec, "seconds")->check(CLI::PositiveNumber);
  bench->add_option("--jobs", jobs, "problems run in parallel")->check(CLI::PositiveNumber);
  bench->add_option("--json", benchJson, "write a structured report ('-' for stdout)");
  addProverOptions(bench);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? Ok : ConfigExit;
  }

  try {
    DefinitionLibrary& lib = DefinitionLibrary::bundled();
    if (*check) return cmdCheck(lib, checkTargets, checkAll);
    if (*run) return cmdRun(lib, runTarget, runTerm, maxSteps, runRight);
    if (*prove) {
      std::optional<Direction> dir;
      std::optional<SimKind> mode;
      if (!dirText.empty()) dir = dirText == "fwd" ? Direction::Fwd : dirText == "bwd" ? Direction::Bwd : Direction::Both;
      if (!modeText.empty()) mode = modeText == "full" ? SimKind::Full : SimKind::Partial;
      return cmdProve(lib, proveTarget, dir, mode, cfg, jsonOut, tree, quiet);
    }
    if (*bench) return cmdBench(lib, benchNames, cfg, timeoutSec, jobs, benchJson);
  } catch (const SolverTransportError& e) {
    std::cerr << "solver error: " << e.what() << "\n";
    return TransportExit;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return ConfigExit;
  }
  return Ok;
}
