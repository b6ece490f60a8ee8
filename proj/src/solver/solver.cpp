#include "lcs/solver.hpp"

#include <fcntl.h>
#include <poll.h>
#include <signal.h>
#include <sys/wait.h>
#include <unistd.h>

#include <cerrno>
#include <cstdlib>
#include <cstring>
#include <set>
#include <sstream>

#include "lcs/eval.hpp"
#include "lcs/syntax.hpp"

namespace lcs {

namespace {

std::string smtSort(SortId s) {
  if (s == sorts::Int()) return "Int";
  if (s == sorts::Bool()) return "Bool";
  if (s == sorts::Id()) return "Id";
  if (s == sorts::Env()) return "(Array Id Int)";
  throw QueryPurityError("non-builtin sort " + nameOf(s) + " in solver query");
}

std::string quoteName(const std::string& prefix, const std::string& n) { return "|" + prefix + n + "|"; }

struct Encoder {
  std::set<Term, TermLess> vars;
  std::set<std::string> ids;
  std::map<std::string, std::pair<std::vector<SortId>, SortId>> funs;
  std::vector<std::set<Term>> bound;

  bool isBound(Term v) const {
    for (auto& b : bound)
      if (b.count(v)) return true;
    return false;
  }

  void encode(std::ostream& os, Term t) {
    switch (t->tag) {
      case Tag::Var:
        smtSort(t->sort);
        if (!isBound(t)) vars.insert(t);
        os << quoteName("", t->str());
        return;
      case Tag::Int:
        if (t->ival < 0)
          os << "(- " << BigInt(-t->ival) << ")";
        else
          os << t->ival;
        return;
      case Tag::Bool:
        os << (t->bval ? "true" : "false");
        return;
      case Tag::Id:
        ids.insert(t->str());
        os << quoteName("id!", t->str());
        return;
      case Tag::Quant: {
        os << "(" << (t->exists ? "exists" : "forall") << " (";
        std::set<Term> scope;
        for (size_t i = 0; i + 1 < t->args.size(); ++i) {
          Term v = t->args[i];
          os << (i ? " " : "") << "(" << quoteName("", v->str()) << " " << smtSort(v->sort) << ")";
          scope.insert(v);
        }
        os << ") ";
        bound.push_back(scope);
        encode(os, t->body());
        bound.pop_back();
        os << ")";
        return;
      }
      case Tag::App:
        break;
    }
    if (t->kind != SymKind::Builtin)
      throw QueryPurityError("non-builtin symbol " + t->str() + " in solver query: " + show(t));
    const char* op = nullptr;
    switch (t->theory) {
      case Theory::Add: op = "+"; break;
      case Theory::Sub: op = "-"; break;
      case Theory::Mul: op = "*"; break;
      case Theory::Div: op = "div"; break;
      case Theory::Mod: op = "mod"; break;
      case Theory::Neg: op = "-"; break;
      case Theory::Lt: op = "<"; break;
      case Theory::Le: op = "<="; break;
      case Theory::Gt: op = ">"; break;
      case Theory::Ge: op = ">="; break;
      case Theory::Eq: op = "="; break;
      case Theory::Ne: op = "distinct"; break;
      case Theory::And: op = "and"; break;
      case Theory::Or: op = "or"; break;
      case Theory::Not: op = "not"; break;
      case Theory::Implies: op = "=>"; break;
      case Theory::Ite: op = "ite"; break;
      case Theory::Lookup: op = "select"; break;
      case Theory::Update: op = "store"; break;
      case Theory::EmptyEnv:
        os << "((as const (Array Id Int)) 0)";
        return;
      case Theory::Min:
      case Theory::Max: {
        std::ostringstream a, b;
        encode(a, t->args[0]);
        encode(b, t->args[1]);
        os << "(ite (" << (t->theory == Theory::Min ? "<=" : ">=") << " " << a.str() << " " << b.str() << ") "
           << a.str() << " " << b.str() << ")";
        return;
      }
      case Theory::Uninterpreted: {
        std::vector<SortId> argSorts;
        for (Term a : t->args) argSorts.push_back(a->sort);
        for (SortId s : argSorts) smtSort(s);
        funs[t->str()] = {argSorts, t->sort};
        if (t->args.empty()) {
          os << quoteName("f!", t->str());
          return;
        }
        os << "(" << quoteName("f!", t->str());
        for (Term a : t->args) {
          os << " ";
          encode(os, a);
        }
        os << ")";
        return;
      }
      case Theory::None:
        throw QueryPurityError("symbol without theory in solver query: " + t->str());
    }
    os << "(" << op;
    for (Term a : t->args) {
      os << " ";
      encode(os, a);
    }
    os << ")";
  }
};

struct SExpr {
  std::string atom;
  std::vector<SExpr> list;
  bool isList = false;
};

SExpr parseSExpr(const std::string& s, size_t& i) {
  while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
  SExpr e;
  if (i < s.size() && s[i] == '(') {
    e.isList = true;
    ++i;
    while (true) {
      while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
      if (i >= s.size()) break;
      if (s[i] == ')') {
        ++i;
        break;
      }
      e.list.push_back(parseSExpr(s, i));
    }
    return e;
  }
  if (i < s.size() && s[i] == '|') {
    size_t j = s.find('|', i + 1);
    e.atom = s.substr(i, j - i + 1);
    i = j + 1;
    return e;
  }
  size_t j = i;
  while (j < s.size() && !std::isspace(static_cast<unsigned char>(s[j])) && s[j] != '(' && s[j] != ')') ++j;
  e.atom = s.substr(i, j - i);
  i = j;
  return e;
}

std::optional<Term> valueOf(const SExpr& e, SortId sort) {
  if (sort == sorts::Bool()) {
    if (e.atom == "true") return mkTrue();
    if (e.atom == "false") return mkFalse();
    return std::nullopt;
  }
  if (!e.isList && !e.atom.empty() && std::isdigit(static_cast<unsigned char>(e.atom[0])))
    return mkInt(BigInt(e.atom));
  if (e.isList && e.list.size() == 2 && e.list[0].atom == "-" && !e.list[1].isList)
    return mkInt(-BigInt(e.list[1].atom));
  return std::nullopt;
}

}  // namespace

std::string encodeQuery(Term phi, bool withModel) {
  Encoder enc;
  std::ostringstream body;
  enc.encode(body, phi);
  std::ostringstream q;
  for (auto& id : enc.ids) q << "(declare-const " << quoteName("id!", id) << " Id)\n";
  if (enc.ids.size() >= 2) {
    q << "(assert (distinct";
    for (auto& id : enc.ids) q << " " << quoteName("id!", id);
    q << "))\n";
  }
  for (auto& [name, rank] : enc.funs) {
    q << "(declare-fun " << quoteName("f!", name) << " (";
    for (size_t i = 0; i < rank.first.size(); ++i) q << (i ? " " : "") << smtSort(rank.first[i]);
    q << ") " << smtSort(rank.second) << ")\n";
  }
  for (Term v : enc.vars) q << "(declare-const " << quoteName("", v->str()) << " " << smtSort(v->sort) << ")\n";
  q << "(assert " << body.str() << ")\n";
  q << "(check-sat)\n";
  if (withModel) {
    std::vector<Term> scalars;
    for (Term v : enc.vars)
      if (v->sort == sorts::Int() || v->sort == sorts::Bool()) scalars.push_back(v);
    if (!scalars.empty()) {
      q << "(get-value (";
      for (size_t i = 0; i < scalars.size(); ++i) q << (i ? " " : "") << quoteName("", scalars[i]->str());
      q << "))\n";
    }
  }
  return q.str();
}

struct Solver::Process {
  pid_t pid = -1;
  int in = -1;
  int out = -1;
  std::string buffer;

  ~Process() {
    if (in >= 0) close(in);
    if (out >= 0) close(out);
    if (pid > 0) {
      kill(pid, SIGKILL);
      waitpid(pid, nullptr, 0);
    }
  }

  void writeAll(const std::string& s) {
    size_t off = 0;
    while (off < s.size()) {
      ssize_t n = ::write(in, s.data() + off, s.size() - off);
      if (n < 0) {
        if (errno == EINTR) continue;
        throw SolverTransportError(std::string("write to solver failed: ") + std::strerror(errno));
      }
      off += static_cast<size_t>(n);
    }
  }

  // Returns false on timeout.
  bool readUntil(const std::string& marker, int millis, std::string& out) {
    while (true) {
      auto pos = buffer.find(marker);
      if (pos != std::string::npos) {
        out = buffer.substr(0, pos);
        buffer.erase(0, pos + marker.size());
        return true;
      }
      pollfd p{this->out, POLLIN, 0};
      int r = ::poll(&p, 1, millis);
      if (r < 0) {
        if (errno == EINTR) continue;
        throw SolverTransportError("poll on solver failed");
      }
      if (r == 0) return false;
      char chunk[4096];
      ssize_t n = ::read(this->out, chunk, sizeof chunk);
      if (n <= 0) throw SolverTransportError("solver process closed its output");
      buffer.append(chunk, static_cast<size_t>(n));
    }
  }
};

Solver::Solver(SolverConfig cfg) : cfg_(std::move(cfg)) {
  if (cfg_.timeoutMillis <= 0) throw std::invalid_argument("solver timeout must be positive");
  if (cfg_.command.empty()) {
    const char* env = std::getenv("LCS_SOLVER");
    cfg_.command = env && *env ? env : "z3 -in";
  }
  if (!cfg_.logFile.empty()) log_ = std::fopen(cfg_.logFile.c_str(), "a");
  restart();
}

Solver::~Solver() {
  if (log_) std::fclose(log_);
}

void Solver::restart() {
  proc_.reset();
  signal(SIGPIPE, SIG_IGN);
  int toChild[2], fromChild[2];
  if (pipe(toChild) != 0 || pipe(fromChild) != 0) throw SolverTransportError("cannot create pipes");
  pid_t pid = fork();
  if (pid < 0) throw SolverTransportError("cannot fork solver");
  if (pid == 0) {
    dup2(toChild[0], 0);
    dup2(fromChild[1], 1);
    dup2(fromChild[1], 2);
    close(toChild[1]);
    close(fromChild[0]);
    execl("/bin/sh", "sh", "-c", ("exec " + cfg_.command).c_str(), static_cast<char*>(nullptr));
    _exit(127);
  }
  close(toChild[0]);
  close(fromChild[1]);
  proc_ = std::make_unique<Process>();
  proc_->pid = pid;
  proc_->in = toChild[1];
  proc_->out = fromChild[0];
  std::string init = "(set-option :print-success false)\n(set-option :produce-models true)\n";
  init += "(set-option :timeout " + std::to_string(cfg_.timeoutMillis) + ")\n";
  if (!cfg_.logic.empty()) init += "(set-logic " + cfg_.logic + ")\n";
  init += "(declare-sort Id 0)\n(echo \"@@ready\")\n";
  proc_->writeAll(init);
  std::string got;
  if (!proc_->readUntil("@@ready", cfg_.timeoutMillis + 10000, got))
    throw SolverTransportError("solver did not start: " + cfg_.command);
  if (got.find("error") != std::string::npos) throw SolverTransportError("solver rejected setup: " + got);
  ++stats_.restarts;
}

SatResult Solver::send(const std::string& query, std::string* modelText) {
  std::string framed = "(push 1)\n" + query + "(pop 1)\n(echo \"@@end\")\n";
  std::string reply;
  for (int attempt = 0;; ++attempt) {
    try {
      proc_->writeAll(framed);
      if (!proc_->readUntil("@@end", cfg_.timeoutMillis + 5000, reply)) {
        restart();
        return SatResult{SatKind::Unknown, "timeout"};
      }
      break;
    } catch (const SolverTransportError&) {
      if (attempt > 0) throw;
      restart();
    }
  }
  size_t start = reply.find_first_not_of(" \t\r\n");
  std::istringstream is(start == std::string::npos ? std::string() : reply.substr(start));
  std::string first;
  std::getline(is, first);
  while (!first.empty() && std::isspace(static_cast<unsigned char>(first.back()))) first.pop_back();
  if (modelText) {
    std::string rest((std::istreambuf_iterator<char>(is)), std::istreambuf_iterator<char>());
    *modelText = rest;
  }
  if (first == "sat") return {SatKind::Sat, ""};
  if (first == "unsat") return {SatKind::Unsat, ""};
  if (first == "unknown") return {SatKind::Unknown, "solver returned unknown"};
  return {SatKind::Unknown, "solver error: " + reply};
}

SatResult Solver::runRaw(const std::string& query) { return send(query, nullptr); }

SatResult Solver::isSatisfiable(Term phi) {
  phi = simplify(phi);
  if (phi->tag == Tag::Bool) return {phi->bval ? SatKind::Sat : SatKind::Unsat, ""};
  auto tc = termCache_.find(phi);
  if (tc != termCache_.end()) {
    ++stats_.cacheHits;
    return tc->second;
  }
  std::string q = encodeQuery(phi);
  lastQuery_ = q;
  auto it = cache_.find(q);
  if (it != cache_.end()) {
    ++stats_.cacheHits;
    termCache_[phi] = it->second;
    return it->second;
  }
  ++stats_.queries;
  SatResult r = send(q, nullptr);
  if (log_) {
    std::fprintf(log_, "; query %zu\n%s; => %s\n", stats_.queries, q.c_str(),
                 r.sat() ? "sat" : r.unsat() ? "unsat" : ("unknown " + r.reason).c_str());
    std::fflush(log_);
  }
  if (r.reason != "timeout") {
    cache_[q] = r;
    termCache_[phi] = r;
  }
  return r;
}

Validity Solver::isValid(Term phi) {
  SatResult r = isSatisfiable(mkNot(phi));
  if (r.unsat()) return Validity::Valid;
  if (r.sat()) return Validity::Invalid;
  return Validity::Unknown;
}

std::optional<Valuation> Solver::checkSatWithModel(Term phi, SatResult* verdict) {
  phi = simplify(phi);
  if (phi->tag == Tag::Bool) {
    if (verdict) *verdict = {phi->bval ? SatKind::Sat : SatKind::Unsat, ""};
    if (phi->bval) return Valuation{};
    return std::nullopt;
  }
  std::string q = encodeQuery(phi, true);
  ++stats_.queries;
  std::string modelText;
  SatResult r = send(q, &modelText);
  if (verdict) *verdict = r;
  if (!r.sat()) return std::nullopt;
  Valuation val;
  VarSet fv = freeVariables(phi);
  std::map<std::string, Term> byName;
  for (Term v : fv) byName["|" + v->str() + "|"] = v;
  size_t i = 0;
  SExpr e = parseSExpr(modelText, i);
  if (e.isList) {
    for (auto& pair : e.list) {
      if (!pair.isList || pair.list.size() != 2) continue;
      auto it = byName.find(pair.list[0].atom);
      if (it == byName.end()) continue;
      if (auto v = valueOf(pair.list[1], it->second->sort)) val[it->second] = *v;
    }
  }
  return val;
}

std::vector<std::string> Solver::unsatQueries() const {
  std::vector<std::string> out;
  for (auto& [q, r] : cache_)
    if (r.unsat()) out.push_back(q);
  return out;
}

}  // namespace lcs
