#pragma once

#include <array>
#include <cstdlib>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "crepair/constant.hpp"
#include "crepair/fd_core.hpp"

namespace crepair {

// ---------------------------------------------------------------------------
// The four hard schemas, all over R(A,B,C).

enum class HardSchema { TwoFd, Rl, TwoR, Tr };

inline const char* name(HardSchema h) {
  switch (h) {
    case HardSchema::TwoFd: return "2fd";
    case HardSchema::Rl: return "rl";
    case HardSchema::TwoR: return "2r";
    case HardSchema::Tr: return "tr";
  }
  return "?";
}

inline FdSchema schema2fd() { return FdSchema::of("R", {"A", "B", "C"}, {{{"A", "B"}, {"C"}}, {{"C"}, {"B"}}}); }
inline FdSchema schemaRl() { return FdSchema::of("R", {"A", "B", "C"}, {{{"A"}, {"B"}}, {{"B"}, {"C"}}}); }
inline FdSchema schema2r() { return FdSchema::of("R", {"A", "B", "C"}, {{{"A"}, {"C"}}, {{"B"}, {"C"}}}); }
inline FdSchema schemaTr() {
  return FdSchema::of("R", {"A", "B", "C"}, {{{"A", "B"}, {"C"}}, {{"A", "C"}, {"B"}}, {{"B", "C"}, {"A"}}});
}

inline FdSchema hardSchema(HardSchema h) {
  switch (h) {
    case HardSchema::TwoFd: return schema2fd();
    case HardSchema::Rl: return schemaRl();
    case HardSchema::TwoR: return schema2r();
    case HardSchema::Tr: return schemaTr();
  }
  throw std::invalid_argument("unknown hard schema");
}

// ---------------------------------------------------------------------------
// CNF formulas

class CnfError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Literals are signed 1-based variable indices, as in DIMACS.
struct CnfFormula {
  int numVars = 0;
  std::vector<std::vector<int>> clauses;

  void validate() const {
    if (numVars < 0) throw CnfError("negative variable count");
    for (std::size_t j = 0; j < clauses.size(); ++j) {
      if (clauses[j].empty()) throw CnfError("clause " + std::to_string(j + 1) + " is empty");
      for (int lit : clauses[j]) {
        if (lit == 0 || std::abs(lit) > numVars) {
          throw CnfError("literal " + std::to_string(lit) + " out of range in clause " + std::to_string(j + 1));
        }
      }
    }
  }

  /// Every clause is all-positive or all-negative.
  bool nonMixed() const {
    for (const auto& c : clauses) {
      bool pos = false, neg = false;
      for (int lit : c) (lit > 0 ? pos : neg) = true;
      if (pos && neg) return false;
    }
    return true;
  }

  bool satisfiedBy(const std::vector<bool>& assignment) const {
    for (const auto& c : clauses) {
      bool sat = false;
      for (int lit : c) {
        if (assignment[static_cast<std::size_t>(std::abs(lit) - 1)] == (lit > 0)) {
          sat = true;
          break;
        }
      }
      if (!sat) return false;
    }
    return true;
  }
};

/// Reads "p cnf V C" followed by zero-terminated clauses; 'c' lines are comments.
/// A '%' line ends the input (some benchmark files carry one).
inline CnfFormula parseDimacs(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  CnfFormula f;
  bool header = false;
  long declaredClauses = 0;
  std::vector<int> current;
  std::size_t lineNo = 0;
  while (std::getline(in, line)) {
    ++lineNo;
    std::istringstream ls(line);
    std::string tok;
    if (!(ls >> tok)) continue;
    if (tok == "c") continue;
    if (tok == "%") break;
    if (tok == "p") {
      std::string fmt;
      long v = -1, c = -1;
      if (header || !(ls >> fmt >> v >> c) || fmt != "cnf" || v < 0 || c < 0) {
        throw CnfError("line " + std::to_string(lineNo) + ": bad problem line");
      }
      header = true;
      f.numVars = static_cast<int>(v);
      declaredClauses = c;
      continue;
    }
    if (!header) throw CnfError("line " + std::to_string(lineNo) + ": clause before problem line");
    ls.clear();
    ls.str(line);
    long lit;
    while (ls >> lit) {
      if (lit == 0) {
        f.clauses.push_back(current);
        current.clear();
      } else {
        current.push_back(static_cast<int>(lit));
      }
    }
    if (!ls.eof()) throw CnfError("line " + std::to_string(lineNo) + ": expected an integer literal");
  }
  if (!header) throw CnfError("missing problem line");
  if (!current.empty()) f.clauses.push_back(current);
  if (static_cast<long>(f.clauses.size()) != declaredClauses) {
    throw CnfError("problem line declares " + std::to_string(declaredClauses) + " clauses, found " +
                   std::to_string(f.clauses.size()));
  }
  f.validate();
  return f;
}

inline std::string toDimacs(const CnfFormula& f) {
  std::string out = "p cnf " + std::to_string(f.numVars) + " " + std::to_string(f.clauses.size()) + "\n";
  for (const auto& c : f.clauses) {
    for (int lit : c) out += std::to_string(lit) + " ";
    out += "0\n";
  }
  return out;
}

namespace detail {
inline std::string clauseName(std::size_t j) { return "c" + std::to_string(j + 1); }
inline std::string varName(int lit) { return "x" + std::to_string(std::abs(lit)); }
inline std::string polarity(int lit) { return lit > 0 ? "1" : "0"; }
}  // namespace detail

/// (c_j, 1, x_i) for a positive clause containing x_i, (c_j, 0, x_i) for a
/// negative one. Requires a non-mixed formula.
inline Instance gadget2fd(const CnfFormula& formula) {
  formula.validate();
  if (!formula.nonMixed()) throw CnfError("the 2fd gadget needs a non-mixed formula");
  std::vector<Fact> facts;
  for (std::size_t j = 0; j < formula.clauses.size(); ++j) {
    for (int lit : formula.clauses[j]) {
      facts.push_back(Fact({atom(detail::clauseName(j)), atom(detail::polarity(lit)), atom(detail::varName(lit))}));
    }
  }
  return Instance(schema2fd().signature(), std::move(facts));
}

/// (c_j, x_i, 1) for a positive occurrence, (c_j, x_i, 0) for a negative one.
inline Instance gadgetRl(const CnfFormula& formula) {
  formula.validate();
  std::vector<Fact> facts;
  for (std::size_t j = 0; j < formula.clauses.size(); ++j) {
    for (int lit : formula.clauses[j]) {
      facts.push_back(Fact({atom(detail::clauseName(j)), atom(detail::varName(lit)), atom(detail::polarity(lit))}));
    }
  }
  return Instance(schemaRl().signature(), std::move(facts));
}

/// (c_j, x_i, <x_i,1>) for a positive occurrence, (c_j, x_i, <x_i,0>) for a negative one.
inline Instance gadget2r(const CnfFormula& formula) {
  formula.validate();
  std::vector<Fact> facts;
  for (std::size_t j = 0; j < formula.clauses.size(); ++j) {
    for (int lit : formula.clauses[j]) {
      auto x = atom(detail::varName(lit));
      facts.push_back(Fact({atom(detail::clauseName(j)), x, Constant::tuple({x, atom(detail::polarity(lit))})}));
    }
  }
  return Instance(schema2r().signature(), std::move(facts));
}

// ---------------------------------------------------------------------------
// Tripartite graphs

/// A set of triangles, each with one node from each of the three sides.
/// Node names are only meaningful within their side.
struct TripartiteGraph {
  std::vector<std::array<std::string, 3>> triangles;
};

/// One triangle per non-blank line: `a b c`. '#' starts a comment.
inline TripartiteGraph parseTriangles(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  TripartiteGraph g;
  std::size_t lineNo = 0;
  while (std::getline(in, line)) {
    ++lineNo;
    if (auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
    std::istringstream ls(line);
    std::vector<std::string> toks;
    std::string t;
    while (ls >> t) toks.push_back(t);
    if (toks.empty()) continue;
    if (toks.size() != 3) {
      throw std::runtime_error("line " + std::to_string(lineNo) + ": expected 3 node names, got " +
                               std::to_string(toks.size()));
    }
    g.triangles.push_back({toks[0], toks[1], toks[2]});
  }
  return g;
}

inline Instance gadgetTr(const TripartiteGraph& graph) {
  std::vector<Fact> facts;
  for (const auto& t : graph.triangles) facts.push_back(Fact({atom(t[0]), atom(t[1]), atom(t[2])}));
  return Instance(schemaTr().signature(), std::move(facts));
}

}  // namespace crepair
