#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "crepair/fd_core.hpp"

namespace crepair {

/// The three schema rewrites:
///   S1  an attribute occurs in the lhs of every FD -> drop it
///   S2  an FD with empty lhs, {} -> X              -> drop X
///   S3  FDs X1->Y1, X2->Y2 with X1 in Y2, X2 in Y1, and every lhs containing
///       X1 or X2                                   -> drop X1 u X2
enum class SimplificationKind { S1, S2, S3 };

inline const char* name(SimplificationKind k) {
  switch (k) {
    case SimplificationKind::S1: return "S1";
    case SimplificationKind::S2: return "S2";
    case SimplificationKind::S3: return "S3";
  }
  return "?";
}

class NotApplicableError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// S1 witness is an attribute position, S2 the FD {} -> X, S3 the FD pair.
using SimplificationWitness = std::variant<std::size_t, Fd, std::pair<Fd, Fd>>;

struct SimplificationStep {
  SimplificationKind kind;
  AttrSet removed;  // positions in schemaBefore
  SimplificationWitness witness;
  FdSchema schemaBefore;  // normalized
  FdSchema schemaAfter;   // normalized
};

struct SimplificationTrace {
  std::vector<SimplificationStep> steps;
  FdSchema terminal;
  bool tractable = false;
};

// ---------------------------------------------------------------------------
// Detection. All of these expect a normalized schema.

inline std::vector<std::size_t> allS1(const FdSchema& schema) {
  if (schema.empty()) return {};
  AttrSet common = schema.signature().all();
  for (const auto& fd : schema.fds()) common &= fd.lhs;
  return common.positions();
}

inline std::optional<std::size_t> findS1(const FdSchema& schema) {
  auto all = allS1(schema);
  if (all.empty()) return std::nullopt;
  return all.front();
}

inline std::vector<Fd> allS2(const FdSchema& schema) {
  std::vector<Fd> out;
  for (const auto& fd : schema.fds()) {
    if (fd.lhs.empty() && !fd.rhs.empty()) out.push_back(fd);
  }
  return out;
}

inline std::optional<Fd> findS2(const FdSchema& schema) {
  auto all = allS2(schema);
  if (all.empty()) return std::nullopt;
  return all.front();
}

inline bool s3Applies(const FdSchema& schema, const Fd& a, const Fd& b) {
  // Empty lhs would make the rewrite remove nothing; that situation is S2's.
  if (a.lhs.empty() || b.lhs.empty()) return false;
  // Entailment rather than literal containment in the rhs, so a rhs split
  // over several FDs with the same lhs still counts.
  if (!a.lhs.subsetOf(closure(schema, b.lhs).closure) || !b.lhs.subsetOf(closure(schema, a.lhs).closure)) return false;
  for (const auto& fd : schema.fds()) {
    if (!a.lhs.subsetOf(fd.lhs) && !b.lhs.subsetOf(fd.lhs)) return false;
  }
  return true;
}

inline std::vector<std::pair<Fd, Fd>> allS3(const FdSchema& schema) {
  std::vector<std::pair<Fd, Fd>> out;
  const auto& fds = schema.fds();
  for (std::size_t i = 0; i < fds.size(); ++i) {
    for (std::size_t j = i + 1; j < fds.size(); ++j) {
      if (s3Applies(schema, fds[i], fds[j])) out.emplace_back(fds[i], fds[j]);
    }
  }
  return out;
}

inline std::optional<std::pair<Fd, Fd>> findS3(const FdSchema& schema) {
  const auto& fds = schema.fds();
  for (std::size_t i = 0; i < fds.size(); ++i) {
    for (std::size_t j = i + 1; j < fds.size(); ++j) {
      if (s3Applies(schema, fds[i], fds[j])) return std::make_pair(fds[i], fds[j]);
    }
  }
  return std::nullopt;
}

inline bool anySimplificationApplies(const FdSchema& normalized) {
  return findS1(normalized) || findS2(normalized) || findS3(normalized);
}

// ---------------------------------------------------------------------------
// Application

inline AttrSet removedBy(const SimplificationWitness& w) {
  struct {
    AttrSet operator()(std::size_t a) const { return AttrSet::single(a); }
    AttrSet operator()(const Fd& fd) const { return fd.rhs; }
    AttrSet operator()(const std::pair<Fd, Fd>& p) const { return p.first.lhs | p.second.lhs; }
  } visitor;
  return std::visit(visitor, w);
}

inline bool witnessHolds(const FdSchema& normalized, SimplificationKind kind, const SimplificationWitness& w) {
  switch (kind) {
    case SimplificationKind::S1: {
      auto* a = std::get_if<std::size_t>(&w);
      if (!a || normalized.empty() || *a >= normalized.arity()) return false;
      for (const auto& fd : normalized.fds()) {
        if (!fd.lhs.contains(*a)) return false;
      }
      return true;
    }
    case SimplificationKind::S2: {
      auto* fd = std::get_if<Fd>(&w);
      if (!fd || !fd->lhs.empty() || fd->rhs.empty()) return false;
      const auto& fds = normalized.fds();
      return std::find(fds.begin(), fds.end(), *fd) != fds.end();
    }
    case SimplificationKind::S3: {
      auto* p = std::get_if<std::pair<Fd, Fd>>(&w);
      if (!p) return false;
      const auto& fds = normalized.fds();
      if (std::find(fds.begin(), fds.end(), p->first) == fds.end()) return false;
      if (std::find(fds.begin(), fds.end(), p->second) == fds.end()) return false;
      return s3Applies(normalized, p->first, p->second);
    }
  }
  return false;
}

/// Applies a specific witness. The schema is normalized first.
inline SimplificationStep applyStep(const FdSchema& schema, SimplificationKind kind,
                                    const SimplificationWitness& witness) {
  FdSchema before = normalize(schema);
  if (!witnessHolds(before, kind, witness)) {
    throw NotApplicableError(std::string("simplification ") + name(kind) + " does not apply to " +
                             before.format());
  }
  const AttrSet removed = removedBy(witness);
  FdSchema after = project(before, removed);
  return SimplificationStep{kind, removed, witness, std::move(before), std::move(after)};
}

/// Applies the first witness of the given kind in canonical order.
inline SimplificationStep applyStep(const FdSchema& schema, SimplificationKind kind) {
  FdSchema before = normalize(schema);
  std::optional<SimplificationWitness> w;
  switch (kind) {
    case SimplificationKind::S1:
      if (auto a = findS1(before)) w = *a;
      break;
    case SimplificationKind::S2:
      if (auto fd = findS2(before)) w = *fd;
      break;
    case SimplificationKind::S3:
      if (auto p = findS3(before)) w = *p;
      break;
  }
  if (!w) {
    throw NotApplicableError(std::string("simplification ") + name(kind) + " does not apply to " +
                             before.format());
  }
  return applyStep(before, kind, *w);
}

/// The first applicable simplification, tried in the order S1, S2, S3.
inline std::optional<SimplificationKind> nextSimplification(const FdSchema& normalized) {
  if (normalized.empty()) return std::nullopt;
  if (findS1(normalized)) return SimplificationKind::S1;
  if (findS2(normalized)) return SimplificationKind::S2;
  if (findS3(normalized)) return SimplificationKind::S3;
  return std::nullopt;
}

/// Runs the simplification loop to a fixpoint. The schema is tractable iff
/// the terminal FD set is empty.
inline SimplificationTrace classify(const FdSchema& schema) {
  SimplificationTrace trace;
  FdSchema cur = normalize(schema);
  while (auto kind = nextSimplification(cur)) {
    auto step = applyStep(cur, *kind);
    cur = step.schemaAfter;
    trace.steps.push_back(std::move(step));
  }
  trace.tractable = cur.empty();
  trace.terminal = std::move(cur);
  return trace;
}

inline bool isTractable(const FdSchema& schema) { return classify(schema).tractable; }

/// Re-applies every recorded step starting from `schema`; returns the final schema.
inline FdSchema replay(const FdSchema& schema, const std::vector<SimplificationStep>& steps) {
  FdSchema cur = normalize(schema);
  for (const auto& s : steps) cur = applyStep(cur, s.kind, s.witness).schemaAfter;
  return cur;
}

inline std::string describe(const SimplificationStep& step) {
  const auto& sig = step.schemaBefore.signature();
  std::string out = std::string(name(step.kind)) + " removes {" + sig.format(step.removed) + "}";
  struct {
    const Signature& sig;
    std::string operator()(std::size_t a) const { return " (common lhs attribute " + sig.attributes()[a] + ")"; }
    std::string operator()(const Fd& fd) const { return " (via " + format(sig, fd) + ")"; }
    std::string operator()(const std::pair<Fd, Fd>& p) const {
      return " (via " + format(sig, p.first) + " and " + format(sig, p.second) + ")";
    }
  } visitor{sig};
  return out + std::visit(visitor, step.witness);
}

}  // namespace crepair
