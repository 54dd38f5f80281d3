#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "crepair/constant.hpp"
#include "crepair/fd_core.hpp"
#include "crepair/gadgets.hpp"
#include "crepair/simplify.hpp"

namespace crepair {

/// How one target column is computed from a source fact: the reserved
/// constant, a copy of a source column, or a tuple of sub-terms.
class Term {
 public:
  enum class Kind : unsigned char { Dot, Source, Tuple };

  static Term dot() { return Term(Kind::Dot, 0, {}); }
  static Term source(std::size_t pos) { return Term(Kind::Source, pos, {}); }
  static Term tuple(std::vector<Term> parts) { return Term(Kind::Tuple, 0, std::move(parts)); }
  /// A single position copies; several positions make a tuple of copies.
  static Term of(std::initializer_list<std::size_t> positions) {
    if (positions.size() == 1) return source(*positions.begin());
    std::vector<Term> parts;
    for (auto p : positions) parts.push_back(source(p));
    return tuple(std::move(parts));
  }

  Kind kind() const noexcept { return kind_; }
  std::size_t position() const noexcept { return pos_; }
  const std::vector<Term>& parts() const noexcept { return parts_; }

  Constant evaluate(const Fact& f) const {
    switch (kind_) {
      case Kind::Dot: return Constant::dot();
      case Kind::Source: return f[pos_];
      case Kind::Tuple: {
        std::vector<Constant> vals;
        vals.reserve(parts_.size());
        for (const auto& p : parts_) vals.push_back(p.evaluate(f));
        return Constant::tuple(std::move(vals));
      }
    }
    return Constant::dot();
  }

  /// Replaces every source reference k with inner[k].
  Term substitute(const std::vector<Term>& inner) const {
    switch (kind_) {
      case Kind::Dot: return *this;
      case Kind::Source: return inner.at(pos_);
      case Kind::Tuple: {
        std::vector<Term> ps;
        for (const auto& p : parts_) ps.push_back(p.substitute(inner));
        return tuple(std::move(ps));
      }
    }
    return *this;
  }

  std::string format(const Signature& source) const {
    switch (kind_) {
      case Kind::Dot: return std::string(kDotText);
      case Kind::Source: return source.attributes().at(pos_);
      case Kind::Tuple: {
        std::string s = "<";
        for (std::size_t i = 0; i < parts_.size(); ++i) {
          if (i) s += ",";
          s += parts_[i].format(source);
        }
        return s + ">";
      }
    }
    return "?";
  }

  friend bool operator==(const Term&, const Term&) = default;

 private:
  Term(Kind k, std::size_t pos, std::vector<Term> parts) : kind_(k), pos_(pos), parts_(std::move(parts)) {}

  Kind kind_;
  std::size_t pos_;
  std::vector<Term> parts_;
};

/// A fact-wise map from source facts to target facts, one term per target column.
struct FactWiseReduction {
  FdSchema source;
  FdSchema target;
  std::vector<Term> columns;

  Fact apply(const Fact& f) const {
    if (f.size() != source.arity()) throw SchemaError("fact arity does not match the reduction source");
    std::vector<Constant> out;
    out.reserve(columns.size());
    for (const auto& t : columns) out.push_back(t.evaluate(f));
    return Fact(std::move(out));
  }

  std::string format() const {
    std::string s;
    const auto& tsig = target.signature();
    for (std::size_t i = 0; i < columns.size(); ++i) {
      if (i) s += ", ";
      s += tsig.attributes()[i] + "=" + columns[i].format(source.signature());
    }
    return s;
  }
};

/// first: S -> T, second: T -> U; result: S -> U.
inline FactWiseReduction compose(const FactWiseReduction& first, const FactWiseReduction& second) {
  if (!(first.target.signature() == second.source.signature())) {
    throw SchemaError("cannot compose reductions: intermediate signatures differ");
  }
  FactWiseReduction r{first.source, second.target, {}};
  for (const auto& t : second.columns) r.columns.push_back(t.substitute(first.columns));
  return r;
}

inline FactWiseReduction identityReduction(const FdSchema& schema) {
  FactWiseReduction r{schema, schema, {}};
  for (std::size_t i = 0; i < schema.arity(); ++i) r.columns.push_back(Term::source(i));
  return r;
}

/// Maps facts of the simplified schema back into the schema before the step
/// by padding every removed column with the reserved constant.
inline FactWiseReduction liftThroughSimplification(const SimplificationStep& step) {
  if (step.schemaAfter.empty()) {
    throw std::invalid_argument("cannot lift through a step whose result has no FDs");
  }
  FactWiseReduction r{step.schemaAfter, step.schemaBefore, {}};
  std::size_t next = 0;
  for (std::size_t i = 0; i < step.schemaBefore.arity(); ++i) {
    if (step.removed.contains(i)) {
      r.columns.push_back(Term::dot());
    } else {
      r.columns.push_back(Term::source(next++));
    }
  }
  return r;
}

// ---------------------------------------------------------------------------
// Hard-case witness

struct HardCaseWitness {
  int caseId = 0;  // 1..5, see hardCaseOnTerminal
  HardSchema hard = HardSchema::TwoR;
  AttrSet x1, x2;
  std::optional<AttrSet> x3;         // only for the three-minima case
  FdSchema terminal;                 // the unsimplifiable schema the case was found on
  FactWiseReduction toTerminal;      // hard schema -> terminal
  FactWiseReduction reduction;       // hard schema -> input schema
  SimplificationTrace trace;
};

class HardCaseError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

namespace detail {

// A, B, C of the hard schema are source positions 0, 1, 2.
inline constexpr std::size_t kA = 0, kB = 1, kC = 2;

struct CaseRule {
  AttrSet where;
  Term term;
};

inline FactWiseReduction buildByRules(HardSchema hard, const FdSchema& target, const std::vector<CaseRule>& rules,
                                      const Term& otherwise) {
  FactWiseReduction r{hardSchema(hard), target, {}};
  for (std::size_t k = 0; k < target.arity(); ++k) {
    const Term* t = &otherwise;
    for (const auto& rule : rules) {
      if (rule.where.contains(k)) {
        t = &rule.term;
        break;
      }
    }
    r.columns.push_back(*t);
  }
  return r;
}

}  // namespace detail

/// Case analysis on an unsimplifiable schema with non-empty FD set. Scans
/// ordered pairs of distinct local-minimum left-hand sides in canonical order
/// and returns the first pair that satisfies one of the five cases, with the
/// matching reduction from a hard schema. X* below is closure(X) minus X.
///   1  X1* disjoint from X2+, X2* disjoint from X1+         from 2r
///   2  X2* disjoint from X1, X1* meets X2*, X1* misses X2   from rl
///   3  X2* disjoint from X1, X1* meets X2                   from rl
///   4  both X* meet the other side, X1\X2 in X2*, X2\X1 in X1*,
///      plus a third minimum                                 from tr
///   5  both X* meet the other side, X2\X1 not in X1*        from 2fd
inline HardCaseWitness hardCaseOnTerminal(const FdSchema& schema) {
  using detail::kA;
  using detail::kB;
  using detail::kC;
  const FdSchema norm = normalize(schema);
  if (norm.empty()) throw HardCaseError("schema has no FDs; it is tractable");
  if (anySimplificationApplies(norm)) throw HardCaseError("a simplification still applies to " + norm.format());

  const auto minima = distinctLhs(localMinima(norm));
  auto star = [&](AttrSet x) { return closure(norm, x).proper; };
  auto plus = [&](AttrSet x) { return closure(norm, x).closure; };
  const Term a = Term::source(kA), b = Term::source(kB), c = Term::source(kC);
  const Term dot = Term::dot();

  for (std::size_t i = 0; i < minima.size(); ++i) {
    for (std::size_t j = 0; j < minima.size(); ++j) {
      if (i == j) continue;
      const AttrSet x1 = minima[i], x2 = minima[j];
      const AttrSet s1 = star(x1), s2 = star(x2), p1 = plus(x1), p2 = plus(x2);
      HardCaseWitness w;
      w.x1 = x1;
      w.x2 = x2;
      w.terminal = norm;

      if (!s1.intersects(p2) && !s2.intersects(p1)) {
        w.caseId = 1;
        w.hard = HardSchema::TwoR;
        w.toTerminal = detail::buildByRules(w.hard, norm,
                                            {{x1 & x2, dot},
                                             {x1 - x2, a},
                                             {x2 - x1, b},
                                             {s1, Term::of({kA, kC})},
                                             {s2, Term::of({kB, kC})}},
                                            Term::of({kA, kB}));
        return w;
      }
      const bool leftCase2 = !s2.intersects(x1) && s1.intersects(s2) && !s1.intersects(x2);
      const bool leftCase3 = !s2.intersects(x1) && s1.intersects(x2);
      if (leftCase2 || leftCase3) {
        w.caseId = leftCase2 ? 2 : 3;
        w.hard = HardSchema::Rl;
        w.toTerminal = detail::buildByRules(w.hard, norm,
                                            {{x1 & x2, dot},
                                             {x1 - x2, a},
                                             {x2 - x1, b},
                                             {s1 - p2, Term::of({kA, kC})},
                                             {s2, Term::of({kB, kC})}},
                                            a);
        return w;
      }
      if (s1.intersects(x2) && s2.intersects(x1)) {
        if ((x1 - x2).subsetOf(s2) && (x2 - x1).subsetOf(s1)) {
          std::optional<AttrSet> x3;
          for (auto m : minima) {
            if (m != x1 && m != x2) {
              x3 = m;
              break;
            }
          }
          if (!x3) {
            throw HardCaseError("two minima " + norm.signature().format(x1) + " and " +
                                norm.signature().format(x2) + " need a third one, none found");
          }
          w.caseId = 4;
          w.hard = HardSchema::Tr;
          w.x3 = x3;
          const AttrSet y = *x3;
          w.toTerminal = detail::buildByRules(w.hard, norm,
                                              {{x1 & x2 & y, dot},
                                               {(x1 & x2) - y, a},
                                               {(x1 & y) - x2, b},
                                               {(x2 & y) - x1, c},
                                               {x1 - x2 - y, Term::of({kA, kB})},
                                               {x2 - x1 - y, Term::of({kA, kC})},
                                               {y - x1 - x2, Term::of({kB, kC})}},
                                              Term::of({kA, kB, kC}));
          return w;
        }
        if (!(x2 - x1).subsetOf(s1)) {
          w.caseId = 5;
          w.hard = HardSchema::TwoFd;
          w.toTerminal = detail::buildByRules(w.hard, norm,
                                              {{x1 & x2, dot},
                                               {x1 - x2, c},
                                               {(x2 - x1) & s1, b},
                                               {(x2 - x1) - s1, Term::of({kA, kB})},
                                               {s1 - (x2 - x1), Term::of({kB, kC})}},
                                              Term::of({kA, kB, kC}));
          return w;
        }
      }
    }
  }
  throw HardCaseError("no hard case matches " + norm.format());
}

/// Classifies the schema, finds the hard case on the terminal schema, and
/// lifts the reduction back through every simplification step so that it
/// targets the input schema.
inline HardCaseWitness hardCaseWitness(const FdSchema& schema) {
  auto trace = classify(schema);
  if (trace.tractable) throw HardCaseError("schema is tractable: " + normalize(schema).format());
  HardCaseWitness w = hardCaseOnTerminal(trace.terminal);
  FactWiseReduction r = w.toTerminal;
  for (auto it = trace.steps.rbegin(); it != trace.steps.rend(); ++it) r = compose(r, liftThroughSimplification(*it));
  // normalize(schema) and schema differ only by trivial parts, which never
  // change whether a pair of facts is consistent.
  r.target = schema;
  w.reduction = std::move(r);
  w.trace = std::move(trace);
  return w;
}

// ---------------------------------------------------------------------------
// Verifier

struct ReductionCounterexample {
  Fact first, second;  // source facts; equal components for an arity mismatch
  std::string problem;
};

struct VerificationReport {
  std::size_t factsChecked = 0;  // zero when sampling
  std::size_t pairsChecked = 0;
  bool exhaustive = true;
  std::size_t injectivityViolations = 0;
  std::size_t consistencyViolations = 0;
  std::vector<ReductionCounterexample> examples;  // first few failures

  bool ok() const { return injectivityViolations == 0 && consistencyViolations == 0; }
};

inline constexpr std::size_t kExhaustivePairLimit = 10000;
inline constexpr std::size_t kSampledPairs = 10000;
inline constexpr std::size_t kKeptCounterexamples = 8;

inline std::vector<Constant> numericDomain(std::size_t k) {
  std::vector<Constant> d;
  for (std::size_t i = 0; i < k; ++i) d.push_back(atom(std::to_string(i)));
  return d;
}

/// Checks injectivity and that every source pair is consistent exactly when
/// its image is, over all facts with values from `domain` in every column.
/// Unordered pairs are enumerated when there are fewer than 10^4 of them;
/// otherwise 10^4 pairs are drawn with a fixed seed.
inline VerificationReport verifyReduction(const FactWiseReduction& pi,
                                          const std::vector<Constant>& domain = numericDomain(3),
                                          std::uint64_t seed = 0x5eed) {
  VerificationReport rep;
  if (pi.columns.size() != pi.target.arity()) {
    throw SchemaError("reduction has " + std::to_string(pi.columns.size()) + " column terms, target arity is " +
                      std::to_string(pi.target.arity()));
  }
  const std::size_t n = pi.source.arity();
  const std::size_t d = domain.size();
  std::size_t total = 1;
  for (std::size_t i = 0; i < n; ++i) {
    if (d != 0 && total > (std::size_t{1} << 40) / d) throw std::invalid_argument("verification domain too large");
    total *= d;
  }
  auto factAt = [&](std::size_t index) {
    std::vector<Constant> v(n);
    for (std::size_t i = n; i-- > 0;) {
      v[i] = domain[index % d];
      index /= d;
    }
    return Fact(std::move(v));
  };
  auto record = [&](const Fact& f, const Fact& g, std::string problem) {
    if (rep.examples.size() < kKeptCounterexamples) rep.examples.push_back({f, g, std::move(problem)});
  };
  auto checkPair = [&](const Fact& f, const Fact& g, const Fact& pf, const Fact& pg) {
    ++rep.pairsChecked;
    if (pf == pg) {
      ++rep.injectivityViolations;
      record(f, g, "distinct facts share an image");
    }
    const bool src = pairConsistent(pi.source, f, g);
    const bool dst = pairConsistent(pi.target, pf, pg);
    if (src != dst) {
      ++rep.consistencyViolations;
      record(f, g, src ? "consistent pair maps to an inconsistent one" : "inconsistent pair maps to a consistent one");
    }
  };
  if (d == 0) return rep;

  const std::size_t pairs = total * (total - 1) / 2;
  if (pairs < kExhaustivePairLimit) {
    rep.factsChecked = total;
    std::vector<Fact> facts, images;
    for (std::size_t i = 0; i < total; ++i) {
      facts.push_back(factAt(i));
      images.push_back(pi.apply(facts.back()));
      if (images.back().size() != pi.target.arity()) throw SchemaError("image has the wrong arity");
    }
    for (std::size_t i = 0; i < total; ++i) {
      for (std::size_t j = i + 1; j < total; ++j) checkPair(facts[i], facts[j], images[i], images[j]);
    }
    return rep;
  }
  rep.exhaustive = false;
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<std::size_t> pick(0, total - 1);
  while (rep.pairsChecked < kSampledPairs) {
    std::size_t i = pick(rng), j = pick(rng);
    if (i == j) continue;
    Fact f = factAt(i), g = factAt(j);
    checkPair(f, g, pi.apply(f), pi.apply(g));
  }
  return rep;
}

}  // namespace crepair
