#pragma once

#include <algorithm>
#include <bit>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "crepair/constant.hpp"

namespace crepair {

/// Raised when attributes, facts or schemas do not line up with the
/// signature they are used against.
class SchemaError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A set of attributes, stored as a bitmask over positions of a signature.
/// An AttrSet carries no signature of its own; it is only meaningful next to
/// the signature it was built from.
class AttrSet {
 public:
  static constexpr std::size_t kMaxAttributes = 64;

  constexpr AttrSet() = default;
  constexpr explicit AttrSet(std::uint64_t bits) : bits_(bits) {}

  static AttrSet single(std::size_t pos) { return AttrSet(std::uint64_t{1} << pos); }
  static AttrSet firstN(std::size_t n) {
    return n >= 64 ? AttrSet(~std::uint64_t{0}) : AttrSet((std::uint64_t{1} << n) - 1);
  }
  static AttrSet of(std::initializer_list<std::size_t> positions) {
    AttrSet s;
    for (auto p : positions) s.insert(p);
    return s;
  }

  constexpr std::uint64_t bits() const noexcept { return bits_; }
  constexpr bool empty() const noexcept { return bits_ == 0; }
  std::size_t size() const noexcept { return static_cast<std::size_t>(std::popcount(bits_)); }
  bool contains(std::size_t pos) const noexcept { return (bits_ >> pos) & 1u; }
  void insert(std::size_t pos) noexcept { bits_ |= std::uint64_t{1} << pos; }
  void erase(std::size_t pos) noexcept { bits_ &= ~(std::uint64_t{1} << pos); }

  constexpr bool subsetOf(AttrSet o) const noexcept { return (bits_ & ~o.bits_) == 0; }
  constexpr bool strictSubsetOf(AttrSet o) const noexcept { return subsetOf(o) && bits_ != o.bits_; }
  constexpr bool intersects(AttrSet o) const noexcept { return (bits_ & o.bits_) != 0; }

  /// Lowest position in the set; the set must be non-empty.
  std::size_t first() const noexcept { return static_cast<std::size_t>(std::countr_zero(bits_)); }

  std::vector<std::size_t> positions() const {
    std::vector<std::size_t> out;
    for (std::uint64_t b = bits_; b; b &= b - 1) {
      out.push_back(static_cast<std::size_t>(std::countr_zero(b)));
    }
    return out;
  }

  /// Renumbers the set after the positions in `removed` are deleted from the
  /// signature: surviving positions slide down, removed ones vanish.
  AttrSet squeeze(AttrSet removed) const {
    std::uint64_t out = 0;
    std::size_t next = 0;
    for (std::size_t p = 0; p < kMaxAttributes; ++p) {
      if (removed.contains(p)) continue;
      if (contains(p)) out |= std::uint64_t{1} << next;
      ++next;
    }
    return AttrSet(out);
  }

  friend constexpr AttrSet operator|(AttrSet a, AttrSet b) { return AttrSet(a.bits_ | b.bits_); }
  friend constexpr AttrSet operator&(AttrSet a, AttrSet b) { return AttrSet(a.bits_ & b.bits_); }
  friend constexpr AttrSet operator-(AttrSet a, AttrSet b) { return AttrSet(a.bits_ & ~b.bits_); }
  AttrSet& operator|=(AttrSet o) { bits_ |= o.bits_; return *this; }
  AttrSet& operator&=(AttrSet o) { bits_ &= o.bits_; return *this; }
  AttrSet& operator-=(AttrSet o) { bits_ &= ~o.bits_; return *this; }
  friend constexpr bool operator==(AttrSet, AttrSet) = default;

  /// Lexicographic order on the ascending position lists, so {} < {0} < {0,1} < {1}.
  friend std::strong_ordering lexCompare(AttrSet a, AttrSet b) {
    std::uint64_t x = a.bits_, y = b.bits_;
    while (x && y) {
      auto px = std::countr_zero(x), py = std::countr_zero(y);
      if (px != py) return px < py ? std::strong_ordering::less : std::strong_ordering::greater;
      x &= x - 1;
      y &= y - 1;
    }
    if (!x && !y) return std::strong_ordering::equal;
    return x ? std::strong_ordering::greater : std::strong_ordering::less;
  }

 private:
  std::uint64_t bits_ = 0;
};

/// R(A1,...,Ak): a relation name with an ordered, duplicate-free heading.
class Signature {
 public:
  Signature() = default;
  Signature(std::string relation, std::vector<std::string> attributes)
      : relation_(std::move(relation)), attributes_(std::move(attributes)) {
    if (relation_.empty()) throw SchemaError("empty relation name");
    if (attributes_.size() > AttrSet::kMaxAttributes) {
      throw SchemaError("relation " + relation_ + " has more than 64 attributes");
    }
    for (std::size_t i = 0; i < attributes_.size(); ++i) {
      if (attributes_[i].empty()) throw SchemaError("empty attribute name in " + relation_);
      for (std::size_t j = 0; j < i; ++j) {
        if (attributes_[i] == attributes_[j]) {
          throw SchemaError("duplicate attribute " + attributes_[i] + " in " + relation_);
        }
      }
    }
  }

  const std::string& relation() const noexcept { return relation_; }
  const std::vector<std::string>& attributes() const noexcept { return attributes_; }
  std::size_t arity() const noexcept { return attributes_.size(); }
  AttrSet all() const { return AttrSet::firstN(arity()); }

  std::optional<std::size_t> position(std::string_view name) const {
    for (std::size_t i = 0; i < attributes_.size(); ++i) {
      if (attributes_[i] == name) return i;
    }
    return std::nullopt;
  }

  AttrSet set(const std::vector<std::string>& names) const {
    AttrSet s;
    for (const auto& n : names) {
      auto p = position(n);
      if (!p) throw SchemaError("unknown attribute " + n + " in " + relation_);
      s.insert(*p);
    }
    return s;
  }

  std::vector<std::string> names(AttrSet s) const {
    std::vector<std::string> out;
    for (auto p : s.positions()) out.push_back(attributes_.at(p));
    return out;
  }

  /// Attribute names concatenated (A,B -> "AB") when every name is a single
  /// character, comma-joined otherwise. Used for compact reporting.
  std::string format(AttrSet s) const {
    auto ns = names(s);
    bool compact = std::all_of(attributes_.begin(), attributes_.end(),
                               [](const std::string& a) { return a.size() == 1; });
    std::string out;
    for (std::size_t i = 0; i < ns.size(); ++i) {
      if (i && !compact) out += ',';
      out += ns[i];
    }
    return out;
  }

  void requireSubset(AttrSet s) const {
    if (!s.subsetOf(all())) throw SchemaError("attribute set is outside the signature of " + relation_);
  }

  Signature without(AttrSet removed) const {
    std::vector<std::string> keep;
    for (std::size_t i = 0; i < attributes_.size(); ++i) {
      if (!removed.contains(i)) keep.push_back(attributes_[i]);
    }
    return Signature(relation_, std::move(keep));
  }

  friend bool operator==(const Signature&, const Signature&) = default;

 private:
  std::string relation_;
  std::vector<std::string> attributes_;
};

/// X -> Y.
struct Fd {
  AttrSet lhs;
  AttrSet rhs;

  friend bool operator==(const Fd&, const Fd&) = default;
  friend std::strong_ordering operator<=>(const Fd& a, const Fd& b) {
    if (auto c = lexCompare(a.lhs, b.lhs); c != 0) return c;
    return lexCompare(a.rhs, b.rhs);
  }
};

inline std::string format(const Signature& sig, const Fd& fd) {
  auto side = [&](AttrSet s) { return s.empty() ? std::string("∅") : sig.format(s); };
  return side(fd.lhs) + "->" + side(fd.rhs);
}

/// A single-relation signature with a set of FDs. FDs are kept in canonical
/// order (lexicographic on lhs positions, then rhs positions) with exact
/// duplicates removed, so every "pick the first" downstream is deterministic.
class FdSchema {
 public:
  FdSchema() = default;
  FdSchema(Signature signature, std::vector<Fd> fds)
      : signature_(std::move(signature)), fds_(std::move(fds)) {
    const AttrSet all = signature_.all();
    for (const auto& fd : fds_) {
      if (!fd.lhs.subsetOf(all) || !fd.rhs.subsetOf(all)) {
        throw SchemaError("FD references an attribute outside " + signature_.relation());
      }
    }
    std::sort(fds_.begin(), fds_.end());
    fds_.erase(std::unique(fds_.begin(), fds_.end()), fds_.end());
  }

  /// Builds a schema from attribute names, e.g.
  /// of("R", {"A","B","C"}, {{{"A","B"}, {"C"}}, {{"C"}, {"B"}}}).
  static FdSchema of(std::string relation, std::vector<std::string> attributes,
                     const std::vector<std::pair<std::vector<std::string>, std::vector<std::string>>>& fds) {
    Signature sig(std::move(relation), std::move(attributes));
    std::vector<Fd> out;
    for (const auto& [l, r] : fds) out.push_back(Fd{sig.set(l), sig.set(r)});
    return FdSchema(std::move(sig), std::move(out));
  }

  const Signature& signature() const noexcept { return signature_; }
  const std::vector<Fd>& fds() const noexcept { return fds_; }
  bool empty() const noexcept { return fds_.empty(); }
  std::size_t arity() const noexcept { return signature_.arity(); }

  std::string format() const {
    std::string out = "{";
    for (std::size_t i = 0; i < fds_.size(); ++i) {
      if (i) out += ", ";
      out += crepair::format(signature_, fds_[i]);
    }
    return out + "}";
  }

  friend bool operator==(const FdSchema&, const FdSchema&) = default;

 private:
  Signature signature_;
  std::vector<Fd> fds_;
};

/// A deduplicated set of facts over one signature, stored in canonical
/// (lexicographic) fact order.
class Instance {
 public:
  Instance() = default;
  Instance(Signature signature, std::vector<Fact> facts) : signature_(std::move(signature)) {
    for (const auto& f : facts) {
      if (f.size() != signature_.arity()) {
        throw SchemaError("fact " + toString(f) + " does not match the arity of " + signature_.relation());
      }
    }
    std::sort(facts.begin(), facts.end());
    const std::size_t before = facts.size();
    facts.erase(std::unique(facts.begin(), facts.end()), facts.end());
    dropped_ = before - facts.size();
    facts_ = std::move(facts);
  }

  const Signature& signature() const noexcept { return signature_; }
  const std::vector<Fact>& facts() const noexcept { return facts_; }
  std::size_t size() const noexcept { return facts_.size(); }
  bool empty() const noexcept { return facts_.empty(); }
  /// Number of duplicate facts discarded at construction.
  std::size_t droppedDuplicates() const noexcept { return dropped_; }

  bool contains(const Fact& f) const { return std::binary_search(facts_.begin(), facts_.end(), f); }

  bool subsetOf(const Instance& other) const {
    return signature_ == other.signature_ &&
           std::includes(other.facts_.begin(), other.facts_.end(), facts_.begin(), facts_.end());
  }

  friend bool operator==(const Instance& a, const Instance& b) {
    return a.signature_ == b.signature_ && a.facts_ == b.facts_;
  }

 private:
  Signature signature_;
  std::vector<Fact> facts_;
  std::size_t dropped_ = 0;
};

// ---------------------------------------------------------------------------
// FD algebra

struct ClosureResult {
  AttrSet base;     // X
  AttrSet closure;  // X+
  AttrSet proper;   // X+ \ X
};

/// Least fixpoint of X under the FDs of the schema.
inline ClosureResult closure(const FdSchema& schema, AttrSet x) {
  schema.signature().requireSubset(x);
  AttrSet cur = x;
  bool changed = true;
  while (changed) {
    changed = false;
    for (const auto& fd : schema.fds()) {
      if (fd.lhs.subsetOf(cur) && !fd.rhs.subsetOf(cur)) {
        cur |= fd.rhs;
        changed = true;
      }
    }
  }
  return ClosureResult{x, cur, cur - x};
}

inline bool entails(const FdSchema& schema, const Fd& fd) {
  schema.signature().requireSubset(fd.rhs);
  return fd.rhs.subsetOf(closure(schema, fd.lhs).closure);
}

inline bool equivalent(const FdSchema& a, const FdSchema& b) {
  if (!(a.signature() == b.signature())) throw SchemaError("equivalence requires identical signatures");
  for (const auto& fd : a.fds()) {
    if (!entails(b, fd)) return false;
  }
  for (const auto& fd : b.fds()) {
    if (!entails(a, fd)) return false;
  }
  return true;
}

/// Drops trivial attributes from every rhs, then FDs left with an empty rhs.
inline FdSchema normalize(const FdSchema& schema) {
  std::vector<Fd> out;
  for (const auto& fd : schema.fds()) {
    Fd n{fd.lhs, fd.rhs - fd.lhs};
    if (!n.rhs.empty()) out.push_back(n);
  }
  return FdSchema(schema.signature(), std::move(out));
}

inline bool isNormalized(const FdSchema& schema) {
  return std::all_of(schema.fds().begin(), schema.fds().end(),
                     [](const Fd& fd) { return !fd.rhs.empty() && !fd.rhs.intersects(fd.lhs); });
}

/// FDs whose lhs strictly contains no other FD's lhs. Several FDs may share a
/// minimal lhs; use distinctLhs() to count minimum sites.
inline std::vector<Fd> localMinima(const FdSchema& schema) {
  std::vector<Fd> out;
  for (const auto& fd : schema.fds()) {
    bool minimal = std::none_of(schema.fds().begin(), schema.fds().end(),
                                [&](const Fd& o) { return o.lhs.strictSubsetOf(fd.lhs); });
    if (minimal) out.push_back(fd);
  }
  return out;
}

inline std::vector<AttrSet> distinctLhs(const std::vector<Fd>& fds) {
  std::vector<AttrSet> out;
  for (const auto& fd : fds) {
    if (std::find(out.begin(), out.end(), fd.lhs) == out.end()) out.push_back(fd.lhs);
  }
  return out;
}

inline bool isChain(const FdSchema& schema) {
  const auto& fds = schema.fds();
  for (std::size_t i = 0; i < fds.size(); ++i) {
    for (std::size_t j = i + 1; j < fds.size(); ++j) {
      if (!fds[i].lhs.subsetOf(fds[j].lhs) && !fds[j].lhs.subsetOf(fds[i].lhs)) return false;
    }
  }
  return true;
}

/// Removes `removed` from the signature and from every FD, then normalizes.
inline FdSchema project(const FdSchema& schema, AttrSet removed) {
  schema.signature().requireSubset(removed);
  std::vector<Fd> out;
  out.reserve(schema.fds().size());
  for (const auto& fd : schema.fds()) {
    out.push_back(Fd{(fd.lhs - removed).squeeze(removed), (fd.rhs - removed).squeeze(removed)});
  }
  return normalize(FdSchema(schema.signature().without(removed), std::move(out)));
}

inline Fact projectFact(const Fact& f, AttrSet removed) {
  Fact out;
  for (std::size_t i = 0; i < f.size(); ++i) {
    if (!removed.contains(i)) out.values.push_back(f[i]);
  }
  return out;
}

/// Drops the removed columns. Facts that coincide afterwards collapse into one.
inline Instance projectInstance(const Instance& instance, AttrSet removed) {
  instance.signature().requireSubset(removed);
  std::vector<Fact> out;
  out.reserve(instance.size());
  for (const auto& f : instance.facts()) out.push_back(projectFact(f, removed));
  return Instance(instance.signature().without(removed), std::move(out));
}

inline bool agreeOn(const Fact& f, const Fact& g, AttrSet attrs) {
  for (std::uint64_t b = attrs.bits(); b; b &= b - 1) {
    auto p = static_cast<std::size_t>(std::countr_zero(b));
    if (!(f[p] == g[p])) return false;
  }
  return true;
}

inline bool violates(const Fd& fd, const Fact& f, const Fact& g) {
  return agreeOn(f, g, fd.lhs) && !agreeOn(f, g, fd.rhs);
}

/// First FD (canonical order) violated by the pair, if any.
inline std::optional<Fd> firstViolated(const FdSchema& schema, const Fact& f, const Fact& g) {
  for (const auto& fd : schema.fds()) {
    if (violates(fd, f, g)) return fd;
  }
  return std::nullopt;
}

inline bool pairConsistent(const FdSchema& schema, const Fact& f, const Fact& g) {
  return !firstViolated(schema, f, g).has_value();
}

inline void requireSameSignature(const FdSchema& schema, const Instance& instance) {
  if (!(schema.signature() == instance.signature())) {
    throw SchemaError("instance of " + instance.signature().relation() +
                      " does not match the schema signature of " + schema.signature().relation());
  }
}

inline bool isConsistent(const FdSchema& schema, const Instance& instance) {
  requireSameSignature(schema, instance);
  const auto& fs = instance.facts();
  for (std::size_t i = 0; i < fs.size(); ++i) {
    for (std::size_t j = i + 1; j < fs.size(); ++j) {
      if (!pairConsistent(schema, fs[i], fs[j])) return false;
    }
  }
  return true;
}

struct Violation {
  Fact first;
  Fact second;
  Fd fd;
};

/// Every unordered conflicting pair with the first FD it violates. Pairs come
/// out in canonical fact order.
inline std::vector<Violation> violatingPairs(const FdSchema& schema, const Instance& instance) {
  requireSameSignature(schema, instance);
  std::vector<Violation> out;
  const auto& fs = instance.facts();
  for (std::size_t i = 0; i < fs.size(); ++i) {
    for (std::size_t j = i + 1; j < fs.size(); ++j) {
      if (auto fd = firstViolated(schema, fs[i], fs[j])) out.push_back(Violation{fs[i], fs[j], *fd});
    }
  }
  return out;
}

}  // namespace crepair
