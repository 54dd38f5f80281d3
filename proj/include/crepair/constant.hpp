#pragma once

#include <algorithm>
#include <compare>
#include <cstddef>
#include <initializer_list>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace crepair {

/// A cell value. Either an opaque atom, the reserved padding constant (printed
/// as "⊙"), or a structured tuple of constants such as <a,c>. Comparison is
/// structural, so tuples are never confused with atoms that happen to print
/// the same way.
class Constant {
 public:
  enum class Kind : unsigned char { Dot = 0, Atom = 1, Tuple = 2 };

  Constant() : kind_(Kind::Atom) {}

  static Constant atom(std::string text) {
    Constant c;
    c.kind_ = Kind::Atom;
    c.text_ = std::move(text);
    return c;
  }
  static Constant dot() {
    Constant c;
    c.kind_ = Kind::Dot;
    return c;
  }
  static Constant tuple(std::vector<Constant> parts) {
    Constant c;
    c.kind_ = Kind::Tuple;
    c.parts_ = std::move(parts);
    return c;
  }

  Kind kind() const noexcept { return kind_; }
  bool isDot() const noexcept { return kind_ == Kind::Dot; }
  bool isAtom() const noexcept { return kind_ == Kind::Atom; }
  bool isTuple() const noexcept { return kind_ == Kind::Tuple; }
  const std::string& text() const noexcept { return text_; }
  const std::vector<Constant>& parts() const noexcept { return parts_; }

  friend bool operator==(const Constant& a, const Constant& b) {
    return a.kind_ == b.kind_ && a.text_ == b.text_ && a.parts_ == b.parts_;
  }
  friend std::strong_ordering operator<=>(const Constant& a, const Constant& b) {
    if (auto c = a.kind_ <=> b.kind_; c != 0) return c;
    if (auto c = a.text_.compare(b.text_); c != 0) {
      return c < 0 ? std::strong_ordering::less : std::strong_ordering::greater;
    }
    const std::size_t n = std::min(a.parts_.size(), b.parts_.size());
    for (std::size_t i = 0; i < n; ++i) {
      if (auto c = a.parts_[i] <=> b.parts_[i]; c != 0) return c;
    }
    return a.parts_.size() <=> b.parts_.size();
  }

 private:
  Kind kind_;
  std::string text_;
  std::vector<Constant> parts_;
};

inline Constant atom(std::string text) { return Constant::atom(std::move(text)); }
inline Constant dot() { return Constant::dot(); }

/// A tuple of constants positionally aligned with a signature.
struct Fact {
  std::vector<Constant> values;

  Fact() = default;
  explicit Fact(std::vector<Constant> v) : values(std::move(v)) {}

  std::size_t size() const noexcept { return values.size(); }
  const Constant& operator[](std::size_t i) const { return values[i]; }

  friend bool operator==(const Fact&, const Fact&) = default;
  friend std::strong_ordering operator<=>(const Fact& a, const Fact& b) {
    const std::size_t n = std::min(a.values.size(), b.values.size());
    for (std::size_t i = 0; i < n; ++i) {
      if (auto c = a.values[i] <=> b.values[i]; c != 0) return c;
    }
    return a.values.size() <=> b.values.size();
  }
};

/// Convenience for tests and gadgets: a fact made of plain atoms.
inline Fact atoms(std::initializer_list<std::string_view> cells) {
  Fact f;
  f.values.reserve(cells.size());
  for (auto c : cells) f.values.push_back(Constant::atom(std::string(c)));
  return f;
}

// ---------------------------------------------------------------------------
// Text codec.
//
//   ⊙            the reserved constant
//   <p1,p2,...>  a tuple; components are encoded recursively
//   anything else is an atom
//
// A top-level atom that would be read back as something else (it equals "⊙",
// or starts with '<' or '\') is written with a leading '\'. Inside a tuple,
// the characters , < > \ in atoms are backslash-escaped, and an atom equal to
// "⊙" is written as "\⊙".

inline constexpr std::string_view kDotText = "\xE2\x8A\x99";  // U+2299

namespace detail {

inline bool needsTopEscape(const std::string& s) {
  if (s == kDotText) return true;
  return !s.empty() && (s.front() == '<' || s.front() == '\\');
}

inline void encodeInner(const Constant& c, std::string& out);

inline void encodeInnerAtom(const std::string& s, std::string& out) {
  if (s == kDotText) {
    out += '\\';
    out += s;
    return;
  }
  for (char ch : s) {
    if (ch == ',' || ch == '<' || ch == '>' || ch == '\\') out += '\\';
    out += ch;
  }
}

inline void encodeInner(const Constant& c, std::string& out) {
  switch (c.kind()) {
    case Constant::Kind::Dot:
      out += kDotText;
      break;
    case Constant::Kind::Atom:
      encodeInnerAtom(c.text(), out);
      break;
    case Constant::Kind::Tuple:
      out += '<';
      for (std::size_t i = 0; i < c.parts().size(); ++i) {
        if (i) out += ',';
        encodeInner(c.parts()[i], out);
      }
      out += '>';
      break;
  }
}

// Parses one tuple component starting at pos; stops at ',' or '>' at depth 0.
inline std::optional<Constant> parseTuple(std::string_view s, std::size_t& pos);

inline std::optional<Constant> parseComponent(std::string_view s, std::size_t& pos) {
  if (pos < s.size() && s[pos] == '<') return parseTuple(s, pos);
  std::string text;
  bool escaped = false;
  while (pos < s.size()) {
    char ch = s[pos];
    if (ch == ',' || ch == '>') break;
    if (ch == '<') return std::nullopt;
    if (ch == '\\') {
      if (pos + 1 >= s.size()) return std::nullopt;
      escaped = true;
      text += s[pos + 1];
      pos += 2;
      continue;
    }
    text += ch;
    ++pos;
  }
  if (!escaped && text == kDotText) return Constant::dot();
  return Constant::atom(std::move(text));
}

inline std::optional<Constant> parseTuple(std::string_view s, std::size_t& pos) {
  // s[pos] == '<'
  ++pos;
  std::vector<Constant> parts;
  if (pos < s.size() && s[pos] == '>') {
    ++pos;
    return Constant::tuple(std::move(parts));
  }
  while (true) {
    auto part = parseComponent(s, pos);
    if (!part) return std::nullopt;
    parts.push_back(std::move(*part));
    if (pos >= s.size()) return std::nullopt;
    if (s[pos] == '>') {
      ++pos;
      return Constant::tuple(std::move(parts));
    }
    ++pos;  // ','
  }
}

}  // namespace detail

inline std::string encodeConstant(const Constant& c) {
  if (c.isAtom()) {
    if (detail::needsTopEscape(c.text())) return "\\" + c.text();
    return c.text();
  }
  std::string out;
  detail::encodeInner(c, out);
  return out;
}

/// Inverse of encodeConstant. A cell starting with '<' that does not parse as
/// a tuple is kept as a plain atom.
inline Constant decodeConstant(std::string_view s) {
  if (s == kDotText) return Constant::dot();
  if (!s.empty() && s.front() == '\\') return Constant::atom(std::string(s.substr(1)));
  if (!s.empty() && s.front() == '<') {
    std::size_t pos = 0;
    auto t = detail::parseTuple(s, pos);
    if (t && pos == s.size()) return *t;
  }
  return Constant::atom(std::string(s));
}

inline std::string toString(const Fact& f) {
  std::string out = "(";
  for (std::size_t i = 0; i < f.values.size(); ++i) {
    if (i) out += ", ";
    out += encodeConstant(f.values[i]);
  }
  out += ")";
  return out;
}

}  // namespace crepair
