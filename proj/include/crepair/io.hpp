#pragma once

#include <algorithm>
#include <cctype>
#include <cstddef>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "crepair/constant.hpp"
#include "crepair/fd_core.hpp"

namespace crepair {

// ---------------------------------------------------------------------------
// Schema files
//
//   # comment
//   relation R(A,B,C)
//   fd R: A,B -> C
//   fd R: -> A          empty left-hand side

class ParseError : public std::runtime_error {
 public:
  ParseError(std::size_t line, std::size_t column, const std::string& what)
      : std::runtime_error("line " + std::to_string(line) + ", column " + std::to_string(column) + ": " + what),
        line_(line),
        column_(column) {}

  std::size_t line() const noexcept { return line_; }
  std::size_t column() const noexcept { return column_; }

 private:
  std::size_t line_, column_;
};

/// Relations in declaration order.
struct SchemaDocument {
  std::vector<FdSchema> relations;

  const FdSchema* find(std::string_view relation) const {
    for (const auto& r : relations) {
      if (r.signature().relation() == relation) return &r;
    }
    return nullptr;
  }
};

namespace detail {

class LineScanner {
 public:
  LineScanner(std::string_view text, std::size_t line) : s_(text), line_(line) {}

  void skipSpace() {
    while (pos_ < s_.size() && (s_[pos_] == ' ' || s_[pos_] == '\t' || s_[pos_] == '\r')) ++pos_;
  }
  bool atEnd() {
    skipSpace();
    return pos_ >= s_.size();
  }
  bool accept(std::string_view tok) {
    skipSpace();
    if (s_.substr(pos_, tok.size()) == tok) {
      pos_ += tok.size();
      return true;
    }
    return false;
  }
  void expect(std::string_view tok) {
    if (!accept(tok)) fail("expected '" + std::string(tok) + "'");
  }
  static bool nameChar(char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '.' ||
           static_cast<unsigned char>(c) >= 0x80;
  }
  bool peekName() {
    skipSpace();
    return pos_ < s_.size() && nameChar(s_[pos_]);
  }
  std::string name(const char* what) {
    skipSpace();
    std::size_t start = pos_;
    while (pos_ < s_.size() && nameChar(s_[pos_])) ++pos_;
    if (start == pos_) fail(std::string("expected ") + what);
    return std::string(s_.substr(start, pos_ - start));
  }
  // Comma-separated names, possibly none, ending before `stop` or end of line.
  std::vector<std::pair<std::string, std::size_t>> nameList(const char* what) {
    std::vector<std::pair<std::string, std::size_t>> out;
    if (!peekName()) return out;
    do {
      skipSpace();
      std::size_t col = column();
      out.emplace_back(name(what), col);
    } while (accept(","));
    return out;
  }
  std::size_t column() const { return pos_ + 1; }
  [[noreturn]] void fail(const std::string& msg) const { throw ParseError(line_, column(), msg); }
  [[noreturn]] void failAt(std::size_t col, const std::string& msg) const { throw ParseError(line_, col, msg); }

 private:
  std::string_view s_;
  std::size_t line_;
  std::size_t pos_ = 0;
};

}  // namespace detail

inline SchemaDocument parseSchema(std::string_view text) {
  struct Pending {
    Signature sig;
    std::vector<Fd> fds;
  };
  std::vector<Pending> rels;
  std::map<std::string, std::size_t, std::less<>> index;

  std::size_t lineNo = 0, start = 0;
  while (start <= text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(start, end - start);
    start = end + 1;
    ++lineNo;
    if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);

    detail::LineScanner sc(line, lineNo);
    if (sc.atEnd()) continue;
    std::size_t kwCol = sc.column();
    std::string keyword = sc.name("a declaration");
    if (keyword == "relation") {
      std::size_t relCol = (sc.skipSpace(), sc.column());
      std::string rel = sc.name("a relation name");
      if (index.count(rel)) sc.failAt(relCol, "duplicate relation '" + rel + "'");
      sc.expect("(");
      auto attrs = sc.nameList("an attribute name");
      sc.expect(")");
      if (!sc.atEnd()) sc.fail("unexpected text after relation declaration");
      std::vector<std::string> names;
      for (std::size_t i = 0; i < attrs.size(); ++i) {
        for (std::size_t j = 0; j < i; ++j) {
          if (attrs[j].first == attrs[i].first) sc.failAt(attrs[i].second, "duplicate attribute '" + attrs[i].first + "'");
        }
        names.push_back(attrs[i].first);
      }
      if (names.size() > AttrSet::kMaxAttributes) sc.failAt(relCol, "too many attributes");
      index[rel] = rels.size();
      rels.push_back(Pending{Signature(rel, names), {}});
    } else if (keyword == "fd") {
      std::size_t relCol = (sc.skipSpace(), sc.column());
      std::string rel = sc.name("a relation name");
      auto it = index.find(rel);
      if (it == index.end()) sc.failAt(relCol, "undeclared relation '" + rel + "'");
      Pending& p = rels[it->second];
      sc.expect(":");
      auto lhs = sc.nameList("an attribute name");
      sc.expect("->");
      auto rhs = sc.nameList("an attribute name");
      if (rhs.empty()) sc.fail("expected at least one attribute on the right-hand side");
      if (!sc.atEnd()) sc.fail("unexpected text after FD");
      auto toSet = [&](const std::vector<std::pair<std::string, std::size_t>>& names) {
        AttrSet s;
        for (const auto& [n, col] : names) {
          auto pos = p.sig.position(n);
          if (!pos) sc.failAt(col, "attribute '" + n + "' is not declared in relation '" + rel + "'");
          s.insert(*pos);
        }
        return s;
      };
      p.fds.push_back(Fd{toSet(lhs), toSet(rhs)});
    } else {
      sc.failAt(kwCol, "unknown declaration '" + keyword + "'");
    }
  }
  SchemaDocument doc;
  for (auto& p : rels) doc.relations.emplace_back(std::move(p.sig), std::move(p.fds));
  return doc;
}

inline std::string formatSchema(const FdSchema& schema) {
  const auto& sig = schema.signature();
  std::string out = "relation " + sig.relation() + "(";
  for (std::size_t i = 0; i < sig.arity(); ++i) out += (i ? "," : "") + sig.attributes()[i];
  out += ")\n";
  auto list = [&](AttrSet s) {
    std::string r;
    for (auto p : s.positions()) r += (r.empty() ? "" : ",") + sig.attributes()[p];
    return r;
  };
  for (const auto& fd : schema.fds()) {
    std::string l = list(fd.lhs);
    out += "fd " + sig.relation() + ": " + l + (l.empty() ? "-> " : " -> ") + list(fd.rhs) + "\n";
  }
  return out;
}

inline std::string formatSchema(const SchemaDocument& doc) {
  std::string out;
  for (const auto& r : doc.relations) out += formatSchema(r);
  return out;
}

// ---------------------------------------------------------------------------
// Files

inline std::string readFile(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

/// Writes to a sibling temporary file, then renames over the destination.
inline void writeFileAtomic(const std::filesystem::path& path, const std::string& content) {
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + tmp.string());
    out << content;
    if (!out.flush()) throw std::runtime_error("write failed for " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

// ---------------------------------------------------------------------------
// CSV (RFC 4180 quoting). Cells are read with decodeConstant and written with
// encodeConstant, so tuple values and the reserved constant survive a round trip.

class CsvError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Rows of raw cells; blank lines are skipped.
inline std::vector<std::vector<std::string>> parseCsvRows(std::string_view text) {
  std::vector<std::vector<std::string>> rows;
  std::vector<std::string> row;
  std::string cell;
  bool quoted = false, cellStarted = false, afterQuote = false;
  std::size_t line = 1;
  auto endRow = [&] {
    if (cellStarted || !row.empty()) {
      row.push_back(std::move(cell));
      rows.push_back(std::move(row));
    }
    row.clear();
    cell.clear();
    cellStarted = afterQuote = false;
  };
  for (std::size_t i = 0; i < text.size(); ++i) {
    char ch = text[i];
    if (quoted) {
      if (ch == '"') {
        if (i + 1 < text.size() && text[i + 1] == '"') {
          cell += '"';
          ++i;
        } else {
          quoted = false;
          afterQuote = true;
        }
      } else {
        if (ch == '\n') ++line;
        cell += ch;
      }
      continue;
    }
    if (ch == ',') {
      row.push_back(std::move(cell));
      cell.clear();
      cellStarted = true;
      afterQuote = false;
    } else if (ch == '\n' || ch == '\r') {
      if (ch == '\r' && i + 1 < text.size() && text[i + 1] == '\n') ++i;
      endRow();
      ++line;
    } else if (ch == '"' && cell.empty() && !afterQuote) {
      quoted = true;
      cellStarted = true;
    } else {
      if (afterQuote) throw CsvError("line " + std::to_string(line) + ": text after closing quote");
      cell += ch;
      cellStarted = true;
    }
  }
  if (quoted) throw CsvError("unterminated quoted cell");
  endRow();
  return rows;
}

inline std::string csvQuote(const std::string& cell) {
  if (!cell.empty() && cell.find_first_of(",\"\r\n") == std::string::npos) return cell;
  std::string out = "\"";
  for (char ch : cell) {
    if (ch == '"') out += '"';
    out += ch;
  }
  return out + "\"";
}

/// Header must name exactly the signature's attributes, in any order.
inline Instance parseCsvInstance(std::string_view text, const Signature& signature) {
  auto rows = parseCsvRows(text);
  if (rows.empty()) throw CsvError("missing header row");
  const auto& header = rows.front();
  std::vector<std::size_t> colToAttr(header.size());
  std::vector<char> seen(signature.arity(), 0);
  for (std::size_t c = 0; c < header.size(); ++c) {
    auto pos = signature.position(header[c]);
    if (!pos) throw CsvError("unexpected column '" + header[c] + "'");
    if (seen[*pos]) throw CsvError("duplicate column '" + header[c] + "'");
    seen[*pos] = 1;
    colToAttr[c] = *pos;
  }
  for (std::size_t a = 0; a < signature.arity(); ++a) {
    if (!seen[a]) throw CsvError("missing column '" + signature.attributes()[a] + "'");
  }
  std::vector<Fact> facts;
  for (std::size_t r = 1; r < rows.size(); ++r) {
    if (rows[r].size() != header.size()) {
      throw CsvError("row " + std::to_string(r + 1) + " has " + std::to_string(rows[r].size()) + " cells, expected " +
                     std::to_string(header.size()));
    }
    std::vector<Constant> values(signature.arity());
    for (std::size_t c = 0; c < header.size(); ++c) values[colToAttr[c]] = decodeConstant(rows[r][c]);
    facts.emplace_back(std::move(values));
  }
  return Instance(signature, std::move(facts));
}

/// Header in signature order, rows in canonical fact order.
inline std::string formatCsvInstance(const Instance& instance) {
  const auto& sig = instance.signature();
  std::string out;
  for (std::size_t i = 0; i < sig.arity(); ++i) out += (i ? "," : "") + csvQuote(sig.attributes()[i]);
  out += "\n";
  for (const auto& f : instance.facts()) {
    for (std::size_t i = 0; i < f.size(); ++i) out += (i ? "," : "") + csvQuote(encodeConstant(f[i]));
    out += "\n";
  }
  return out;
}

}  // namespace crepair
