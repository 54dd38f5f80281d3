#pragma once

#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <filesystem>
#include <iostream>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "crepair/fd_core.hpp"
#include "crepair/gadgets.hpp"
#include "crepair/io.hpp"
#include "crepair/oracle.hpp"
#include "crepair/reduction.hpp"
#include "crepair/repair.hpp"
#include "crepair/simplify.hpp"

namespace crepair::cli {

namespace fs = std::filesystem;
using Json = nlohmann::ordered_json;

// Exit codes
inline constexpr int kOk = 0;
inline constexpr int kError = 1;
inline constexpr int kIntractable = 2;  // classify: some relation is hard; repair: refused a hard relation
inline constexpr int kViolations = 2;   // verify-reduction: a reduction failed its check

inline Json namesJson(const Signature& sig, AttrSet s) {
  Json a = Json::array();
  for (auto& n : sig.names(s)) a.push_back(n);
  return a;
}

inline Json fdsJson(const FdSchema& schema) {
  Json a = Json::array();
  for (const auto& fd : schema.fds()) {
    a.push_back(Json{{"lhs", namesJson(schema.signature(), fd.lhs)}, {"rhs", namesJson(schema.signature(), fd.rhs)}});
  }
  return a;
}

inline Json traceJson(const SimplificationTrace& trace) {
  Json steps = Json::array();
  for (const auto& s : trace.steps) {
    steps.push_back(Json{{"kind", name(s.kind)},
                         {"removed", namesJson(s.schemaBefore.signature(), s.removed)},
                         {"description", describe(s)}});
  }
  return steps;
}

inline Json classificationJson(const FdSchema& schema, const SimplificationTrace& trace) {
  return Json{{"relation", schema.signature().relation()},
              {"attributes", schema.signature().attributes()},
              {"fds", fdsJson(schema)},
              {"tractable", trace.tractable},
              {"trace", traceJson(trace)},
              {"terminal", fdsJson(trace.terminal)}};
}

struct Streams {
  std::ostream& out;
  std::ostream& err;
};

inline SchemaDocument loadSchema(const std::string& path) { return parseSchema(readFile(path)); }

inline Instance loadInstance(const fs::path& dir, const FdSchema& schema) {
  const fs::path file = dir / (schema.signature().relation() + ".csv");
  try {
    return parseCsvInstance(readFile(file), schema.signature());
  } catch (const CsvError& e) {
    throw CsvError(file.string() + ": " + e.what());
  }
}

inline void requireDirectory(const fs::path& dir) {
  if (!fs::is_directory(dir)) throw std::runtime_error("not a directory: " + dir.string());
}

// ---------------------------------------------------------------------------

inline int cmdClassify(const std::string& schemaPath, bool json, Streams io) {
  auto doc = loadSchema(schemaPath);
  bool allTractable = true;
  Json rels = Json::array();
  for (const auto& r : doc.relations) {
    auto trace = classify(r);
    allTractable = allTractable && trace.tractable;
    if (json) {
      rels.push_back(classificationJson(r, trace));
      continue;
    }
    io.out << r.signature().relation() << " " << r.format() << ": " << (trace.tractable ? "tractable" : "NP-hard")
           << "\n";
    for (const auto& s : trace.steps) io.out << "  " << describe(s) << "\n";
    if (!trace.tractable) io.out << "  terminal " << trace.terminal.format() << "\n";
  }
  if (json) io.out << Json{{"command", "classify"}, {"relations", rels}}.dump(2) << "\n";
  return allTractable ? kOk : kIntractable;
}

struct RepairOptions {
  std::string schema, data, out;
  std::optional<std::size_t> fallbackCap;
  bool forceOracle = false;
  std::size_t oracleCap = kDefaultOracleCap;
  bool stable = false;
};

inline int cmdRepair(const RepairOptions& opt, Streams io) {
  auto doc = loadSchema(opt.schema);
  requireDirectory(opt.data);
  if (!opt.out.empty()) fs::create_directories(opt.out);

  // Compute everything before writing, so a refusal leaves no partial output.
  struct Outcome {
    Json report;
    Instance repair;
  };
  std::vector<Outcome> outcomes;
  for (const auto& r : doc.relations) {
    const auto start = std::chrono::steady_clock::now();
    Instance input = loadInstance(opt.data, r);
    auto trace = classify(r);
    std::optional<RepairResult> result;
    std::string method;
    if (!opt.forceOracle && trace.tractable) {
      result = findCRep(r, input);
      method = "simplification";
    } else if (opt.forceOracle || opt.fallbackCap) {
      result = bruteForceCRep(r, input, opt.forceOracle ? opt.oracleCap : *opt.fallbackCap);
      method = "oracle";
    } else {
      io.err << "error: relation " << r.signature().relation() << " " << r.format()
             << " is NP-hard to repair; rerun with --fallback-oracle CAP to use brute force\n";
      return kIntractable;
    }
    Json rep = classificationJson(r, trace);
    rep["method"] = method;
    rep["inputSize"] = input.size();
    rep["droppedDuplicates"] = input.droppedDuplicates();
    rep["repairSize"] = result->size;
    rep["removed"] = input.size() - result->size;
    if (!opt.stable) {
      rep["elapsedMs"] =
          std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
    }
    outcomes.push_back(Outcome{std::move(rep), std::move(result->repair)});
  }

  Json rels = Json::array();
  for (auto& o : outcomes) {
    const auto& rel = o.repair.signature().relation();
    if (!opt.out.empty()) writeFileAtomic(fs::path(opt.out) / (rel + ".csv"), formatCsvInstance(o.repair));
    io.out << rel << ": kept " << o.report["repairSize"].get<std::size_t>() << " of "
           << o.report["inputSize"].get<std::size_t>() << " facts (" << o.report["method"].get<std::string>()
           << ")\n";
    rels.push_back(std::move(o.report));
  }
  Json report{{"command", opt.forceOracle ? "oracle" : "repair"}, {"relations", rels}};
  if (!opt.out.empty()) writeFileAtomic(fs::path(opt.out) / "report.json", report.dump(2) + "\n");
  return kOk;
}

inline int cmdGadget(const std::string& type, const std::string& inPath, const std::string& outDir, Streams io) {
  Instance inst;
  FdSchema schema;
  const std::string text = readFile(inPath);
  if (type == "tr") {
    inst = gadgetTr(parseTriangles(text));
    schema = schemaTr();
  } else {
    auto cnf = parseDimacs(text);
    if (type == "2fd") {
      inst = gadget2fd(cnf);
      schema = schema2fd();
    } else if (type == "rl") {
      inst = gadgetRl(cnf);
      schema = schemaRl();
    } else if (type == "2r") {
      inst = gadget2r(cnf);
      schema = schema2r();
    } else {
      throw std::runtime_error("unknown gadget type '" + type + "'");
    }
    io.out << "clauses: " << cnf.clauses.size() << "\n";
  }
  fs::create_directories(outDir);
  writeFileAtomic(fs::path(outDir) / (schema.signature().relation() + ".csv"), formatCsvInstance(inst));
  writeFileAtomic(fs::path(outDir) / "schema.fd", formatSchema(schema));
  io.out << "facts: " << inst.size() << "\n";
  return kOk;
}

inline int cmdVerify(const std::string& schemaPath, std::size_t domain, bool json, Streams io) {
  auto doc = loadSchema(schemaPath);
  bool allOk = true;
  Json rels = Json::array();
  for (const auto& r : doc.relations) {
    const auto& rel = r.signature().relation();
    if (isTractable(r)) {
      if (json) rels.push_back(Json{{"relation", rel}, {"tractable", true}});
      else io.out << rel << ": tractable, no hardness witness\n";
      continue;
    }
    auto w = hardCaseWitness(r);
    auto rep = verifyReduction(w.reduction, numericDomain(domain));
    allOk = allOk && rep.ok();
    if (json) {
      Json ex = Json::array();
      for (const auto& c : rep.examples) {
        ex.push_back(Json{{"first", toString(c.first)}, {"second", toString(c.second)}, {"problem", c.problem}});
      }
      rels.push_back(Json{{"relation", rel},
                          {"tractable", false},
                          {"case", w.caseId},
                          {"source", name(w.hard)},
                          {"mapping", w.reduction.format()},
                          {"exhaustive", rep.exhaustive},
                          {"pairsChecked", rep.pairsChecked},
                          {"injectivityViolations", rep.injectivityViolations},
                          {"consistencyViolations", rep.consistencyViolations},
                          {"counterexamples", ex}});
      continue;
    }
    io.out << rel << ": case " << w.caseId << ", reduction from " << name(w.hard) << "\n"
           << "  " << w.reduction.format() << "\n"
           << "  " << rep.pairsChecked << (rep.exhaustive ? " pairs (exhaustive)" : " pairs (sampled)") << ", "
           << rep.injectivityViolations << " injectivity and " << rep.consistencyViolations
           << " consistency violations\n";
    for (const auto& c : rep.examples) {
      io.out << "  " << c.problem << ": " << toString(c.first) << " / " << toString(c.second) << "\n";
    }
  }
  if (json) io.out << Json{{"command", "verify-reduction"}, {"relations", rels}}.dump(2) << "\n";
  return allOk ? kOk : kViolations;
}

// ---------------------------------------------------------------------------

inline int run(int argc, const char* const* argv, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
  CLI::App app{"Cardinality repairs for functional-dependency schemas"};
  app.require_subcommand(1);

  std::string schema, data, outDir, type, in;
  bool json = false, stable = false;
  std::size_t cap = kDefaultOracleCap, domain = 3, fallback = 0;

  auto* classifyCmd = app.add_subcommand("classify", "Decide tractability of every relation");
  classifyCmd->add_option("--schema", schema, "Schema file")->required();
  classifyCmd->add_flag("--json", json, "Print a JSON report");

  auto* repairCmd = app.add_subcommand("repair", "Compute cardinality repairs of CSV data");
  repairCmd->add_option("--schema", schema, "Schema file")->required();
  repairCmd->add_option("--data", data, "Directory with one <relation>.csv per relation")->required();
  repairCmd->add_option("--out", outDir, "Output directory")->required();
  auto* fallbackOpt =
      repairCmd->add_option("--fallback-oracle", fallback, "Brute-force NP-hard relations with at most CAP facts");
  repairCmd->add_flag("--stable", stable, "Omit timing fields from the report");

  auto* oracleCmd = app.add_subcommand("oracle", "Brute-force cardinality repairs regardless of tractability");
  oracleCmd->add_option("--schema", schema, "Schema file")->required();
  oracleCmd->add_option("--data", data, "Directory with one <relation>.csv per relation")->required();
  oracleCmd->add_option("--cap", cap, "Maximum number of facts per relation")->capture_default_str();
  oracleCmd->add_option("--out", outDir, "Output directory");
  oracleCmd->add_flag("--stable", stable, "Omit timing fields from the report");

  auto* gadgetCmd = app.add_subcommand("gadget", "Build a hardness gadget instance");
  gadgetCmd->add_option("--type", type, "Gadget type")->required()->check(CLI::IsMember({"2fd", "rl", "2r", "tr"}));
  gadgetCmd->add_option("--in", in, "DIMACS CNF file, or a triangle list for type tr")->required();
  gadgetCmd->add_option("--out", outDir, "Output directory")->required();

  auto* verifyCmd = app.add_subcommand("verify-reduction", "Find and check a hardness reduction per relation");
  verifyCmd->add_option("--schema", schema, "Schema file")->required();
  verifyCmd->add_option("--domain", domain, "Values per source column")->capture_default_str()->check(
      CLI::Range(std::size_t{1}, std::size_t{6}));
  verifyCmd->add_flag("--json", json, "Print a JSON report");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e, out, err);
    return code == 0 ? kOk : kError;
  }

  Streams io{out, err};
  try {
    if (*classifyCmd) return cmdClassify(schema, json, io);
    if (*repairCmd) {
      RepairOptions opt{schema, data, outDir, std::nullopt, false, cap, stable};
      if (*fallbackOpt) opt.fallbackCap = fallback;
      return cmdRepair(opt, io);
    }
    if (*oracleCmd) return cmdRepair(RepairOptions{schema, data, outDir, std::nullopt, true, cap, stable}, io);
    if (*gadgetCmd) return cmdGadget(type, in, outDir, io);
    if (*verifyCmd) return cmdVerify(schema, domain, json, io);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kError;
  }
  return kError;
}

}  // namespace crepair::cli
