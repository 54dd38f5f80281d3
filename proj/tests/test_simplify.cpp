#include <gtest/gtest.h>

#include <iostream>

#include "support/generators.hpp"

using namespace crepair;
using namespace crepair::testing;

namespace {

FdSchema example1() {
  return FdSchema::of("R", {"A", "B", "C", "D", "E", "F"},
                      {{{}, {"A"}}, {{"D", "B"}, {"A", "C", "E"}}, {{"D", "C"}, {"B"}}, {{"D", "B"}, {"F"}}});
}

std::vector<std::string> removedNames(const SimplificationStep& s) {
  return s.schemaBefore.signature().names(s.removed);
}

TEST(FindS1, Examples) {
  auto s = FdSchema::of("R", {"B", "C", "D", "E", "F"}, {{{"D", "B"}, {"C", "E"}}, {{"D", "C"}, {"B"}}, {{"D", "B"}, {"F"}}});
  ASSERT_TRUE(findS1(s));
  EXPECT_EQ(s.signature().attributes()[*findS1(s)], "D");
  EXPECT_FALSE(findS1(schemaRl()));
  auto ab = FdSchema::of("R", {"A", "B", "C"}, {{{"A", "B"}, {"C"}}});
  EXPECT_EQ(findS1(ab), std::optional<std::size_t>(0));
  EXPECT_FALSE(findS1(FdSchema::of("R", {"A"}, {})));
}

TEST(FindS2, Examples) {
  auto s = normalize(example1());
  auto fd = findS2(s);
  ASSERT_TRUE(fd);
  EXPECT_EQ(format(s.signature(), *fd), "∅->A");
  EXPECT_FALSE(findS2(FdSchema::of("R", {"A", "B"}, {{{"A"}, {"B"}}})));
  auto ef = FdSchema::of("R", {"E", "F"}, {{{}, {"F"}}, {{}, {"E"}}});
  EXPECT_EQ(format(ef.signature(), *findS2(ef)), "∅->E");
}

TEST(FindS3, Examples) {
  auto s = FdSchema::of("R", {"B", "C", "E", "F"}, {{{"B"}, {"C", "E"}}, {{"C"}, {"B"}}, {{"B"}, {"F"}}});
  auto p = findS3(s);
  ASSERT_TRUE(p);
  EXPECT_EQ(format(s.signature(), p->first), "B->CE");
  EXPECT_EQ(format(s.signature(), p->second), "C->B");
  EXPECT_FALSE(findS3(schemaRl()));
  auto ab = FdSchema::of("R", {"A", "B"}, {{{"A"}, {"B"}}, {{"B"}, {"A"}}});
  ASSERT_TRUE(findS3(ab));
}

TEST(FindS3, EmptyLhsIsNotAPair) {
  // {} -> A and A -> {} would "match" with nothing removed on one side
  auto s = FdSchema::of("R", {"A", "B"}, {{{}, {"A"}}, {{"A"}, {"B"}}});
  EXPECT_FALSE(findS3(s));
}

TEST(FindS3, UsesEntailmentNotLiteralRhs) {
  // A's rhs is split over two FDs; A -> BC still follows
  auto split = FdSchema::of("R", {"A", "B", "C"}, {{{"A"}, {"B"}}, {{"A"}, {"C"}}, {{"B", "C"}, {"A"}}});
  EXPECT_TRUE(findS3(split));
  EXPECT_TRUE(isTractable(split));
  // B -> AC only through B -> A and AB -> C
  auto chained = FdSchema::of("R", {"A", "B", "C"},
                              {{{"A", "B"}, {"C"}}, {{"A", "C"}, {"B"}}, {{"B"}, {"A"}}, {{"B", "C"}, {"A"}}});
  EXPECT_TRUE(isTractable(chained));
  EXPECT_FALSE(isTractable(schemaTr()));
}

TEST(ApplyStep, Examples) {
  auto ab = FdSchema::of("R", {"A", "B", "C"}, {{{"A", "B"}, {"C"}}});
  auto st = applyStep(ab, SimplificationKind::S1);
  EXPECT_EQ(st.schemaAfter, FdSchema::of("R", {"B", "C"}, {{{"B"}, {"C"}}}));

  auto sym = FdSchema::of("R", {"A", "B"}, {{{"A"}, {"B"}}, {{"B"}, {"A"}}});
  auto s3 = applyStep(sym, SimplificationKind::S3);
  EXPECT_EQ(s3.removed, sym.signature().all());
  EXPECT_TRUE(s3.schemaAfter.empty());
  EXPECT_EQ(s3.schemaAfter.arity(), 0u);

  EXPECT_THROW(applyStep(schemaRl(), SimplificationKind::S1), NotApplicableError);
  EXPECT_THROW(applyStep(schemaRl(), SimplificationKind::S2), NotApplicableError);
  EXPECT_THROW(applyStep(schemaRl(), SimplificationKind::S3), NotApplicableError);
  EXPECT_THROW(applyStep(sym, SimplificationKind::S1, SimplificationWitness{std::size_t{0}}), NotApplicableError);
}

TEST(Classify, Example1Trace) {
  auto t = classify(example1());
  EXPECT_TRUE(t.tractable);
  EXPECT_TRUE(t.terminal.empty());
  ASSERT_EQ(t.steps.size(), 5u);
  EXPECT_EQ(t.steps[0].kind, SimplificationKind::S2);
  EXPECT_EQ(removedNames(t.steps[0]), std::vector<std::string>{"A"});
  EXPECT_EQ(t.steps[1].kind, SimplificationKind::S1);
  EXPECT_EQ(removedNames(t.steps[1]), std::vector<std::string>{"D"});
  EXPECT_EQ(t.steps[2].kind, SimplificationKind::S3);
  EXPECT_EQ(removedNames(t.steps[2]), (std::vector<std::string>{"B", "C"}));
  EXPECT_EQ(t.steps[2].schemaAfter, FdSchema::of("R", {"E", "F"}, {{{}, {"E"}}, {{}, {"F"}}}));
  EXPECT_EQ(t.steps[3].kind, SimplificationKind::S2);
  EXPECT_EQ(removedNames(t.steps[3]), std::vector<std::string>{"E"});
  EXPECT_EQ(t.steps[4].kind, SimplificationKind::S2);
  EXPECT_EQ(removedNames(t.steps[4]), std::vector<std::string>{"F"});
}

TEST(Classify, HardSchemasHaveEmptyTrace) {
  for (auto h : {HardSchema::TwoFd, HardSchema::Rl, HardSchema::TwoR, HardSchema::Tr}) {
    auto t = classify(hardSchema(h));
    EXPECT_FALSE(t.tractable) << name(h);
    EXPECT_TRUE(t.steps.empty()) << name(h);
    EXPECT_EQ(t.terminal, hardSchema(h)) << name(h);
  }
}

TEST(Classify, EmptySchemaIsTractable) {
  auto t = classify(FdSchema::of("R", {"A"}, {}));
  EXPECT_TRUE(t.tractable);
  EXPECT_TRUE(t.steps.empty());
}

TEST(Classify, ChainsAreTractable) {
  Rng rng(21);
  for (int t = 0; t < 300; ++t) {
    // nested lhs sets L0 ⊆ L1 ⊆ ... with arbitrary rhs
    const std::size_t n = uniform(rng, 1, 6);
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::shuffle(order.begin(), order.end(), rng);
    std::vector<Fd> fds;
    AttrSet lhs;
    std::size_t next = 0;
    const std::size_t m = uniform(rng, 1, 4);
    for (std::size_t k = 0; k < m; ++k) {
      const std::size_t grow = uniform(rng, 0, 2);
      for (std::size_t g = 0; g < grow && next < n; ++g) lhs.insert(order[next++]);
      fds.push_back(Fd{lhs, randomSubset(rng, n, 0.5)});
    }
    FdSchema s(Signature("R", attrNames(n)), fds);
    ASSERT_TRUE(isChain(s));
    EXPECT_TRUE(isTractable(s)) << s.format();
  }
}

TEST(Classify, GeneratedTractableSchemas) {
  Rng rng(22);
  for (int t = 0; t < 500; ++t) {
    auto s = randomTractableSchema(rng, 6, 5);
    EXPECT_TRUE(isTractable(s)) << s.format();
  }
}

TEST(Classify, TraceInvariants) {
  Rng rng(23);
  for (int t = 0; t < 500; ++t) {
    auto s = randomSchema(rng, 6, 5);
    auto tr = classify(s);
    EXPECT_LE(tr.steps.size(), s.arity());
    EXPECT_EQ(tr.tractable, tr.terminal.empty());
    EXPECT_FALSE(nextSimplification(tr.terminal));
    std::size_t arity = s.arity();
    for (const auto& st : tr.steps) {
      EXPECT_TRUE(witnessHolds(st.schemaBefore, st.kind, st.witness));
      EXPECT_EQ(st.schemaAfter, project(st.schemaBefore, st.removed));
      EXPECT_LT(st.schemaAfter.arity(), arity);
      arity = st.schemaAfter.arity();
    }
    EXPECT_EQ(replay(s, tr.steps), tr.terminal);
  }
}

// Not an invariant: the rules are applied in a fixed order, and whether a
// different order could change the verdict is open. Count disagreements.
TEST(Classify, AlternativeOrdersReport) {
  Rng rng(24);
  int schemas = 0, divergent = 0;
  for (int t = 0; t < 400; ++t) {
    auto s = randomSchema(rng, 5, 4);
    const bool fixed = isTractable(s);
    for (int run = 0; run < 4; ++run) {
      FdSchema cur = normalize(s);
      while (!cur.empty()) {
        std::vector<std::pair<SimplificationKind, SimplificationWitness>> options;
        for (auto a : allS1(cur)) options.emplace_back(SimplificationKind::S1, a);
        for (auto& fd : allS2(cur)) options.emplace_back(SimplificationKind::S2, fd);
        for (auto& p : allS3(cur)) options.emplace_back(SimplificationKind::S3, p);
        if (options.empty()) break;
        auto& [kind, w] = options[uniform(rng, 0, options.size() - 1)];
        cur = applyStep(cur, kind, w).schemaAfter;
      }
      if (cur.empty() != fixed) {
        ++divergent;
        std::cout << "order-dependent verdict: " << s.format() << "\n";
        break;
      }
    }
    ++schemas;
  }
  std::cout << "alternative orders: " << divergent << " of " << schemas << " schemas disagreed\n";
  RecordProperty("divergent", divergent);
}

TEST(Describe, MentionsRemovedAttributes) {
  auto t = classify(example1());
  EXPECT_EQ(describe(t.steps[0]), "S2 removes {A} (via ∅->A)");
  EXPECT_EQ(describe(t.steps[1]), "S1 removes {D} (common lhs attribute D)");
  EXPECT_EQ(describe(t.steps[2]), "S3 removes {BC} (via B->CE and C->B)");
}

}  // namespace
