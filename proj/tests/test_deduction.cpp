#include <gtest/gtest.h>

#include <regex>
#include <sstream>

#include "support.hpp"

namespace quadlat {
namespace {

using testing::affine_table;
using testing::fixture;
using Kind = DeductionOutcome::Kind;

// Outcome of complete_qn(n, choice) for n = 1..4, choices 1..4.
constexpr Kind kExpected[4][4] = {
    {Kind::contradiction, Kind::completed, Kind::contradiction, Kind::completed},
    {Kind::contradiction, Kind::completed, Kind::contradiction, Kind::contradiction},
    {Kind::completed, Kind::completed, Kind::contradiction, Kind::contradiction},
    {Kind::stuck, Kind::completed, Kind::completed, Kind::contradiction},
};

TEST(PartialTable, TracksPositionsAndCandidates) {
  PartialTable t(3);
  EXPECT_EQ(t.candidates(0, 0), 0b111u);
  t.put(0, 0, 2);
  EXPECT_TRUE(t.known(0, 0));
  EXPECT_EQ(t.row_pos(0, 2), 0);
  EXPECT_EQ(t.col_pos(0, 2), 0);
  EXPECT_EQ(t.candidates(0, 1), 0b011u);
  EXPECT_EQ(t.candidates(1, 0), 0b011u);
  EXPECT_EQ(t.known_count(), 1u);
}

TEST(DeductionEngine, ConflictingSeedIsAContradiction) {
  DeductionEngine e(3);
  EXPECT_TRUE(e.seed(0, 0, 0, "given"));
  EXPECT_FALSE(e.seed(0, 0, 1, "given"));
  ASSERT_TRUE(e.conflict().has_value());
  EXPECT_EQ(e.conflict()->kind, ConflictKind::clash);
  EXPECT_EQ(e.table().at(0, 0), 0);  // known cells never change
}

TEST(DeductionEngine, RowRepeatIsDetected) {
  DeductionEngine e(3);
  EXPECT_TRUE(e.seed(0, 0, 1, "given"));
  EXPECT_FALSE(e.seed(0, 2, 1, "given"));
  EXPECT_EQ(e.conflict()->kind, ConflictKind::row_repeat);
}

TEST(DeductionEngine, Q1FromSeedsCompletes) {
  // Order 5, a = 1 ... aba = 0 with ab = 2, ba = 3, b = 4 and aba.a = ab.
  DeductionOutcome const o = complete_qn(1, 2);
  ASSERT_TRUE(o.completed());
  EXPECT_TRUE(is_quadratical(*o.table));
  EXPECT_TRUE(find_isomorphism(*o.table, fixture("q1.txt")).has_value());
}

TEST(CompleteQn, OutcomesForSmallN) {
  for (std::size_t n = 1; n <= 4; ++n) {
    for (std::size_t c = 1; c <= 4; ++c) {
      for (SeedLevel level : {SeedLevel::full, SeedLevel::minimal}) {
        QnOptions opt;
        opt.seeds = level;
        DeductionOutcome const o = complete_qn(n, c, opt);
        EXPECT_EQ(o.kind, kExpected[n - 1][c - 1]) << "n=" << n << " choice=" << c;
        ReplayReport const r = replay(o.state.order(), o.trace, o.conflict);
        EXPECT_TRUE(r.ok) << "n=" << n << " choice=" << c << ": " << r.message;
        if (o.contradiction()) {
          EXPECT_TRUE(r.conflict_confirmed);
        }
        if (o.completed()) {
          EXPECT_TRUE(is_quadratical(*o.table));
          EXPECT_TRUE(testing::oracle::quadratical(*o.table));
          EXPECT_EQ(r.steps_checked, o.trace.size());
        }
      }
    }
  }
}

TEST(CompleteQn, Q2MatchesFixture) {
  QnOptions opt;
  opt.symbolic_labels = true;
  DeductionOutcome const o = complete_qn(2, 2, opt);
  ASSERT_TRUE(o.completed());
  CayleyTable const want = reorder_by_labels(fixture("q2.txt"), qn_labels(2, true));
  EXPECT_EQ(*o.table, want);
  EXPECT_EQ(o.table->labels(), want.labels());
}

TEST(CompleteQn, Q3MatchesFixtureAndLinearForm) {
  DeductionOutcome const o = complete_qn(3, 1);
  ASSERT_TRUE(o.completed());
  EXPECT_EQ(o.table->without_labels(),
            reorder_by_labels(fixture("q3.txt"), qn_labels(3)).without_labels());
  EXPECT_TRUE(find_isomorphism(*o.table, affine_table(13, 11, 3)).has_value());
  // Choice 32 completes to the dual (Q3)*.
  DeductionOutcome const d = complete_qn(3, 2);
  ASSERT_TRUE(d.completed());
  EXPECT_TRUE(find_isomorphism(*d.table, affine_table(13, 3, 11)).has_value());
  EXPECT_TRUE(find_isomorphism(*d.table, dual(*o.table)).has_value());
}

TEST(CompleteQn, Q4MatchesFixtureAndLinearForm) {
  CayleyTable const t5 = reorder_by_labels(fixture("q4.txt"), qn_labels(4));
  bool entrywise = false;
  for (std::size_t c : {2u, 3u}) {
    DeductionOutcome const q = complete_qn(4, c);
    ASSERT_TRUE(q.completed());
    bool const is_t5 = q.table->without_labels() == t5.without_labels();
    entrywise = entrywise || is_t5;
    // The other completion is the dual (Q4)*.
    EXPECT_EQ(find_isomorphism(*q.table, t5).has_value(), is_t5) << c;
    EXPECT_TRUE(find_isomorphism(*q.table, affine_table(17, is_t5 ? 11 : 7, is_t5 ? 7 : 11)))
        << c;
  }
  EXPECT_TRUE(entrywise);
}

TEST(CompleteQn, Q4FirstChoiceIsRefutedBySplitting) {
  Q6Report const r = refute_qn(4, 1, 3);
  EXPECT_TRUE(r.cases[0].refuted);
  EXPECT_FALSE(r.cases[0].leaves.empty());
  EXPECT_TRUE(r.cases[1].completed_found);
  EXPECT_TRUE(r.cases[2].completed_found);
  EXPECT_TRUE(r.cases[3].refuted);
  EXPECT_TRUE(r.cases[3].leaves.empty());
}

TEST(CompleteQn, RejectsBadArguments) {
  EXPECT_THROW(complete_qn(0, 1), PreconditionError);
  EXPECT_THROW(complete_qn(2, 5), PreconditionError);
  EXPECT_THROW(complete_qn(2, 0), PreconditionError);
}

TEST(CompleteQn, ExtrasDoNotChangeOutcomes) {
  QnOptions opt;
  opt.rules = RuleSet::with_extras();
  for (std::size_t c = 1; c <= 4; ++c) {
    EXPECT_EQ(complete_qn(3, c, opt).kind, kExpected[2][c - 1]) << c;
  }
}

TEST(Trace, LinesHaveTheExportFormat) {
  DeductionOutcome const o = complete_qn(2, 4);
  ASSERT_TRUE(o.contradiction());
  std::string const text = format_trace(o.trace, o.conflict, o.state);
  std::regex const step(R"(cell\([0-9a-z*]+,[0-9a-z*]+\) := [0-9a-z*]+  by [A-Za-z0-9-]+(\([^)]*\))? from \[.*\])");
  std::istringstream in(text);
  std::string line;
  std::size_t lines = 0;
  while (std::getline(in, line)) {
    ++lines;
    if (lines <= o.trace.size()) {
      EXPECT_TRUE(std::regex_match(line, step)) << line;
    } else {
      EXPECT_EQ(line.rfind("CONTRADICTION", 0), 0u) << line;
    }
  }
  EXPECT_EQ(lines, o.trace.size() + 1);
}

TEST(Trace, DerivedStepsCitePremises) {
  QnOptions opt;
  opt.seeds = SeedLevel::minimal;
  DeductionOutcome const o = complete_qn(3, 1, opt);
  ASSERT_TRUE(o.completed());
  std::size_t derived = 0;
  for (auto const& s : o.trace) {
    if (s.rule == Rule::seed || s.rule == Rule::idempotency) continue;
    ++derived;
    EXPECT_FALSE(s.premises.empty()) << format_step(s, o.state);
  }
  EXPECT_GT(derived, 100u);
}

TEST(Replay, DetectsTamperedTraces) {
  DeductionOutcome const o = complete_qn(3, 1);
  ASSERT_TRUE(o.completed());
  std::size_t rejected = 0;
  std::size_t tried = 0;
  for (std::size_t i = 0; i < o.trace.size(); i += 7) {
    if (o.trace[i].rule == Rule::seed) continue;
    Trace bad = o.trace;
    bad[i].v = (bad[i].v + 1) % 13;
    ++tried;
    rejected += !replay(13, bad).ok;
  }
  EXPECT_GT(tried, 10u);
  EXPECT_EQ(rejected, tried);
}

TEST(Replay, RejectsUnconfirmedConflict) {
  DeductionOutcome const bad = complete_qn(3, 3);
  ASSERT_TRUE(bad.conflict.has_value());
  EXPECT_TRUE(replay(13, bad.trace, bad.conflict).ok);
  // Without the derivations the conflict's premises are not established.
  EXPECT_FALSE(replay(13, {}, bad.conflict).ok);
}

TEST(RefuteQ6, AllFourCasesAreRefuted) {
  Q6Report const r = refute_q6(4);
  EXPECT_TRUE(r.all_refuted());
  for (auto const& c : r.cases) {
    EXPECT_TRUE(c.refuted) << c.choice;
    EXPECT_FALSE(c.completed_found);
    EXPECT_FALSE(c.budget_exhausted);
    for (auto const& l : c.leaves) {
      EXPECT_EQ(l.kind, Kind::contradiction);
      EXPECT_TRUE(l.replay_ok);
      EXPECT_FALSE(l.assumptions.empty());
    }
  }
}

TEST(RefuteQ6, ReportDoesNotDependOnJobs) {
  Q6Report const a = refute_q6(1);
  Q6Report const b = refute_q6(4);
  for (std::size_t i = 0; i < 4; ++i) {
    EXPECT_EQ(a.cases[i].leaves.size(), b.cases[i].leaves.size());
    EXPECT_EQ(a.cases[i].root.trace.size(), b.cases[i].root.trace.size());
    for (std::size_t j = 0; j < a.cases[i].leaves.size(); ++j) {
      EXPECT_EQ(a.cases[i].leaves[j].summary, b.cases[i].leaves[j].summary);
    }
  }
}

TEST(RefuteQn, SevenBlocksIsNotRefuted) {
  // Order 29 quadratical quasigroups exist, so some case must survive.
  Q6Report const r = refute_qn(7, 4, 3);
  EXPECT_FALSE(r.all_refuted());
  bool completed = false;
  for (auto const& c : r.cases) completed = completed || c.completed_found;
  EXPECT_TRUE(completed);
}

}  // namespace
}  // namespace quadlat
