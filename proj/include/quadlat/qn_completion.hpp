#pragma once

#include <algorithm>
#include <array>
#include <bit>
#include <future>
#include <string>
#include <thread>
#include <vector>

#include "quadlat/deduction.hpp"
#include "quadlat/qn_forms.hpp"

namespace quadlat {

// How much of the known structure is seeded before saturation.
enum class SeedLevel {
  // Definitions, idempotency and the block laws, the center laws and both
  // aba.a case tables.
  full,
  // Definitions of ab, ba, aba and the recurrences, idempotency and the
  // aba.a choice only; everything else has to be derived.
  minimal,
};

struct QnOptions {
  SeedLevel seeds = SeedLevel::full;
  RuleSet rules{};
  bool symbolic_labels = false;
};

namespace detail {

// aba.a case tables, indexed by choice-1.  The first eight entries are slots
// of block n for aba.a, aba.ab, aba.ba, aba.b, a.aba, ab.aba, ba.aba, b.aba;
// the last four are slots of block 1 for n1.n2, n2.n4, n3.n1, n4.n3.
inline constexpr std::array<std::array<int, 12>, 4> kCenterTable{{
    {1, 2, 3, 4, 2, 4, 1, 3, 1, 2, 3, 4},
    {2, 4, 1, 3, 4, 3, 2, 1, 3, 1, 4, 2},
    {3, 1, 4, 2, 1, 2, 3, 4, 2, 4, 1, 3},
    {4, 3, 2, 1, 3, 1, 4, 2, 4, 3, 2, 1},
}};

// Slots of block n for 11.34, 23.14, 34.14, 14.21, then slot e with
// (n-1)e = 11.nc = ne.11.
inline constexpr std::array<std::array<int, 5>, 4> kCrossTable{{
    {3, 2, 1, 1, 2},
    {1, 4, 2, 2, 4},
    {4, 1, 3, 3, 1},
    {2, 3, 4, 4, 3},
}};

class QnSeeder {
 public:
  QnSeeder(DeductionEngine& e, std::size_t n) : e_(e), n_(n) {}

  bool put(std::size_t t1, std::size_t k1, std::size_t t2, std::size_t k2, std::size_t t3,
           std::size_t k3, char const* why) {
    return e_.seed(idx(t1, k1), idx(t2, k2), idx(t3, k3), why);
  }

  // t = 0 denotes aba.
  static Element idx(std::size_t t, std::size_t k) { return t == 0 ? 0 : qn_index(t, k); }

  bool definitions() {
    return put(1, 1, 1, 4, 1, 2, "definition") && put(1, 4, 1, 1, 1, 3, "definition") &&
           put(1, 2, 1, 1, 0, 0, "definition");
  }

  bool idempotency() {
    for (Element x = 0; x < 4 * n_ + 1; ++x) {
      if (!e_.seed(x, x, x, "idempotency")) {
        return false;
      }
    }
    return true;
  }

  bool recurrences() {
    for (std::size_t t = 2; t <= n_; ++t) {
      std::size_t const p = t - 1;
      if (!(put(p, 1, p, 2, t, 1, "recurrence") && put(p, 2, p, 4, t, 2, "recurrence") &&
            put(p, 3, p, 1, t, 3, "recurrence") && put(p, 4, p, 3, t, 4, "recurrence"))) {
        return false;
      }
    }
    return true;
  }

  bool block_laws() {
    for (std::size_t t = 1; t <= n_; ++t) {
      bool ok = put(t, 1, t, 4, t, 2, "block") && put(t, 2, t, 3, t, 4, "block") &&
                put(t, 3, t, 2, t, 1, "block") && put(t, 4, t, 1, t, 3, "block") &&
                put(t, 1, t, 3, 0, 0, "4-cycle") && put(t, 2, t, 1, 0, 0, "4-cycle") &&
                put(t, 3, t, 4, 0, 0, "4-cycle") && put(t, 4, t, 2, 0, 0, "4-cycle");
      if (!ok) {
        return false;
      }
      if (t > 1) {
        std::size_t const p = t - 1;
        static constexpr std::array<std::size_t, 4> kRight{2, 4, 1, 3};
        for (std::size_t k = 1; k <= 4; ++k) {
          if (!(put(0, 0, t, k, p, k, "center-left") &&
                put(t, k, 0, 0, p, kRight[k - 1], "center-right"))) {
            return false;
          }
        }
      }
    }
    return true;
  }

  bool choice(std::size_t c) { return put(0, 0, 1, 1, n_, c, "choice"); }

  bool case_tables(std::size_t c) {
    auto const& row = kCenterTable[c - 1];
    std::size_t const n = n_;
    static constexpr std::array<std::array<std::size_t, 4>, 8> kCenterCells{{
        {0, 0, 1, 1}, {0, 0, 1, 2}, {0, 0, 1, 3}, {0, 0, 1, 4},
        {1, 1, 0, 0}, {1, 2, 0, 0}, {1, 3, 0, 0}, {1, 4, 0, 0},
    }};
    for (std::size_t i = 0; i < 8; ++i) {
      auto const [t1, k1, t2, k2] = kCenterCells[i];
      if (!put(t1, k1, t2, k2, n, static_cast<std::size_t>(row[i]), "case table")) {
        return false;
      }
    }
    static constexpr std::array<std::array<std::size_t, 2>, 4> kLastBlock{{
        {1, 2}, {2, 4}, {3, 1}, {4, 3}}};
    for (std::size_t i = 0; i < 4; ++i) {
      if (!put(n, kLastBlock[i][0], n, kLastBlock[i][1], 1, static_cast<std::size_t>(row[8 + i]),
               "case table")) {
        return false;
      }
    }
    auto const& cross = kCrossTable[c - 1];
    static constexpr std::array<std::array<std::size_t, 4>, 4> kCrossCells{{
        {1, 1, 3, 4}, {2, 3, 1, 4}, {3, 4, 1, 4}, {1, 4, 2, 1}}};
    for (std::size_t i = 0; i < 4; ++i) {
      auto const [t1, k1, t2, k2] = kCrossCells[i];
      if (std::max(t1, t2) > n) {
        continue;
      }
      if (!put(t1, k1, t2, k2, n, static_cast<std::size_t>(cross[i]), "case table")) {
        return false;
      }
    }
    auto const e = static_cast<std::size_t>(cross[4]);
    return put(1, 1, n, c, n - 1, e, "case table") && put(n, e, 1, 1, n - 1, e, "case table");
  }

 private:
  DeductionEngine& e_;
  std::size_t n_;
};

inline void check_qn_args(std::size_t n, std::size_t choice) {
  if (n < 1 || 4 * n + 1 > PartialTable::kMaxOrder) {
    throw PreconditionError("Qn completion supports 1 <= n <= 15");
  }
  if (choice < 1 || choice > 4) {
    throw PreconditionError("aba.a choice must be one of n1, n2, n3, n4");
  }
}

inline DeductionEngine seeded_engine(std::size_t n, std::size_t choice, QnOptions const& opt) {
  check_qn_args(n, choice);
  DeductionEngine e(4 * n + 1, qn_labels(n, opt.symbolic_labels), opt.rules);
  QnSeeder s(e, n);
  bool ok = s.definitions() && s.idempotency() && s.recurrences() && s.choice(choice);
  if (ok && opt.seeds == SeedLevel::full) {
    ok = s.block_laws() && (n < 2 || s.case_tables(choice));
  }
  return e;
}

}  // namespace detail

// Seeds a canonical Qn table for aba.a = n<choice> and saturates it.
// Cells are canonical indices (aba = 0, tk = qn_index(t, k)).
inline DeductionOutcome complete_qn(std::size_t n, std::size_t choice, QnOptions const& opt = {}) {
  DeductionEngine e = detail::seeded_engine(n, choice, opt);
  return e.saturate();
}

// ---------------------------------------------------------------------------

struct SplitLeaf {
  std::vector<Step> assumptions;
  DeductionOutcome::Kind kind = DeductionOutcome::Kind::stuck;
  bool replay_ok = false;
  std::string summary;
};

struct RefutationCase {
  std::size_t choice = 0;
  DeductionOutcome root;            // saturation before any split
  std::vector<SplitLeaf> leaves;    // empty when the root is already decided
  bool refuted = false;             // every branch ends in a replayable contradiction
  bool completed_found = false;     // some branch completes: the claim is false
  bool budget_exhausted = false;    // some branch is still stuck at max depth
};

struct Q6Report {
  std::array<RefutationCase, 4> cases;
  [[nodiscard]] bool all_refuted() const {
    return std::all_of(cases.begin(), cases.end(), [](auto const& c) { return c.refuted; });
  }
};

namespace detail {

// The unknown cell with the fewest candidate values, first in row-major
// order among ties.
inline std::optional<Cell> least_unknown(PartialTable const& t) {
  std::optional<Cell> best;
  int best_count = 65;
  for (Element x = 0; x < t.order(); ++x) {
    for (Element y = 0; y < t.order(); ++y) {
      if (!t.known(x, y)) {
        int const c = std::popcount(t.candidates(x, y));
        if (c < best_count) {
          best_count = c;
          best = Cell{x, y};
        }
      }
    }
  }
  return best;
}

inline void split(DeductionEngine engine, std::size_t depth, std::size_t max_depth,
                  std::vector<Step>& assumptions, RefutationCase& out) {
  DeductionOutcome o = engine.saturate();
  if (o.stuck() && depth < max_depth) {
    auto const cell = least_unknown(o.state);
    std::uint64_t cand = o.state.candidates(cell->first, cell->second);
    for (Element v = 0; v < o.state.order(); ++v) {
      if (!(cand >> v & 1)) {
        continue;
      }
      DeductionEngine branch = engine;
      branch.assume(cell->first, cell->second, v);
      assumptions.push_back(branch.trace().back());
      split(std::move(branch), depth + 1, max_depth, assumptions, out);
      assumptions.pop_back();
    }
    return;
  }
  SplitLeaf leaf;
  leaf.assumptions = assumptions;
  leaf.kind = o.kind;
  if (o.contradiction()) {
    leaf.replay_ok = replay(o.state.order(), o.trace, o.conflict).ok;
    leaf.summary = format_conflict(*o.conflict, o.state);
  } else if (o.completed()) {
    leaf.replay_ok = replay(o.state.order(), o.trace).ok;
    out.completed_found = true;
    leaf.summary = "completed";
  } else {
    out.budget_exhausted = true;
    leaf.summary = "stuck with " + std::to_string(o.state.known_count()) + " known cells";
  }
  out.leaves.push_back(std::move(leaf));
}

inline RefutationCase refute_case(std::size_t n, std::size_t choice, std::size_t max_depth,
                                  QnOptions const& opt) {
  RefutationCase rc;
  rc.choice = choice;
  DeductionEngine e = detail::seeded_engine(n, choice, opt);
  DeductionEngine start = e;
  rc.root = e.saturate();
  if (rc.root.contradiction()) {
    rc.refuted = replay(rc.root.state.order(), rc.root.trace, rc.root.conflict).ok;
    return rc;
  }
  if (rc.root.completed()) {
    rc.completed_found = true;
    return rc;
  }
  std::vector<Step> assumptions;
  split(std::move(start), 0, max_depth, assumptions, rc);
  rc.refuted = !rc.completed_found && !rc.budget_exhausted &&
               std::all_of(rc.leaves.begin(), rc.leaves.end(), [](SplitLeaf const& l) {
                 return l.kind == DeductionOutcome::Kind::contradiction && l.replay_ok;
               });
  return rc;
}

}  // namespace detail

// Runs all four aba.a cases for Q<n> (default Q6).  A stuck case is split on
// its least unknown cell up to `max_depth` levels.  Cases run on up to
// `jobs` threads; the report is the same for any job count.
inline Q6Report refute_qn(std::size_t n = 6, std::size_t jobs = 0, std::size_t max_depth = 3,
                          QnOptions const& opt = {}) {
  if (jobs == 0) {
    jobs = std::max(1u, std::thread::hardware_concurrency());
  }
  Q6Report report;
  for (std::size_t first = 0; first < 4; first += jobs) {
    std::vector<std::future<RefutationCase>> running;
    for (std::size_t c = first; c < std::min<std::size_t>(4, first + jobs); ++c) {
      running.push_back(std::async(std::launch::async, detail::refute_case, n, c + 1, max_depth,
                                   std::cref(opt)));
    }
    for (std::size_t i = 0; i < running.size(); ++i) {
      report.cases[first + i] = running[i].get();
    }
  }
  return report;
}

inline Q6Report refute_q6(std::size_t jobs = 0) { return refute_qn(6, jobs); }

}  // namespace quadlat
