// Acceptance run: one PASS/FAIL line per criterion, nonzero exit on failure.

#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>
#include <map>
#include <set>
#include <sstream>
#include <thread>

#include "support.hpp"

namespace {

using namespace quadlat;
using quadlat::testing::affine_table;
using quadlat::testing::fixture;
using quadlat::testing::fixture_path;
using quadlat::testing::random_permutation;
using quadlat::testing::zero_based;
namespace oracle = quadlat::testing::oracle;
using Clock = std::chrono::steady_clock;

// Collects failures for one criterion.
struct Check {
  std::vector<std::string> failures;
  void expect(bool ok, std::string const& what) {
    if (!ok) failures.push_back(what);
  }
};

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string fmt_seconds(double s) {
  std::ostringstream out;
  out.precision(3);
  out << std::fixed << s << " s";
  return out.str();
}

Permutation by_names(CayleyTable const& t, std::vector<std::string> const& names) {
  Permutation p;
  for (auto const& n : names) p.push_back(t.index_of(n));
  return p;
}

using RowKey = std::tuple<std::uint64_t, std::uint64_t, std::uint64_t, std::uint64_t>;

RowKey key(ClassificationRow const& r) { return {r.m, r.a, r.b, r.k}; }

std::set<RowKey> keys(std::vector<ClassificationRow> const& rows) {
  std::set<RowKey> out;
  for (auto const& r : rows) out.insert(key(r));
  return out;
}

std::vector<ClassificationRow> reference(std::string const& name) {
  return parse_rows_csv(detail::read_file(fixture_path(name)), name);
}

// All (m, a, b, k) rows for m <= max_m, from the oracles alone.
std::vector<ClassificationRow> oracle_rows(std::uint64_t max_m) {
  std::vector<ClassificationRow> out;
  for (std::uint64_t m = 2; m <= max_m; ++m) {
    for (std::uint64_t a : oracle::quadratic_roots(m)) {
      auto const k = oracle::k_by_scan(m, a);
      if (k) out.push_back({m, a, (m + 1 - a) % m, *k});
    }
  }
  return out;
}

bool formula_row(ClassificationRow const& r) {
  if (r.m < 2 || r.a >= r.m) return false;
  auto const roots = oracle::quadratic_roots(r.m);
  if (std::find(roots.begin(), roots.end(), r.a) == roots.end()) return false;
  return r.b == (r.m + 1 - r.a) % r.m && oracle::k_by_scan(r.m, r.a) == r.k;
}

std::string note(Check& c, double secs) {
  std::string s = fmt_seconds(secs);
  if (!c.failures.empty()) s += "; " + c.failures.front();
  if (c.failures.size() > 1) s += " (+" + std::to_string(c.failures.size() - 1) + " more)";
  return s;
}

// --- criteria ---------------------------------------------------------------

std::string scan_table(Check& c) {
  auto const t0 = Clock::now();
  auto const rows = scan_k_table(1200, 40, 1);
  double const secs = seconds_since(t0);
  c.expect(secs < 10.0, "scan took " + fmt_seconds(secs));

  std::set<RowKey> want;
  for (auto const& r : oracle_rows(1200)) {
    if (r.k >= 2 && r.k < 40) want.insert(key(r));
  }
  c.expect(keys(rows) == want, "scan output differs from oracle rows");
  c.expect(rows.size() == want.size(), "duplicate rows in scan output");
  for (ClassificationRow r : {ClassificationRow{5, 2, 4, 2}, ClassificationRow{37, 16, 22, 6},
                              ClassificationRow{13, 3, 11, 8}, ClassificationRow{65, 29, 37, 8},
                              ClassificationRow{257, 121, 137, 16}}) {
    c.expect(want.count(key(r)) == 1, "spot row missing: " + format_row(r));
  }

  DiscrepancyReport const rep = compare_with_reference(rows, reference("reference_k_table.csv"), 1200);
  for (auto const& d : rep.items) {
    switch (d.kind) {
      case Discrepancy::Kind::field_differs:
        c.expect(formula_row(d.computed) && !formula_row(d.reference),
                 "unjustified difference at " + format_row(d.reference));
        break;
      case Discrepancy::Kind::out_of_bounds:
        c.expect(d.reference.m > 1200, "bogus out-of-bounds row " + format_row(d.reference));
        break;
      default:
        c.expect(false, "unexpected discrepancy at " + format_row(d.reference));
    }
  }
  return note(c, secs) + "; " + std::to_string(rows.size()) + " rows, " +
         std::to_string(rep.items.size()) + " reference discrepancies";
}

std::string classification(Check& c) {
  auto const t0 = Clock::now();
  auto const rows = classify(500);
  std::vector<ClassificationRow> want;
  for (auto const& r : oracle_rows(499)) {
    if (r.a < r.b) want.push_back(r);
  }
  c.expect(keys(rows) == keys(want) && rows.size() == want.size(),
           "classification differs from oracle rows");
  DiscrepancyReport const rep = compare_with_reference(rows, reference("reference_classification.csv"), 500);
  c.expect(rep.clean(), "reference discrepancies: " + rep.to_text());
  std::map<std::uint64_t, int> per_m;
  for (auto const& r : rows) ++per_m[r.m];
  std::set<std::uint64_t> doubles;
  for (auto [m, n] : per_m) {
    if (n == 2) doubles.insert(m);
  }
  c.expect(doubles == std::set<std::uint64_t>{65, 85, 145, 185, 205, 221, 265, 305, 325, 365, 377,
                                              425, 445, 481, 485, 493},
           "double-row moduli differ");
  return note(c, seconds_since(t0)) + "; " + std::to_string(rows.size()) + " rows";
}

std::string k_sum(Check& c) {
  auto const t0 = Clock::now();
  std::size_t pairs = 0;
  for (std::uint64_t m = 2; m <= 1200; ++m) {
    for (std::uint64_t a : solve_quadratic_congruence(m)) {
      std::uint64_t const a2 = (m + 1 - a) % m;
      std::uint64_t const k1 = translatability_k_quadratical(m, a);
      std::uint64_t const k2 = translatability_k_quadratical(m, a2);
      c.expect(k1 + k2 == m, "m=" + std::to_string(m) + " a=" + std::to_string(a));
      c.expect(oracle::k_by_scan(m, a) == k1, "k disagrees with scan at m=" + std::to_string(m));
      ++pairs;
    }
  }
  c.expect(pairs > 0, "no pairs enumerated");
  return note(c, seconds_since(t0)) + "; " + std::to_string(pairs) + " pairs";
}

std::string order_nine(Check& c) {
  CayleyTable const t = fixture("z3z3_star1.txt");
  c.expect(is_quadratical(t), "not quadratical");
  auto const form = detect_form(t);
  c.expect(form && form->n == 2, "detect_form did not give n=2");
  auto const phi = find_isomorphism(t, dual(t));
  c.expect(phi && oracle::is_hom(t, dual(t), *phi), "not isomorphic to its dual");
  auto const t0 = Clock::now();
  auto const w = find_translatable_ordering(t);
  double const secs = seconds_since(t0);
  c.expect(!w.has_value(), "found a translatable ordering");
  c.expect(secs < 60.0, "ordering search took " + fmt_seconds(secs));
  return note(c, secs) + " (ordering search)";
}

std::string qn_completion(Check& c) {
  auto const t0 = Clock::now();
  QnOptions sym;
  sym.symbolic_labels = true;
  DeductionOutcome const q2 = complete_qn(2, 2, sym);
  CayleyTable const t1 = reorder_by_labels(fixture("q2.txt"), qn_labels(2, true));
  c.expect(q2.completed() && *q2.table == t1, "Q2 (choice 22) differs from the Q2 fixture");

  DeductionOutcome const q3 = complete_qn(3, 1);
  CayleyTable const t3 = reorder_by_labels(fixture("q3.txt"), qn_labels(3));
  c.expect(q3.completed() && q3.table->without_labels() == t3.without_labels(),
           "Q3 (choice 31) differs from the Q3 fixture");
  c.expect(q3.completed() && oracle::isomorphic(*q3.table, affine_table(13, 11, 3)),
           "Q3 not isomorphic to 11x+3y mod 13");

  CayleyTable const t5 = reorder_by_labels(fixture("q4.txt"), qn_labels(4));
  bool entrywise = false;
  for (std::size_t choice : {2u, 3u}) {
    DeductionOutcome const q4 = complete_qn(4, choice);
    if (!q4.completed()) {
      c.expect(false, "Q4 choice " + std::to_string(choice) + " did not complete");
      continue;
    }
    // One completion is Q4 itself, the other its dual.
    bool const is_t5 = q4.table->without_labels() == t5.without_labels();
    entrywise = entrywise || is_t5;
    CayleyTable const linear = is_t5 ? affine_table(17, 11, 7) : affine_table(17, 7, 11);
    c.expect(find_isomorphism(*q4.table, linear).has_value(),
             "Q4 choice " + std::to_string(choice) + " not isomorphic to its Z_17 form");
  }
  c.expect(entrywise, "no Q4 completion equals the Q4 fixture");

  for (auto [n, choice] : {std::pair{2u, 4u}, std::pair{3u, 3u}, std::pair{3u, 4u}}) {
    DeductionOutcome const o = complete_qn(n, choice);
    std::string const tag = "n=" + std::to_string(n) + " choice=" + std::to_string(choice);
    c.expect(o.contradiction(), tag + " is not a contradiction");
    ReplayReport const r = replay(o.state.order(), o.trace, o.conflict);
    c.expect(r.ok && r.conflict_confirmed, tag + " replay: " + r.message);
  }
  return note(c, seconds_since(t0));
}

std::string refute_six(Check& c) {
  auto const t0 = Clock::now();
  std::size_t const jobs = std::max(1u, std::thread::hardware_concurrency());
  Q6Report const r = refute_q6(jobs);
  double const secs = seconds_since(t0);
  std::size_t leaves = 0;
  for (auto const& cs : r.cases) {
    c.expect(cs.refuted && !cs.completed_found && !cs.budget_exhausted,
             "case " + std::to_string(cs.choice) + " not refuted");
    for (auto const& l : cs.leaves) {
      c.expect(l.replay_ok, "leaf replay failed in case " + std::to_string(cs.choice));
    }
    leaves += cs.leaves.size();
  }
  c.expect(secs < 300.0, "took " + fmt_seconds(secs));
  return note(c, secs) + "; " + std::to_string(leaves) + " split leaves";
}

std::string feasible(Check& c) {
  auto as_set = [](auto const& v) { return std::set<std::uint64_t>(v.begin(), v.end()); };
  c.expect(as_set(feasible_k_idempotent_quadratical(25)) == std::set<std::uint64_t>{7, 18}, "n=25");
  c.expect(feasible_k_idempotent_quadratical(9).empty(), "n=9");
  for (std::uint64_t n : {5u, 13u, 17u, 29u, 37u, 41u}) {
    std::set<std::uint64_t> want;
    for (std::uint64_t a : oracle::quadratic_roots(n)) want.insert(*oracle::k_by_scan(n, a));
    c.expect(as_set(feasible_k_idempotent_quadratical(n)) == want, "n=" + std::to_string(n));
  }
  return note(c, 0);
}

std::string properties(Check& c) {
  auto const t0 = Clock::now();
  constexpr int kCases = 1000;
  std::mt19937_64 rng(2024);
  auto pick = [&](std::size_t lo, std::size_t hi) {
    return std::uniform_int_distribution<std::size_t>(lo, hi)(rng);
  };

  for (int i = 0; i < kCases; ++i) {
    std::size_t const n = pick(2, 12);
    std::size_t const k = pick(1, n - 1);
    CayleyTable const t = build_from_first_row(random_permutation(n, rng), k);
    c.expect(oracle::latin(t) == (std::gcd(n, k) == 1), "gcd criterion");
  }

  std::vector<std::tuple<CayleyTable, Permutation, std::size_t>> seeds;
  for (int i = 1; i <= 3; ++i) {
    seeds.emplace_back(fixture("translatable4_" + std::to_string(i) + ".txt"), identity_permutation(5), 4);
  }
  for (std::uint64_t m : {5u, 13u, 17u}) {
    for (std::uint64_t a : solve_quadratic_congruence(m)) {
      seeds.emplace_back(quadratical_over_zm(m, a), identity_permutation(m), *oracle::k_by_scan(m, a));
    }
  }
  for (int i = 0; i < kCases; ++i) {
    auto const& [t, sigma, k] = seeds[i % seeds.size()];
    Permutation const phi = random_permutation(t.order(), rng);
    Permutation moved(sigma.size());
    for (std::size_t j = 0; j < sigma.size(); ++j) moved[j] = phi[sigma[j]];
    c.expect(k_translatable_check(relabel(t, phi), moved, k), "translatability transport");
  }

  for (int i = 0; i < kCases; ++i) {
    std::size_t const n = pick(2, 12);
    std::vector<Element> row(n);
    for (auto& v : row) v = static_cast<Element>(pick(0, n - 1));
    c.expect(oracle::commutative(build_from_first_row(row, n - 1)), "(n-1)-translatable commutes");
    CayleyTable const u = build_from_first_row(row, 1);
    for (Element x = 1; x < n; ++x) c.expect(u(x, x) == u(0, 0), "1-translatable unipotent");
  }

  std::vector<CayleyTable> pool;
  for (std::uint64_t m : {5u, 13u, 17u}) {
    for (std::uint64_t a : solve_quadratic_congruence(m)) pool.push_back(quadratical_over_zm(m, a));
  }
  for (char const* name : {"q1.txt", "q1_star.txt", "q2.txt", "q3.txt",
                           "q4.txt", "z3z3_star1.txt"}) {
    pool.push_back(fixture(name).without_labels());
  }
  for (int i = 0; i < kCases; ++i) {
    CayleyTable const& base = pool[i % pool.size()];
    CayleyTable const t = relabel(base, random_permutation(base.order(), rng));
    c.expect(oracle::quadratical(t), "pool table not quadratical");
    for (IdentityId id : kQuadraticalIdentities) {
      c.expect(check_identity(t, id).holds(), "identity " + std::string(identity_name(id)));
    }
    std::size_t const n = t.order();
    Element const a = static_cast<Element>(pick(0, n - 1));
    Element b = static_cast<Element>(pick(0, n - 2));
    if (b >= a) ++b;
    CycleDecomposition const d = four_cycles(t, a, b);
    std::vector<bool> seen(n, false);
    seen[d.center] = true;
    for (auto const& cy : d.cycles) {
      for (std::size_t j = 0; j < 4; ++j) {
        c.expect(!seen[cy[j]], "four_cycles overlap");
        seen[cy[j]] = true;
        c.expect(t(cy[j], cy[(j + 1) % 4]) == d.center, "four_cycles product");
      }
    }
    c.expect(std::all_of(seen.begin(), seen.end(), [](bool s) { return s; }), "four_cycles cover");
  }
  return note(c, seconds_since(t0)) + "; 5 suites x " + std::to_string(kCases) + " cases";
}

std::string examples(Check& c) {
  for (int i = 1; i <= 3; ++i) {
    CayleyTable const t = fixture("translatable4_" + std::to_string(i) + ".txt");
    std::string const tag = "translatable4_" + std::to_string(i);
    c.expect(k_translatable_check(t, identity_permutation(5), 4), tag + " not 4-translatable");
    c.expect(oracle::translatable(t, identity_permutation(5), 4), tag + " oracle disagrees");
    c.expect(!oracle::associative(t), tag + " is associative");
  }
  c.expect(idempotent_first_row(7, 3) == zero_based({1, 4, 7, 3, 6, 2, 5}), "first row (7,3)");
  c.expect(idempotent_first_row(7, 4) == zero_based({1, 3, 5, 7, 2, 4, 6}), "first row (7,4)");

  CayleyTable const q1 = fixture("q1.txt");
  CayleyTable const q1s = fixture("q1_star.txt");
  auto const k1 = all_valid_k(q1, by_names(q1, {"a", "ba", "aba", "ab", "b"}));
  c.expect(k1 == std::vector<std::size_t>{3}, "Q1 ordering not exactly 3-translatable");
  auto const k2 = all_valid_k(q1s, by_names(q1s, {"a", "aba", "b", "a*b", "b*a"}));
  c.expect(k2 == std::vector<std::size_t>{2}, "(Q1)* ordering not exactly 2-translatable");
  c.expect(all_valid_k(q1, by_names(q1, {"a", "b", "ab", "ba", "aba"})).empty(),
           "Q1' ordering is translatable");
  c.expect(all_valid_k(q1s, by_names(q1s, {"a", "b", "b*a", "a*b", "aba"})).empty(),
           "(Q1')* ordering is translatable");
  return note(c, 0);
}

// Pairs x != y satisfying x.xy = yx, and pairs satisfying yx.x = xy.
std::pair<std::size_t, std::size_t> identity_counts(CayleyTable const& t) {
  std::size_t left = 0, right = 0;
  for (Element x = 0; x < t.order(); ++x) {
    for (Element y = 0; y < t.order(); ++y) {
      if (x == y) continue;
      left += t(x, t(x, y)) == t(y, x);
      right += t(t(y, x), x) == t(x, y);
    }
  }
  return {left, right};
}

std::string order_25(Check& c) {
  auto const t0 = Clock::now();
  CayleyTable const q1 = fixture("q1.txt").without_labels();
  CayleyTable const q1s = fixture("q1_star.txt").without_labels();
  std::vector<CayleyTable> products = {direct_product(q1, q1), direct_product(q1, q1s),
                                       direct_product(q1s, q1), direct_product(q1s, q1s)};
  CayleyTable const dot = quadratical_over_zm(25, 22);
  CayleyTable const circ = quadratical_over_zm(25, 4);
  c.expect(dot == affine_table(25, 22, 4) && circ == affine_table(25, 4, 22), "Z_25 tables");

  for (CayleyTable const* z : {&dot, &circ}) {
    auto const zc = identity_counts(*z);
    for (std::size_t i = 0; i < products.size(); ++i) {
      c.expect(!find_isomorphism(*z, products[i]).has_value(),
               "isomorphic to product " + std::to_string(i));
      c.expect(identity_counts(products[i]) != zc,
               "identity counts fail to separate product " + std::to_string(i));
    }
  }

  // The factor identities: x.xy = yx on all of Q1, yx.x = xy on all of (Q1)*.
  c.expect(identity_counts(q1).first == 20, "x.xy = yx fails in Q1");
  c.expect(identity_counts(q1s).second == 20, "yx.x = xy fails in (Q1)*");
  // Hence they hold on pairs sharing the other coordinate in each product.
  for (std::size_t i = 0; i < 2; ++i) {
    c.expect(identity_counts(products[i]).first > 0, "x.xy = yx vanishes in product");
  }
  for (std::size_t i = 2; i < 4; ++i) {
    c.expect(identity_counts(products[i]).second > 0, "yx.x = xy vanishes in product");
  }
  // In 22x+4y mod 25, x.xy = yx forces x = y; in 4x+22y mod 25, yx.x = xy does.
  c.expect(identity_counts(dot).first == 0, "x.xy = yx has a solution x != y in Z_25");
  c.expect(identity_counts(circ).second == 0, "yx.x = xy has a solution x != y in Z_25");
  return note(c, seconds_since(t0));
}

}  // namespace

int main() {
  struct Criterion {
    char const* name;
    std::function<std::string(Check&)> run;
  };
  std::vector<Criterion> const criteria = {
      {"k-table scan, m <= 1200, k < 40", scan_table},
      {"classification, m < 500", classification},
      {"k(a) + k(1-a) = m", k_sum},
      {"order 9 product over Z3 x Z3", order_nine},
      {"Qn completion and replay", qn_completion},
      {"no quadratical Q6", refute_six},
      {"feasible shifts for idempotent tables", feasible},
      {"randomised properties", properties},
      {"translatable example tables", examples},
      {"order 25 non-isomorphism", order_25},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Check c;
    std::string detail;
    try {
      detail = criteria[i].run(c);
    } catch (std::exception const& e) {
      c.failures.push_back(std::string("exception: ") + e.what());
      detail = c.failures.back();
    }
    bool const ok = c.failures.empty();
    failed += !ok;
    std::printf("[%s] %2zu %s: %s\n", ok ? "PASS" : "FAIL", i + 1, criteria[i].name, detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria failed\n", failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
