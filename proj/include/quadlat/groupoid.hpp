#pragma once

#include <algorithm>
#include <array>
#include <string>
#include <vector>

#include "quadlat/cayley_table.hpp"
#include "quadlat/identities.hpp"

namespace quadlat {

// Opposite groupoid: x*y = y.x.  Labels are kept.
inline CayleyTable dual(CayleyTable const& t) {
  return CayleyTable::from_function(
      t.order(), [&t](Element x, Element y) { return t(y, x); }, t.labels());
}

// Componentwise product on pairs, pair (i, j) stored at index i*n2 + j.
inline CayleyTable direct_product(CayleyTable const& lhs, CayleyTable const& rhs) {
  std::size_t const n1 = lhs.order();
  std::size_t const n2 = rhs.order();
  std::vector<std::string> labels;
  if (lhs.has_labels() || rhs.has_labels()) {
    labels.reserve(n1 * n2);
    for (Element i = 0; i < n1; ++i) {
      for (Element j = 0; j < n2; ++j) {
        labels.push_back("(" + lhs.name(i) + "," + rhs.name(j) + ")");
      }
    }
  }
  return CayleyTable::from_function(
      n1 * n2,
      [&](Element p, Element q) {
        Element const i = lhs(static_cast<Element>(p / n2), static_cast<Element>(q / n2));
        Element const j = rhs(static_cast<Element>(p % n2), static_cast<Element>(q % n2));
        return static_cast<Element>(i * n2 + j);
      },
      std::move(labels));
}

// Least subset containing `seeds` and closed under the product, sorted.
inline std::vector<Element> generated_subgroupoid(CayleyTable const& t,
                                                  std::span<Element const> seeds) {
  std::size_t const n = t.order();
  if (seeds.empty()) {
    throw PreconditionError("generated_subgroupoid: seed set is empty");
  }
  std::vector<bool> in(n, false);
  std::vector<Element> members;
  for (Element s : seeds) {
    if (s >= n) {
      throw PreconditionError("generated_subgroupoid: seed " + std::to_string(s) +
                              " out of range");
    }
    if (!in[s]) {
      in[s] = true;
      members.push_back(s);
    }
  }
  // Every new member is multiplied against every member seen so far, in both
  // orders, exactly once.
  for (std::size_t i = 0; i < members.size(); ++i) {
    Element const x = members[i];
    for (std::size_t j = 0; j <= i; ++j) {
      Element const y = members[j];
      for (Element z : {t(x, y), t(y, x)}) {
        if (!in[z]) {
          in[z] = true;
          members.push_back(z);
        }
      }
    }
  }
  std::sort(members.begin(), members.end());
  return members;
}

struct TwoGenerationReport {
  std::size_t order = 0;
  std::vector<bool> generates;  // generates[x * order + y]; diagonal only for order 1
  // Every pair of distinct elements generates Q (vacuous for order 1).
  bool all_pairs = true;
  // Some pair of distinct elements generates Q.
  bool some_pair = false;

  [[nodiscard]] bool pair_generates(Element x, Element y) const {
    return generates[x * order + y];
  }
};

inline TwoGenerationReport two_generation_report(CayleyTable const& t) {
  std::size_t const n = t.order();
  TwoGenerationReport r;
  r.order = n;
  r.generates.assign(n * n, false);
  if (n == 1) {
    r.generates[0] = true;
    r.some_pair = true;
    return r;
  }
  for (Element x = 0; x < n; ++x) {
    for (Element y = x + 1; y < n; ++y) {
      std::array<Element, 2> seeds{x, y};
      bool const full = generated_subgroupoid(t, seeds).size() == n;
      r.generates[x * n + y] = full;
      r.generates[y * n + x] = full;
      r.all_pairs = r.all_pairs && full;
      r.some_pair = r.some_pair || full;
    }
  }
  return r;
}

// Greedy small generating set: start from the lexicographically least pair
// (or single element) whose closure is largest, then keep adding the least
// element outside the current closure.
inline std::vector<Element> greedy_generating_set(CayleyTable const& t) {
  std::size_t const n = t.order();
  std::vector<Element> gens{0};
  std::vector<Element> closure = generated_subgroupoid(t, gens);
  if (closure.size() == n) {
    return gens;
  }
  std::size_t best = 0;
  std::vector<Element> best_pair;
  for (Element x = 0; x < n && best < n; ++x) {
    for (Element y = x + 1; y < n; ++y) {
      std::array<Element, 2> seeds{x, y};
      std::size_t const s = generated_subgroupoid(t, seeds).size();
      if (s > best) {
        best = s;
        best_pair = {x, y};
        if (s == n) {
          break;
        }
      }
    }
  }
  gens = best_pair;
  closure = generated_subgroupoid(t, gens);
  while (closure.size() < n) {
    Element next = 0;
    while (std::binary_search(closure.begin(), closure.end(), next)) {
      ++next;
    }
    gens.push_back(next);
    closure = generated_subgroupoid(t, gens);
  }
  return gens;
}

// A 4-cycle based on `center`: x1.x2 = x2.x3 = x3.x4 = x4.x1 = center.
using FourCycle = std::array<Element, 4>;

struct CycleDecomposition {
  Element center = 0;
  std::vector<FourCycle> cycles;
};

// Splits Q \ {aba} into the disjoint 4-cycles based on aba = (a.b).a.  Each
// cycle starts at its least element; cycles are listed by that element.
inline CycleDecomposition four_cycles(CayleyTable const& t, Element a, Element b) {
  std::size_t const n = t.order();
  if (a >= n || b >= n) {
    throw PreconditionError("four_cycles: element out of range");
  }
  if (a == b) {
    throw PreconditionError("four_cycles: base elements must be distinct");
  }
  if (!is_quadratical(t)) {
    throw PreconditionError("four_cycles: table is not quadratical");
  }
  CycleDecomposition out;
  Element const c = t(t(a, b), a);
  out.center = c;
  // left_solve[x] = the unique y with x.y = c.
  std::vector<Element> left_solve(n);
  for (Element x = 0; x < n; ++x) {
    auto r = t.row(x);
    left_solve[x] = static_cast<Element>(std::find(r.begin(), r.end(), c) - r.begin());
  }
  std::vector<bool> covered(n, false);
  covered[c] = true;
  for (Element x = 0; x < n; ++x) {
    if (covered[x]) {
      continue;
    }
    FourCycle cyc{x, left_solve[x], left_solve[left_solve[x]],
                  left_solve[left_solve[left_solve[x]]]};
    if (left_solve[cyc[3]] != x) {
      throw InvariantViolation("four_cycles: orbit of " + std::to_string(x) +
                               " does not close after four steps");
    }
    for (Element e : cyc) {
      if (covered[e]) {
        throw InvariantViolation("four_cycles: cycles overlap at " + std::to_string(e));
      }
      covered[e] = true;
    }
    out.cycles.push_back(cyc);
  }
  return out;
}

}  // namespace quadlat
