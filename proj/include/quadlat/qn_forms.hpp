#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "quadlat/cayley_table.hpp"
#include "quadlat/errors.hpp"
#include "quadlat/identities.hpp"

namespace quadlat {

// Block t = (t1, t2, t3, t4).  H1 = (a, ab, ba, b) and for t >= 2
//   t1 = (t-1)1.(t-1)2   t2 = (t-1)2.(t-1)4
//   t3 = (t-1)3.(t-1)1   t4 = (t-1)4.(t-1)3
using Block = std::array<Element, 4>;

struct QnDecomposition {
  std::size_t n = 0;  // number of blocks
  Element a = 0;
  Element b = 0;
  Element center = 0;  // aba
  std::vector<Block> blocks;

  // True when {aba} and the blocks cover the whole carrier of `order`.
  [[nodiscard]] bool partitions(std::size_t order) const { return 4 * n + 1 == order; }
};

// Canonical index of element tk (t, k 1-based): aba is 0, then the blocks in
// order, four slots each.
constexpr Element qn_index(std::size_t t, std::size_t k) {
  return static_cast<Element>(1 + 4 * (t - 1) + (k - 1));
}

// Labels "aba", "11", "12", ... or, when symbolic, "aba", "a", "ab", "ba",
// "b", "21", ...
inline std::vector<std::string> qn_labels(std::size_t n, bool symbolic = false) {
  std::vector<std::string> out{"aba"};
  static constexpr std::array<char const*, 4> kBase{"a", "ab", "ba", "b"};
  for (std::size_t t = 1; t <= n; ++t) {
    for (std::size_t k = 1; k <= 4; ++k) {
      out.push_back(symbolic && t == 1 ? std::string(kBase[k - 1])
                                       : std::to_string(t) + std::to_string(k));
    }
  }
  return out;
}

namespace detail {

inline void qn_fail(std::size_t t, std::string const& law) {
  throw PreconditionError("H-chain block " + std::to_string(t) + " violates " + law);
}

inline void validate_block(CayleyTable const& q, QnDecomposition const& d, std::size_t t) {
  Block const& h = d.blocks[t - 1];
  Element const c = d.center;
  for (std::size_t i = 0; i < 4; ++i) {
    if (h[i] == c) {
      qn_fail(t, "disjointness from aba");
    }
    for (std::size_t j = 0; j < i; ++j) {
      if (h[i] == h[j]) {
        qn_fail(t, "distinctness of t1, t2, t3, t4");
      }
    }
  }
  if (q(h[0], h[3]) != h[1] || q(h[1], h[2]) != h[3] || q(h[2], h[1]) != h[0] ||
      q(h[3], h[0]) != h[2]) {
    qn_fail(t, "t1.t4 = t2, t2.t3 = t4, t3.t2 = t1, t4.t1 = t3");
  }
  if (q(h[0], h[2]) != c || q(h[1], h[0]) != c || q(h[2], h[3]) != c || q(h[3], h[1]) != c) {
    qn_fail(t, "t1.t3 = t2.t1 = t3.t4 = t4.t2 = aba");
  }
  if (t > 1) {
    Block const& prev = d.blocks[t - 2];
    for (std::size_t k = 0; k < 4; ++k) {
      if (q(c, h[k]) != prev[k]) {
        qn_fail(t, "aba.tk = (t-1)k");
      }
    }
  }
}

inline QnDecomposition build_chain(CayleyTable const& q, Element a, Element b, std::size_t n) {
  std::size_t const order = q.order();
  QnDecomposition d;
  d.n = n;
  d.a = a;
  d.b = b;
  d.center = q(q(a, b), a);
  d.blocks.push_back({a, q(a, b), q(b, a), b});
  for (std::size_t t = 2; t <= n; ++t) {
    Block const& p = d.blocks.back();
    d.blocks.push_back({q(p[0], p[1]), q(p[1], p[3]), q(p[2], p[0]), q(p[3], p[2])});
  }
  std::vector<int> owner(order, 0);
  owner[d.center] = -1;
  for (std::size_t t = 1; t <= n; ++t) {
    validate_block(q, d, t);
    for (Element e : d.blocks[t - 1]) {
      if (owner[e] > 0) {
        throw PreconditionError("H-chain blocks " + std::to_string(owner[e]) + " and " +
                                std::to_string(t) + " collide");
      }
      owner[e] = static_cast<int>(t);
    }
  }
  return d;
}

}  // namespace detail

// Builds H1..Hn from the base pair and checks each block's laws and that
// blocks are pairwise disjoint.
inline QnDecomposition h_chain(CayleyTable const& q, Element a, Element b, std::size_t n) {
  if (a >= q.order() || b >= q.order()) {
    throw PreconditionError("h_chain: element out of range");
  }
  if (a == b) {
    throw PreconditionError("h_chain: base elements must be distinct");
  }
  if (n < 1) {
    throw PreconditionError("h_chain: depth must be positive");
  }
  if (!is_quadratical(q)) {
    throw PreconditionError("h_chain: table is not quadratical");
  }
  return detail::build_chain(q, a, b, n);
}

// First ordered pair (a, b) whose H-chain of depth (order-1)/4 covers Q.
inline std::optional<QnDecomposition> detect_form(CayleyTable const& q) {
  if (!is_quadratical(q)) {
    throw PreconditionError("detect_form: table is not quadratical");
  }
  std::size_t const order = q.order();
  if (order % 4 != 1 || order < 5) {
    return std::nullopt;
  }
  std::size_t const n = (order - 1) / 4;
  for (Element a = 0; a < order; ++a) {
    for (Element b = 0; b < order; ++b) {
      if (a == b) {
        continue;
      }
      try {
        return detail::build_chain(q, a, b, n);
      } catch (PreconditionError const&) {
      }
    }
  }
  return std::nullopt;
}

// The permutation sending each element to its canonical index (aba -> 0,
// tk -> qn_index(t, k)).  Requires a covering decomposition.
inline Permutation canonical_permutation(QnDecomposition const& d, std::size_t order) {
  if (!d.partitions(order)) {
    throw PreconditionError("decomposition does not cover the carrier");
  }
  Permutation phi(order);
  phi[d.center] = 0;
  for (std::size_t t = 1; t <= d.n; ++t) {
    for (std::size_t k = 1; k <= 4; ++k) {
      phi[d.blocks[t - 1][k - 1]] = qn_index(t, k);
    }
  }
  return phi;
}

// q relabelled into canonical Qn indices, with labels from qn_labels.
inline CayleyTable canonical_form(CayleyTable const& q, QnDecomposition const& d,
                                  bool symbolic = false) {
  return relabel(q, canonical_permutation(d, q.order())).with_labels(qn_labels(d.n, symbolic));
}

// k -> k* within block t, 1-based, repeating with period 4 in t.
constexpr std::size_t dual_slot(std::size_t t, std::size_t k) {
  constexpr std::size_t kMap[4][4] = {
      {1, 3, 2, 4},
      {3, 4, 1, 2},
      {4, 2, 3, 1},
      {2, 1, 4, 3},
  };
  return kMap[(t - 1) % 4][k - 1];
}

// tk -> (tk)* on canonical indices; aba is fixed.  An involution.
inline Permutation dual_element_map(std::size_t n) {
  if (n < 1) {
    throw PreconditionError("dual_element_map: n must be positive");
  }
  Permutation p(4 * n + 1);
  p[0] = 0;
  for (std::size_t t = 1; t <= n; ++t) {
    for (std::size_t k = 1; k <= 4; ++k) {
      p[qn_index(t, k)] = qn_index(t, dual_slot(t, k));
    }
  }
  return p;
}

// The dual of a canonical Qn table, relabelled by the starred elements so
// that it is again canonical: cell (x*, y*) holds (y.x)*.
inline CayleyTable starred_dual(CayleyTable const& canonical, std::size_t n) {
  if (canonical.order() != 4 * n + 1) {
    throw PreconditionError("starred_dual: order is not 4n+1");
  }
  Permutation const star = dual_element_map(n);
  CayleyTable const d = CayleyTable::from_function(
      canonical.order(), [&](Element x, Element y) { return canonical(y, x); });
  return relabel(d, star).with_labels(qn_labels(n));
}

}  // namespace quadlat
