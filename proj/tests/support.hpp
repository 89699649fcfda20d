#pragma once

// Fixture access and brute-force oracles.  The oracles are deliberately
// naive re-implementations that share no code with the library beyond the
// CayleyTable container.

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "quadlat/quadlat.hpp"

#ifndef QUADLAT_FIXTURE_DIR
#error "QUADLAT_FIXTURE_DIR must be defined"
#endif

namespace quadlat::testing {

inline std::string fixture_path(std::string const& name) {
  return std::string(QUADLAT_FIXTURE_DIR) + "/" + name;
}

inline CayleyTable fixture(std::string const& name) { return load_table(fixture_path(name)); }

// Tables built directly from formulas, no library construction helpers.
inline CayleyTable affine_table(int m, int a, int b, int c = 0) {
  std::vector<Element> e(static_cast<std::size_t>(m * m));
  for (int x = 0; x < m; ++x) {
    for (int y = 0; y < m; ++y) {
      e[x * m + y] = static_cast<Element>(((a * x + b * y + c) % m + m) % m);
    }
  }
  return CayleyTable(static_cast<std::size_t>(m), std::move(e));
}

inline CayleyTable additive_table(int n) { return affine_table(n, 1, 1); }

namespace oracle {

inline std::vector<std::uint64_t> quadratic_roots(std::uint64_t m) {
  std::vector<std::uint64_t> out;
  for (std::uint64_t a = 0; a < m; ++a) {
    if ((2 * a * a + 1 + 2 * m * m - 2 * a) % m == 0) {
      out.push_back(a);
    }
  }
  return out;
}

// Smallest k in 1..m-1 with (a-1)k = a mod m, by scanning.
inline std::optional<std::uint64_t> k_by_scan(std::uint64_t m, std::uint64_t a) {
  for (std::uint64_t k = 1; k < m; ++k) {
    if (((a + m - 1) % m) * k % m == a % m) {
      return k;
    }
  }
  return std::nullopt;
}

inline bool latin(CayleyTable const& t) {
  std::size_t const n = t.order();
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<int> r(n, 0), c(n, 0);
    for (std::size_t j = 0; j < n; ++j) {
      if (r[t(i, j)]++ || c[t(j, i)]++) {
        return false;
      }
    }
  }
  return true;
}

inline bool idempotent(CayleyTable const& t) {
  for (Element x = 0; x < t.order(); ++x) {
    if (t(x, x) != x) return false;
  }
  return true;
}

inline bool commutative(CayleyTable const& t) {
  for (Element x = 0; x < t.order(); ++x) {
    for (Element y = 0; y < t.order(); ++y) {
      if (t(x, y) != t(y, x)) return false;
    }
  }
  return true;
}

inline bool associative(CayleyTable const& t) {
  std::size_t const n = t.order();
  for (Element x = 0; x < n; ++x)
    for (Element y = 0; y < n; ++y)
      for (Element z = 0; z < n; ++z)
        if (t(t(x, y), z) != t(x, t(y, z))) return false;
  return true;
}

inline bool bookend(CayleyTable const& t) {
  for (Element x = 0; x < t.order(); ++x)
    for (Element y = 0; y < t.order(); ++y)
      if (t(t(y, x), t(x, y)) != x) return false;
  return true;
}

inline bool medial(CayleyTable const& t) {
  std::size_t const n = t.order();
  for (Element x = 0; x < n; ++x)
    for (Element y = 0; y < n; ++y)
      for (Element z = 0; z < n; ++z)
        for (Element w = 0; w < n; ++w)
          if (t(t(x, y), t(z, w)) != t(t(x, z), t(y, w))) return false;
  return true;
}

inline bool quadratical(CayleyTable const& t) {
  return latin(t) && idempotent(t) && bookend(t) && medial(t);
}

// Row i of the table equals row 0 rotated right by i*k, read through the
// shared ordering.  Uses the closed-form index, not the recurrence.
inline bool translatable(CayleyTable const& t, Permutation const& ord, std::size_t k) {
  std::size_t const n = t.order();
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (t(ord[i], ord[j]) != t(ord[0], ord[(i * (n - k) + j) % n])) return false;
    }
  }
  return true;
}

// Any ordering and k, by trying all (n-1)! orderings with ord[0] = 0.
inline bool has_translatable_ordering(CayleyTable const& t) {
  std::size_t const n = t.order();
  Permutation ord(n);
  std::iota(ord.begin(), ord.end(), Element{0});
  do {
    for (std::size_t k = 1; k < n; ++k) {
      if (translatable(t, ord, k)) return true;
    }
  } while (std::next_permutation(ord.begin() + 1, ord.end()));
  return false;
}

inline bool is_hom(CayleyTable const& a, CayleyTable const& b, Permutation const& p) {
  for (Element x = 0; x < a.order(); ++x)
    for (Element y = 0; y < a.order(); ++y)
      if (p[a(x, y)] != b(p[x], p[y])) return false;
  return true;
}

// Exhaustive isomorphism test; only for small orders.
inline bool isomorphic(CayleyTable const& a, CayleyTable const& b) {
  if (a.order() != b.order()) return false;
  Permutation p(a.order());
  std::iota(p.begin(), p.end(), Element{0});
  do {
    if (is_hom(a, b, p)) return true;
  } while (std::next_permutation(p.begin(), p.end()));
  return false;
}

inline std::vector<Element> closure(CayleyTable const& t, std::vector<Element> s) {
  std::vector<bool> in(t.order(), false);
  for (Element x : s) in[x] = true;
  bool grew = true;
  while (grew) {
    grew = false;
    for (Element x = 0; x < t.order(); ++x)
      for (Element y = 0; y < t.order(); ++y)
        if (in[x] && in[y] && !in[t(x, y)]) in[t(x, y)] = grew = true;
  }
  std::vector<Element> out;
  for (Element x = 0; x < t.order(); ++x)
    if (in[x]) out.push_back(x);
  return out;
}

}  // namespace oracle

inline Permutation random_permutation(std::size_t n, std::mt19937_64& rng) {
  Permutation p(n);
  std::iota(p.begin(), p.end(), Element{0});
  std::shuffle(p.begin(), p.end(), rng);
  return p;
}

// 1-based first rows turned 0-based.
inline std::vector<Element> zero_based(std::vector<int> const& one_based) {
  std::vector<Element> out;
  for (int v : one_based) out.push_back(static_cast<Element>(v - 1));
  return out;
}

}  // namespace quadlat::testing
