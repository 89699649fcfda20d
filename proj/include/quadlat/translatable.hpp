#pragma once

#include <cstdint>
#include <cstdlib>
#include <numeric>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "quadlat/cayley_table.hpp"
#include "quadlat/errors.hpp"
#include "quadlat/identities.hpp"

namespace quadlat {

// Valid shifts of a table under one shared row/column ordering.
struct TranslatabilityReport {
  Permutation ordering;
  std::vector<std::size_t> valid_ks;
  std::vector<Element> first_row;  // row ordering[0], columns in ordering
};

namespace detail {

inline void require_ordering(CayleyTable const& t, Permutation const& ordering) {
  if (!is_permutation_of_range(ordering, t.order())) {
    throw PreconditionError("ordering is not a permutation of the carrier");
  }
}

// Row i, column j of t presented under `ordering`.
inline Element at(CayleyTable const& t, Permutation const& ordering, std::size_t i,
                  std::size_t j) {
  return t(ordering[i], ordering[j]);
}

}  // namespace detail

// Row q equals row q-1 rotated right by k, for q = 1..n-1.
inline bool k_translatable_check(CayleyTable const& t, Permutation const& ordering, std::size_t k) {
  std::size_t const n = t.order();
  if (k < 1 || k >= n) {
    throw PreconditionError("shift k = " + std::to_string(k) + " outside 1.." +
                            std::to_string(n == 0 ? 0 : n - 1));
  }
  detail::require_ordering(t, ordering);
  for (std::size_t i = 1; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (detail::at(t, ordering, i, j) != detail::at(t, ordering, i - 1, (j + n - k) % n)) {
        return false;
      }
    }
  }
  return true;
}

inline std::vector<std::size_t> all_valid_k(CayleyTable const& t, Permutation const& ordering) {
  detail::require_ordering(t, ordering);
  std::vector<std::size_t> ks;
  for (std::size_t k = 1; k < t.order(); ++k) {
    if (k_translatable_check(t, ordering, k)) {
      ks.push_back(k);
    }
  }
  return ks;
}

inline TranslatabilityReport translatability_report(CayleyTable const& t,
                                                    Permutation const& ordering) {
  TranslatabilityReport r;
  r.valid_ks = all_valid_k(t, ordering);
  r.ordering = ordering;
  for (std::size_t j = 0; j < t.order(); ++j) {
    r.first_row.push_back(detail::at(t, ordering, 0, j));
  }
  return r;
}

inline constexpr std::size_t kDefaultOrderSearchCap = 10;

// The cap, raised by QUADLAT_MAX_ORDER_SEARCH when set to a positive integer.
inline std::size_t order_search_cap() {
  if (char const* env = std::getenv("QUADLAT_MAX_ORDER_SEARCH")) {
    char* end = nullptr;
    unsigned long const v = std::strtoul(env, &end, 10);
    if (end != env && *end == '\0' && v > 0) {
      return static_cast<std::size_t>(v);
    }
  }
  return kDefaultOrderSearchCap;
}

struct OrderingWitness {
  Permutation ordering;
  std::size_t k = 0;
};

namespace detail {

// Depth-first search over orderings with ordering[0] fixed to 0: rotating a
// witness ordering keeps it a witness, so some witness starts with any given
// element.  `alive` is a bitmask of shifts still consistent with the placed
// prefix; a branch dies when it empties.
class OrderingSearch {
 public:
  explicit OrderingSearch(CayleyTable const& t) : t_(t), n_(t.order()) {}

  std::optional<OrderingWitness> run() {
    if (n_ < 2) {
      return std::nullopt;
    }
    order_.assign(n_, 0);
    used_.assign(n_, false);
    order_[0] = 0;
    used_[0] = true;
    std::uint64_t alive = 0;
    for (std::size_t k = 1; k < n_; ++k) {
      alive |= std::uint64_t{1} << k;
    }
    alive = prune(1, alive);
    if (extend(1, alive)) {
      return found_;
    }
    return std::nullopt;
  }

 private:
  // Keeps the shifts whose law holds on every cell pair that became fully
  // placed when position p-1 was filled.
  std::uint64_t prune(std::size_t p, std::uint64_t alive) const {
    std::size_t const last = p - 1;
    for (std::size_t k = 1; k < n_; ++k) {
      if (!(alive >> k & 1)) {
        continue;
      }
      if (!consistent(p, last, k)) {
        alive &= ~(std::uint64_t{1} << k);
      }
    }
    return alive;
  }

  bool holds(std::size_t i, std::size_t j, std::size_t k) const {
    std::size_t const src = (j + n_ - k) % n_;
    return t_(order_[i], order_[j]) == t_(order_[i - 1], order_[src]);
  }

  bool consistent(std::size_t p, std::size_t last, std::size_t k) const {
    for (std::size_t i = 1; i < p; ++i) {
      for (std::size_t j = 0; j < p; ++j) {
        std::size_t const src = (j + n_ - k) % n_;
        if (src >= p) {
          continue;
        }
        if (i != last && j != last && src != last) {
          continue;
        }
        if (!holds(i, j, k)) {
          return false;
        }
      }
    }
    return true;
  }

  bool extend(std::size_t p, std::uint64_t alive) {
    if (alive == 0) {
      return false;
    }
    if (p == n_) {
      for (std::size_t k = 1; k < n_; ++k) {
        if (alive >> k & 1) {
          found_ = OrderingWitness{order_, k};
          return true;
        }
      }
      return false;
    }
    for (Element x = 0; x < n_; ++x) {
      if (used_[x]) {
        continue;
      }
      order_[p] = x;
      used_[x] = true;
      bool const ok = extend(p + 1, prune(p + 1, alive));
      used_[x] = false;
      if (ok) {
        return true;
      }
    }
    return false;
  }

  CayleyTable const& t_;
  std::size_t n_;
  Permutation order_;
  std::vector<bool> used_;
  OrderingWitness found_;
};

}  // namespace detail

// Exhaustive search for an ordering and shift under which t is translatable.
// Returns the lexicographically least ordering (and its least k), or nothing
// when no pair exists.  Throws CapExceeded above order_search_cap().
inline std::optional<OrderingWitness> find_translatable_ordering(CayleyTable const& t) {
  std::size_t const cap = order_search_cap();
  if (t.order() > cap) {
    throw CapExceeded("ordering search limited to order <= " + std::to_string(cap) + ", got " +
                      std::to_string(t.order()) + " (raise QUADLAT_MAX_ORDER_SEARCH)");
  }
  if (t.order() > 63) {
    throw CapExceeded("ordering search supports order <= 63");
  }
  return detail::OrderingSearch(t).run();
}

// The table whose row i is `first_row` rotated right by i*k, under the
// natural ordering: entry (i, j) = first_row[(i(n-k) + j) mod n].
inline CayleyTable build_from_first_row(std::vector<Element> const& first_row, std::size_t k) {
  std::size_t const n = first_row.size();
  if (n == 0) {
    throw PreconditionError("first row is empty");
  }
  if (n > 1 && (k < 1 || k >= n)) {
    throw PreconditionError("shift k = " + std::to_string(k) + " outside 1.." +
                            std::to_string(n - 1));
  }
  return CayleyTable::from_function(n, [&](Element i, Element j) {
    return first_row[(i * (n - k) + j) % n];
  });
}

inline void check_idempotent_params(std::size_t n, std::size_t k) {
  if (n < 2) {
    throw PreconditionError("order must be at least 2");
  }
  if (n % 2 == 0) {
    throw PreconditionError("no idempotent k-translatable quasigroup has even order " +
                            std::to_string(n));
  }
  if (k < 1 || k >= n) {
    throw PreconditionError("shift k = " + std::to_string(k) + " outside 1.." +
                            std::to_string(n - 1));
  }
  if (std::gcd(n, k) != 1 || std::gcd(n, k - 1) != 1) {
    throw PreconditionError("need gcd(n,k) = gcd(n,k-1) = 1 for n = " + std::to_string(n) +
                            ", k = " + std::to_string(k));
  }
}

// 0-based first row of the idempotent k-translatable quasigroup of order n.
// In 1-based terms element i sits at position (i-1)(n-k) + i (mod n).
inline std::vector<Element> idempotent_first_row(std::size_t n, std::size_t k) {
  check_idempotent_params(n, k);
  std::vector<Element> row(n, 0);
  std::vector<bool> filled(n, false);
  for (std::size_t i = 1; i <= n; ++i) {
    std::size_t pos = ((i - 1) * (n - k) + i) % n;  // 1-based, 0 stands for n
    if (pos == 0) {
      pos = n;
    }
    if (filled[pos - 1]) {
      throw InvariantViolation("idempotent_first_row: position collision");
    }
    filled[pos - 1] = true;
    row[pos - 1] = static_cast<Element>(i - 1);
  }
  return row;
}

inline CayleyTable build_idempotent_k_translatable(std::size_t n, std::size_t k) {
  CayleyTable t = build_from_first_row(idempotent_first_row(n, k), k);
  if (!check_identity(t, IdentityId::idempotency).holds() || !is_quasigroup(t)) {
    throw InvariantViolation("built table is not an idempotent quasigroup");
  }
  return t;
}

// Every k for which the idempotent k-translatable quasigroup of order n
// exists and is quadratical.
inline std::vector<std::size_t> feasible_k_idempotent_quadratical(std::size_t n) {
  if (n % 2 == 0) {
    throw PreconditionError("order must be odd");
  }
  std::vector<std::size_t> ks;
  for (std::size_t k = 2; k < n; ++k) {
    if (std::gcd(n, k) != 1 || std::gcd(n, k - 1) != 1) {
      continue;
    }
    if (is_quadratical(build_idempotent_k_translatable(n, k))) {
      ks.push_back(k);
    }
  }
  return ks;
}

struct GcdPropertyResult {
  bool has_cancellable_row = false;
  bool is_quasigroup = false;
};

inline GcdPropertyResult gcd_quasigroup_property_test(std::vector<Element> const& first_row,
                                                      std::size_t k) {
  std::size_t const n = first_row.size();
  GcdPropertyResult r;
  r.has_cancellable_row = is_permutation_of_range(first_row, n);
  if (!r.has_cancellable_row) {
    throw PreconditionError("first row must contain every element once");
  }
  r.is_quasigroup = quadlat::is_quasigroup(build_from_first_row(first_row, k));
  return r;
}

}  // namespace quadlat
