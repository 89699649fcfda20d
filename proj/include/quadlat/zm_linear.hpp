#pragma once

#include <cstdint>
#include <numeric>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "quadlat/cayley_table.hpp"
#include "quadlat/errors.hpp"

namespace quadlat {

// x * y = a x + b y + c  (mod m)
struct LinearSpec {
  std::uint64_t m = 1;
  std::uint64_t a = 0;
  std::uint64_t b = 0;
  std::uint64_t c = 0;

  // Reduces coefficients mod m; m must be positive.
  static LinearSpec make(std::int64_t m, std::int64_t a, std::int64_t b, std::int64_t c = 0) {
    if (m < 1) {
      throw PreconditionError("modulus must be positive, got " + std::to_string(m));
    }
    auto red = [m](std::int64_t v) { return static_cast<std::uint64_t>(((v % m) + m) % m); };
    return LinearSpec{static_cast<std::uint64_t>(m), red(a), red(b), red(c)};
  }

  [[nodiscard]] bool is_quadratical_form() const {
    return c == 0 && (a + b) % m == 1 % m && (2 * a * a + 2 * m - 2 * a + 1) % m == 0;
  }

  friend bool operator==(LinearSpec const&, LinearSpec const&) = default;
};

inline bool solves_quadratic_congruence(std::uint64_t m, std::uint64_t a) {
  a %= m;
  return (2 * a * a + 2 * m - 2 * a + 1) % m == 0;
}

// All a in Z_m with 2a^2 - 2a + 1 = 0, ascending.
inline std::vector<std::uint64_t> solve_quadratic_congruence(std::uint64_t m) {
  if (m < 1) {
    throw PreconditionError("modulus must be positive");
  }
  std::vector<std::uint64_t> out;
  for (std::uint64_t a = 0; a < m; ++a) {
    if (solves_quadratic_congruence(m, a)) {
      out.push_back(a);
    }
  }
  return out;
}

inline CayleyTable linear_table(LinearSpec const& s) {
  if (s.m > 4096) {
    throw PreconditionError("linear_table: modulus " + std::to_string(s.m) +
                            " too large for a dense table");
  }
  return CayleyTable::from_function(s.m, [&s](Element x, Element y) {
    return static_cast<Element>((s.a * x + s.b * y + s.c) % s.m);
  });
}

inline CayleyTable quadratical_over_zm(std::uint64_t m, std::uint64_t a) {
  if (m < 1 || a >= m || !solves_quadratic_congruence(m, a)) {
    throw PreconditionError("a = " + std::to_string(a) + " does not solve 2a^2-2a+1 = 0 mod " +
                            std::to_string(m));
  }
  return linear_table(LinearSpec{m, a, (m + 1 - a) % m, 0});
}

// Every k in 1..m-1 with a + k b = 0 (mod m).  More than one value only when
// gcd(b, m) > 1.
inline std::vector<std::uint64_t> translatability_k_linear(LinearSpec const& s) {
  std::vector<std::uint64_t> ks;
  for (std::uint64_t k = 1; k < s.m; ++k) {
    if ((s.a + k * s.b) % s.m == 0) {
      ks.push_back(k);
    }
  }
  return ks;
}

namespace detail {

// Inverse of v modulo m; caller guarantees gcd(v, m) = 1.
inline std::uint64_t mod_inverse(std::uint64_t v, std::uint64_t m) {
  std::int64_t r0 = static_cast<std::int64_t>(m), r1 = static_cast<std::int64_t>(v % m);
  std::int64_t s0 = 0, s1 = 1;
  while (r1 != 0) {
    std::int64_t const q = r0 / r1;
    r0 = std::exchange(r1, r0 - q * r1);
    s0 = std::exchange(s1, s0 - q * s1);
  }
  auto const mm = static_cast<std::int64_t>(m);
  return static_cast<std::uint64_t>(((s0 % mm) + mm) % mm);
}

}  // namespace detail

// The unique k with (a - 1) k = a (mod m).
inline std::uint64_t translatability_k_quadratical(std::uint64_t m, std::uint64_t a) {
  if (m < 2) {
    throw PreconditionError("translatability index needs m >= 2");
  }
  if (a >= m || !solves_quadratic_congruence(m, a)) {
    throw PreconditionError("a = " + std::to_string(a) + " does not solve 2a^2-2a+1 = 0 mod " +
                            std::to_string(m));
  }
  std::uint64_t const am1 = (a + m - 1) % m;
  if (std::gcd(am1, m) != 1) {
    throw InvariantViolation("gcd(a-1, m) != 1 for m = " + std::to_string(m) +
                             ", a = " + std::to_string(a));
  }
  std::uint64_t const k = a * detail::mod_inverse(am1, m) % m;
  if (k == 0) {
    throw InvariantViolation("translatability index is 0 for m = " + std::to_string(m));
  }
  return k;
}

}  // namespace quadlat
