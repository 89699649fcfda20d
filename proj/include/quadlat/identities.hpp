#pragma once

#include <array>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "quadlat/cayley_table.hpp"

namespace quadlat {

// The fixed set of laws the library knows how to check.  Each one is a
// universally quantified equation (or implication) over at most four
// variables x, y, z, w.
enum class IdentityId {
  law_a,                // xy.x = zx.yz
  idempotency,          // xx = x
  elasticity,           // x.yx = xy.x
  strong_elasticity,    // x.yx = xy.x = yx.y
  bookend,              // yx.xy = x
  left_distributivity,  // x.yz = xy.xz
  right_distributivity, // xy.z = xz.yz
  mediality,            // xy.zw = xz.yw
  eq8,                  // x(y.yx) = (xy.x)y
  eq9,                  // (xy.y)x = y(x.yx)
  alterability,         // xy = zw  <=>  yz = wx
  left_cancellation,    // xy = xz  =>  y = z
  right_cancellation,   // yx = zx  =>  y = z
  right_solvability,    // for all x, y there is z with x.z = y
  latin_square,         // every row and column is a permutation
};

inline constexpr std::array<IdentityId, 15> kAllIdentities = {
    IdentityId::law_a,
    IdentityId::idempotency,
    IdentityId::elasticity,
    IdentityId::strong_elasticity,
    IdentityId::bookend,
    IdentityId::left_distributivity,
    IdentityId::right_distributivity,
    IdentityId::mediality,
    IdentityId::eq8,
    IdentityId::eq9,
    IdentityId::alterability,
    IdentityId::left_cancellation,
    IdentityId::right_cancellation,
    IdentityId::right_solvability,
    IdentityId::latin_square,
};

// The ten named identities every quadratical groupoid satisfies, plus (A).
inline constexpr std::array<IdentityId, 11> kQuadraticalIdentities = {
    IdentityId::idempotency,
    IdentityId::elasticity,
    IdentityId::strong_elasticity,
    IdentityId::bookend,
    IdentityId::left_distributivity,
    IdentityId::right_distributivity,
    IdentityId::mediality,
    IdentityId::eq8,
    IdentityId::eq9,
    IdentityId::alterability,
    IdentityId::law_a,
};

constexpr std::string_view identity_name(IdentityId id) {
  switch (id) {
    case IdentityId::law_a: return "A";
    case IdentityId::idempotency: return "idempotency";
    case IdentityId::elasticity: return "elasticity";
    case IdentityId::strong_elasticity: return "strong-elasticity";
    case IdentityId::bookend: return "bookend";
    case IdentityId::left_distributivity: return "left-distributivity";
    case IdentityId::right_distributivity: return "right-distributivity";
    case IdentityId::mediality: return "mediality";
    case IdentityId::eq8: return "eq8";
    case IdentityId::eq9: return "eq9";
    case IdentityId::alterability: return "alterability";
    case IdentityId::left_cancellation: return "left-cancellation";
    case IdentityId::right_cancellation: return "right-cancellation";
    case IdentityId::right_solvability: return "right-solvability";
    case IdentityId::latin_square: return "latin-square";
  }
  return "?";
}

constexpr std::string_view identity_equation(IdentityId id) {
  switch (id) {
    case IdentityId::law_a: return "xy.x = zx.yz";
    case IdentityId::idempotency: return "xx = x";
    case IdentityId::elasticity: return "x.yx = xy.x";
    case IdentityId::strong_elasticity: return "x.yx = xy.x = yx.y";
    case IdentityId::bookend: return "yx.xy = x";
    case IdentityId::left_distributivity: return "x.yz = xy.xz";
    case IdentityId::right_distributivity: return "xy.z = xz.yz";
    case IdentityId::mediality: return "xy.zw = xz.yw";
    case IdentityId::eq8: return "x(y.yx) = (xy.x)y";
    case IdentityId::eq9: return "(xy.y)x = y(x.yx)";
    case IdentityId::alterability: return "xy = zw <=> yz = wx";
    case IdentityId::left_cancellation: return "xy = xz => y = z";
    case IdentityId::right_cancellation: return "yx = zx => y = z";
    case IdentityId::right_solvability: return "for all x,y exists z: xz = y";
    case IdentityId::latin_square: return "rows and columns are permutations";
  }
  return "?";
}

inline std::optional<IdentityId> parse_identity(std::string_view name) {
  for (IdentityId id : kAllIdentities) {
    if (identity_name(id) == name) {
      return id;
    }
  }
  return std::nullopt;
}

// Number of quantified variables; the counterexample tuple has this length.
constexpr std::size_t identity_arity(IdentityId id) {
  switch (id) {
    case IdentityId::idempotency: return 1;
    case IdentityId::elasticity:
    case IdentityId::strong_elasticity:
    case IdentityId::bookend:
    case IdentityId::eq8:
    case IdentityId::eq9:
    case IdentityId::right_solvability: return 2;
    case IdentityId::law_a:
    case IdentityId::left_distributivity:
    case IdentityId::right_distributivity:
    case IdentityId::left_cancellation:
    case IdentityId::right_cancellation:
    case IdentityId::latin_square: return 3;
    case IdentityId::mediality:
    case IdentityId::alterability: return 4;
  }
  return 0;
}

struct Verdict {
  // Empty when the identity holds; otherwise the lexicographically least
  // violating assignment (x, y, z, w), truncated to the identity's arity.
  std::optional<std::vector<Element>> counterexample;

  [[nodiscard]] bool holds() const noexcept { return !counterexample.has_value(); }
};

// Evaluates one instance of the identity.  For latin_square the tuple is
// (x, y, z) with y < z and x.y = x.z (row clash) or y.x = z.x (column clash).
inline bool violates(CayleyTable const& t, IdentityId id, std::span<Element const> v) {
  auto const p = [&t](Element a, Element b) { return t(a, b); };
  switch (id) {
    case IdentityId::law_a: {
      Element x = v[0], y = v[1], z = v[2];
      return p(p(x, y), x) != p(p(z, x), p(y, z));
    }
    case IdentityId::idempotency:
      return p(v[0], v[0]) != v[0];
    case IdentityId::elasticity: {
      Element x = v[0], y = v[1];
      return p(x, p(y, x)) != p(p(x, y), x);
    }
    case IdentityId::strong_elasticity: {
      Element x = v[0], y = v[1];
      Element const lhs = p(x, p(y, x));
      return lhs != p(p(x, y), x) || lhs != p(p(y, x), y);
    }
    case IdentityId::bookend: {
      Element x = v[0], y = v[1];
      return p(p(y, x), p(x, y)) != x;
    }
    case IdentityId::left_distributivity: {
      Element x = v[0], y = v[1], z = v[2];
      return p(x, p(y, z)) != p(p(x, y), p(x, z));
    }
    case IdentityId::right_distributivity: {
      Element x = v[0], y = v[1], z = v[2];
      return p(p(x, y), z) != p(p(x, z), p(y, z));
    }
    case IdentityId::mediality: {
      Element x = v[0], y = v[1], z = v[2], w = v[3];
      return p(p(x, y), p(z, w)) != p(p(x, z), p(y, w));
    }
    case IdentityId::eq8: {
      Element x = v[0], y = v[1];
      return p(x, p(y, p(y, x))) != p(p(p(x, y), x), y);
    }
    case IdentityId::eq9: {
      Element x = v[0], y = v[1];
      return p(p(p(x, y), y), x) != p(y, p(x, p(y, x)));
    }
    case IdentityId::alterability: {
      Element x = v[0], y = v[1], z = v[2], w = v[3];
      return (p(x, y) == p(z, w)) != (p(y, z) == p(w, x));
    }
    case IdentityId::left_cancellation: {
      Element x = v[0], y = v[1], z = v[2];
      return y != z && p(x, y) == p(x, z);
    }
    case IdentityId::right_cancellation: {
      Element x = v[0], y = v[1], z = v[2];
      return y != z && p(y, x) == p(z, x);
    }
    case IdentityId::right_solvability: {
      Element x = v[0], y = v[1];
      auto r = t.row(x);
      return std::find(r.begin(), r.end(), y) == r.end();
    }
    case IdentityId::latin_square: {
      Element x = v[0], y = v[1], z = v[2];
      return y != z && (p(x, y) == p(x, z) || p(y, x) == p(z, x));
    }
  }
  return false;
}

// Exhaustive check over all assignments in lexicographic order.
inline Verdict check_identity(CayleyTable const& t, IdentityId id) {
  auto const n = static_cast<Element>(t.order());
  std::size_t const arity = identity_arity(id);
  std::array<Element, 4> v{};
  // Odometer over n^arity tuples; the last variable moves fastest.
  while (true) {
    if (violates(t, id, std::span<Element const>(v.data(), arity))) {
      return Verdict{std::vector<Element>(v.begin(), v.begin() + static_cast<long>(arity))};
    }
    std::size_t i = arity;
    while (i > 0) {
      --i;
      if (++v[i] < n) {
        break;
      }
      v[i] = 0;
      if (i == 0) {
        return Verdict{};
      }
    }
  }
}

struct IdentityReport {
  std::vector<std::pair<IdentityId, Verdict>> verdicts;

  [[nodiscard]] bool all_hold() const {
    return std::all_of(verdicts.begin(), verdicts.end(),
                       [](auto const& e) { return e.second.holds(); });
  }

  [[nodiscard]] Verdict const* find(IdentityId id) const {
    for (auto const& [i, v] : verdicts) {
      if (i == id) {
        return &v;
      }
    }
    return nullptr;
  }
};

inline IdentityReport check_identities(CayleyTable const& t, std::span<IdentityId const> ids) {
  IdentityReport report;
  for (IdentityId id : ids) {
    report.verdicts.emplace_back(id, check_identity(t, id));
  }
  return report;
}

inline bool is_quasigroup(CayleyTable const& t) {
  std::size_t const n = t.order();
  for (Element x = 0; x < n; ++x) {
    if (!is_permutation_of_range(t.row(x), n)) {
      return false;
    }
    if (!is_permutation_of_range(t.column(x), n)) {
      return false;
    }
  }
  return true;
}

struct QuadraticalVerdict {
  bool quadratical = false;
  IdentityReport witness;  // idempotency, bookend, mediality, latin-square
};

// Idempotent + bookend + medial quasigroup.  The latin check runs first and
// is O(n^2); mediality, the O(n^4) part, is skipped once anything fails.
inline QuadraticalVerdict check_quadratical(CayleyTable const& t) {
  QuadraticalVerdict out;
  static constexpr std::array<IdentityId, 4> kOrder = {
      IdentityId::latin_square, IdentityId::idempotency, IdentityId::bookend,
      IdentityId::mediality};
  bool ok = true;
  for (IdentityId id : kOrder) {
    Verdict v;
    if (id == IdentityId::latin_square && is_quasigroup(t)) {
      v = Verdict{};
    } else if (ok || id != IdentityId::mediality) {
      v = check_identity(t, id);
    } else {
      continue;
    }
    ok = ok && v.holds();
    out.witness.verdicts.emplace_back(id, std::move(v));
  }
  out.quadratical = ok;
  return out;
}

inline bool is_quadratical(CayleyTable const& t) { return check_quadratical(t).quadratical; }

}  // namespace quadlat
