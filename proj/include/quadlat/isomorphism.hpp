#pragma once

#include <algorithm>
#include <array>
#include <optional>
#include <tuple>
#include <vector>

#include "quadlat/cayley_table.hpp"
#include "quadlat/groupoid.hpp"

namespace quadlat {

namespace detail {

// Isomorphism-invariant fingerprint of one element.
struct ElementSignature {
  bool idempotent = false;
  std::size_t commuting = 0;       // |{y : xy = yx}|
  std::size_t left_fixed = 0;      // |{y : xy = y}|
  std::size_t right_fixed = 0;     // |{y : yx = y}|
  std::size_t closure_size = 0;    // |<x>|
  std::size_t square_closure = 0;  // |<x, xx>| is redundant; kept as |<x, x.x.x>|

  friend auto operator<=>(ElementSignature const&, ElementSignature const&) = default;
};

inline std::vector<ElementSignature> signatures(CayleyTable const& t) {
  std::size_t const n = t.order();
  std::vector<ElementSignature> sig(n);
  for (Element x = 0; x < n; ++x) {
    auto& s = sig[x];
    s.idempotent = t(x, x) == x;
    for (Element y = 0; y < n; ++y) {
      s.commuting += t(x, y) == t(y, x);
      s.left_fixed += t(x, y) == y;
      s.right_fixed += t(y, x) == y;
    }
    std::array<Element, 1> one{x};
    s.closure_size = generated_subgroupoid(t, one).size();
    std::array<Element, 2> two{x, t(t(x, x), x)};
    s.square_closure = generated_subgroupoid(t, two).size();
  }
  return sig;
}

// Backtracking over images with closure propagation.  `plan` lists the
// elements to branch on, in order; after each choice every product of
// already-mapped elements is forced.
class IsoSearch {
 public:
  IsoSearch(CayleyTable const& from, CayleyTable const& to,
            std::vector<ElementSignature> const& sig_from,
            std::vector<ElementSignature> const& sig_to)
      : from_(from), to_(to), sig_from_(sig_from), sig_to_(sig_to), n_(from.order()) {}

  std::optional<Permutation> run(std::vector<Element> const& plan) {
    std::vector<int> phi(n_, -1);
    std::vector<int> inv(n_, -1);
    std::vector<Element> mapped;
    if (search(plan, 0, phi, inv, mapped)) {
      Permutation out(n_);
      for (std::size_t i = 0; i < n_; ++i) {
        out[i] = static_cast<Element>(phi[i]);
      }
      return out;
    }
    return std::nullopt;
  }

 private:
  bool assign(Element x, Element image, std::vector<int>& phi, std::vector<int>& inv,
              std::vector<Element>& mapped) const {
    std::vector<std::pair<Element, Element>> queue{{x, image}};
    while (!queue.empty()) {
      auto [u, img] = queue.back();
      queue.pop_back();
      if (phi[u] >= 0) {
        if (phi[u] != static_cast<int>(img)) {
          return false;
        }
        continue;
      }
      if (inv[img] >= 0 || sig_from_[u] != sig_to_[img]) {
        return false;
      }
      phi[u] = static_cast<int>(img);
      inv[img] = static_cast<int>(u);
      mapped.push_back(u);
      for (Element v : mapped) {
        auto const pu = static_cast<Element>(phi[u]);
        auto const pv = static_cast<Element>(phi[v]);
        queue.emplace_back(from_(u, v), to_(pu, pv));
        queue.emplace_back(from_(v, u), to_(pv, pu));
      }
    }
    return true;
  }

  bool search(std::vector<Element> const& plan, std::size_t depth, std::vector<int>& phi,
              std::vector<int>& inv, std::vector<Element>& mapped) const {
    while (depth < plan.size() && phi[plan[depth]] >= 0) {
      ++depth;
    }
    if (depth == plan.size()) {
      return mapped.size() == n_;
    }
    Element const x = plan[depth];
    for (Element img = 0; img < n_; ++img) {
      if (inv[img] >= 0 || sig_from_[x] != sig_to_[img]) {
        continue;
      }
      auto phi2 = phi;
      auto inv2 = inv;
      auto mapped2 = mapped;
      if (assign(x, img, phi2, inv2, mapped2) && search(plan, depth + 1, phi2, inv2, mapped2)) {
        phi = std::move(phi2);
        inv = std::move(inv2);
        mapped = std::move(mapped2);
        return true;
      }
    }
    return false;
  }

  CayleyTable const& from_;
  CayleyTable const& to_;
  std::vector<ElementSignature> const& sig_from_;
  std::vector<ElementSignature> const& sig_to_;
  std::size_t n_;
};

}  // namespace detail

inline bool is_isomorphism(CayleyTable const& from, CayleyTable const& to, Permutation const& phi) {
  std::size_t const n = from.order();
  if (to.order() != n || !is_permutation_of_range(phi, n)) {
    return false;
  }
  for (Element x = 0; x < n; ++x) {
    for (Element y = 0; y < n; ++y) {
      if (phi[from(x, y)] != to(phi[x], phi[y])) {
        return false;
      }
    }
  }
  return true;
}

// Finds phi with phi(x.y) = phi(x) o phi(y), or proves none exists.
//
// Images are chosen for a small generating set of `from` first (two elements
// whenever the table is 2-generated); closure then forces the rest, so each
// candidate costs O(n^2).  Tables without a small generating set degrade to
// element-by-element backtracking pruned by per-element invariants.
inline std::optional<Permutation> find_isomorphism(CayleyTable const& from, CayleyTable const& to) {
  std::size_t const n = from.order();
  if (to.order() != n) {
    throw PreconditionError("find_isomorphism: orders differ (" + std::to_string(n) + " vs " +
                            std::to_string(to.order()) + ")");
  }
  auto const sig_from = detail::signatures(from);
  auto const sig_to = detail::signatures(to);
  {
    auto a = sig_from;
    auto b = sig_to;
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    if (a != b) {
      return std::nullopt;
    }
  }
  std::vector<Element> plan = greedy_generating_set(from);
  for (Element x = 0; x < n; ++x) {
    if (std::find(plan.begin(), plan.end(), x) == plan.end()) {
      plan.push_back(x);
    }
  }
  detail::IsoSearch search(from, to, sig_from, sig_to);
  auto phi = search.run(plan);
  if (phi && !is_isomorphism(from, to, *phi)) {
    throw InvariantViolation("find_isomorphism: search produced a non-isomorphism");
  }
  return phi;
}

}  // namespace quadlat
