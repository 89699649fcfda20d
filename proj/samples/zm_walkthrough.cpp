// Walks through the quadratical quasigroups induced by Z_m for one modulus:
// roots of 2a^2 - 2a + 1 = 0, the shift k of each table, a translatability
// check, and the Qn decomposition.
//
//   zm_walkthrough [m]      (default 13)

#include <cstdlib>
#include <iostream>

#include "quadlat/quadlat.hpp"

int main(int argc, char** argv) {
  using namespace quadlat;
  std::uint64_t const m = argc > 1 ? std::strtoull(argv[1], nullptr, 10) : 13;

  auto const roots = solve_quadratic_congruence(m);
  if (roots.empty()) {
    std::cout << "Z_" << m << " induces no quadratical quasigroup\n";
    return 0;
  }

  for (std::uint64_t a : roots) {
    std::uint64_t const b = (m + 1 - a) % m;
    CayleyTable const t = quadratical_over_zm(m, a);
    std::uint64_t const k = translatability_k_quadratical(m, a);

    std::cout << "x.y = " << a << "x + " << b << "y (mod " << m << ")\n";
    std::cout << "  quadratical: " << std::boolalpha << is_quadratical(t) << '\n';
    std::cout << "  shift k = " << k << ", check under 0..m-1: "
              << k_translatable_check(t, identity_permutation(m), k) << '\n';

    if (m <= 16) {
      TranslatabilityReport const r = translatability_report(t, identity_permutation(m));
      std::cout << "  first row:";
      for (Element e : r.first_row) std::cout << ' ' << e;
      std::cout << '\n';
    }

    if (auto const form = detect_form(t)) {
      std::cout << "  form Q" << form->n << " from a = " << form->a << ", b = " << form->b
                << ", aba = " << form->center << '\n';
      CayleyTable const canon = canonical_form(t, *form);
      std::cout << "  canonical table:\n" << to_text(canon);
    } else {
      std::cout << "  no pair a, b gives a form Qn\n";
    }
  }
}
