// Haar moments of O+_2 and of a deformed O+_F, with the Schur variances.

#include <iostream>

#include "ofplus/ofplus.hpp"

int main() {
  using namespace ofplus;

  HaarState<Exact> o2(build_canonical<Exact>({1, 0, {}, 2}));
  std::cout << "O+_2:  h(u11^2) = " << to_string(o2.moment({1, 1}, {1, 1}))
            << ", h(u11^4) = " << to_string(o2.moment({1, 1, 1, 1}, {1, 1, 1, 1}))
            << ", h(u11 u12 u11 u12) = " << to_string(o2.moment({1, 1, 1, 1}, {1, 2, 1, 2})) << "\n";

  HaarState<Exact> h(build_canonical<Exact>({1, 1, {Rational(1, 2)}, 2}));
  std::cout << "F = [[0, 1/2], [2, 0]], N_F = " << to_string(h.f().quantum_dimension()) << "\n";
  for (const char* w : {"1:1* 1:1", "1:1 1:1*", "1:1 1:1* 1:1 1:1*", "1:2 1:2* 1:1* 1:1"})
    std::cout << "  h(" << w << ") = " << to_string(h.star_moment(parse_word(w))) << "\n";

  const auto fam = limit_family(h.f());
  for (std::size_t n = 0; n < fam.specs.size(); ++n)
    std::cout << "  limit of sqrt(N_F) u" << fam.positions[n].first << fam.positions[n].second << ": "
              << to_string(fam.specs[n].kind) << " with variances (" << to_string(fam.specs[n].left_var) << ", "
              << to_string(fam.specs[n].right_var) << ")\n";
  std::cout << "  factor type: " << classify_factor_type(h.f().q()).to_string() << "\n";
}
