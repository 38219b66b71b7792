// Two free generalized circular elements on a truncated Fock space, checked
// against the non-crossing pairing formula.

#include <iostream>
#include <memory>

#include "ofplus/ofplus.hpp"

int main() {
  using namespace ofplus;

  auto space = std::make_shared<const TruncatedFock>(4, 3);
  // x1 with variances (1/4, 1) on letters 1,2; x2 with (4, 1) on letters 3,4.
  auto x1 = gc_operator<Exact>(space, Exact(Rational(1, 2)), Exact(1), 1, 2);
  auto x2 = gc_operator<Exact>(space, Exact(2), Exact(1), 3, 4);
  auto x1s = x1.adjoint();
  auto x2s = x2.adjoint();

  std::vector<GCSpec<Exact>> fam{{"x1", VariableKind::generalized_circular, Exact(Rational(1, 4)), Exact(1)},
                                 {"x2", VariableKind::generalized_circular, Exact(4), Exact(1)}};
  std::vector<const FockOperator<Exact>*> chain{&x1s, &x2s, &x2, &x1, &x1s, &x1};
  std::cout << "Fock:  " << to_string(vacuum_expectation(chain)) << "\n";
  std::cout << "NC2:   "
            << to_string(free_moment(fam, {1, 2, 2, 1, 1, 1},
                                     {Sign::star, Sign::star, Sign::plain, Sign::plain, Sign::star, Sign::plain}))
            << "\n";
}
