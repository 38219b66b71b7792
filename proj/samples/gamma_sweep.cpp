// Freeness error of length-4 words as gamma -> 0 at fixed N = 4.

#include <iostream>

#include "ofplus/ofplus.hpp"

int main() {
  using namespace ofplus;

  GammaSweep sweep{1, {Rational(1, 2)}, {Rational(1, 2), Rational(1, 4), Rational(1, 8), Rational(1, 16)}};
  std::vector<StarWord> words{parse_word("1:1 1:1* 1:1 1:1*"), parse_word("1:1 1:2* 1:2 1:1*"),
                              parse_word("1:1* 1:1 1:2 1:2*")};
  auto rows = convergence_table<Exact>(sweep, words);
  write_csv(std::cout, rows);
  std::cout << "rows above 4x their first value: " << unbounded_rows(rows).size() << "\n";
}
