#pragma once

#include <vector>

namespace pm {

struct SimplexProblem {
  // maximize obj . x  subject to  rows . x <= rhs, x >= 0; every rhs >= 0.
  std::vector<std::vector<double>> rows;
  std::vector<double> rhs;
  std::vector<double> obj;
};

struct SimplexResult {
  double objective = 0;
  std::vector<double> x;
};

// Dense tableau simplex with Bland's anti-cycling pivot rule: entering column
// is the lowest improving index, leaving row the lowest basic index among the
// ratio-test minimizers. Deterministic for a fixed problem. Throws
// ErrorKind::numerical on unbounded problems or iteration blowup.
SimplexResult simplex_max(const SimplexProblem& prob);

}  // namespace pm
