#include "pathmarket/simplex.hpp"

#include <cmath>
#include <cstddef>

#include "pathmarket/error.hpp"

namespace pm {

namespace {
constexpr double kPivotTol = 1e-9;
constexpr long kMaxPivots = 500000;
}  // namespace

SimplexResult simplex_max(const SimplexProblem& prob) {
  const int m = static_cast<int>(prob.rows.size());
  const int n = static_cast<int>(prob.obj.size());
  for (double b : prob.rhs) {
    if (b < 0) fail(ErrorKind::numerical, "simplex requires nonnegative rhs");
  }

  // Tableau: m rows of n structural + m slack columns + rhs.
  std::vector<std::vector<double>> tab(m, std::vector<double>(n + m + 1, 0.0));
  for (int i = 0; i < m; ++i) {
    for (int j = 0; j < n; ++j) tab[i][j] = prob.rows[i][j];
    tab[i][n + i] = 1.0;
    tab[i][n + m] = prob.rhs[i];
  }
  std::vector<double> z(n + m, 0.0);  // reduced costs; positive means improving
  for (int j = 0; j < n; ++j) z[j] = prob.obj[j];
  double objective = 0.0;
  std::vector<int> basis(m);
  for (int i = 0; i < m; ++i) basis[i] = n + i;

  for (long pivots = 0;; ++pivots) {
    if (pivots > kMaxPivots) fail(ErrorKind::numerical, "simplex pivot limit exceeded");
    int enter = -1;
    for (int j = 0; j < n + m; ++j) {
      if (z[j] > kPivotTol) {
        enter = j;
        break;
      }
    }
    if (enter == -1) break;

    int leave = -1;
    double best = 0.0;
    for (int i = 0; i < m; ++i) {
      if (tab[i][enter] > kPivotTol) {
        double ratio = tab[i][n + m] / tab[i][enter];
        if (leave == -1 || ratio < best - kPivotTol ||
            (ratio < best + kPivotTol && basis[i] < basis[leave])) {
          leave = i;
          best = ratio;
        }
      }
    }
    if (leave == -1) fail(ErrorKind::numerical, "simplex detected an unbounded direction");

    double piv = tab[leave][enter];
    for (int j = 0; j <= n + m; ++j) tab[leave][j] /= piv;
    for (int i = 0; i < m; ++i) {
      if (i == leave) continue;
      double f = tab[i][enter];
      if (f == 0.0) continue;
      for (int j = 0; j <= n + m; ++j) tab[i][j] -= f * tab[leave][j];
    }
    double zf = z[enter];
    for (int j = 0; j < n + m; ++j) z[j] -= zf * tab[leave][j];
    objective += zf * tab[leave][n + m];
    basis[leave] = enter;
  }

  SimplexResult res;
  res.objective = objective;
  res.x.assign(n, 0.0);
  for (int i = 0; i < m; ++i) {
    if (basis[i] < n) res.x[basis[i]] = std::max(0.0, tab[i][n + m]);
  }
  return res;
}

}  // namespace pm
