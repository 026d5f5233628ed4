#pragma once

#include <algorithm>
#include <vector>

#include "ltispec/detail/scalar.hpp"
#include "ltispec/lti.hpp"

namespace ltispec::detail {

// det(sI - J) = s^n + c_1 s^{n-1} + ... + c_n via M_k = J M_{k-1} + c_{k-1} I,
// c_k = -Tr(J M_k)/k.
template <class T>
std::vector<T> faddeev_leverrier_t(const Mat<T>& J) {
  const Eigen::Index n = J.rows();
  std::vector<T> c(n + 1);
  c[0] = T(1);
  Mat<T> M = Mat<T>::Zero(n, n);
  for (Eigen::Index k = 1; k <= n; ++k) {
    Mat<T> next = J * M;
    for (Eigen::Index d = 0; d < n; ++d) next(d, d) += c[k - 1];
    M.swap(next);
    c[k] = -(J * M).trace() / T(k);
  }
  return c;
}

// Routh table on a descending coefficient list. The variable is first rescaled
// so the roots have unit geometric-mean magnitude; the a_1 pivot is measured
// against its neighbours a_0 and a_2, later pivots against the magnitude of the
// two products they are formed from.
template <class T>
RouthReport routh_t(std::vector<T> a, double rel_tol) {
  using std::abs;
  using std::pow;
  RouthReport rep;
  const std::size_t n = a.size() - 1;
  if (n > 0 && a[n] != T(0) && a[0] != T(0)) {
    const T rho = pow(T(abs(a[n] / a[0])), T(1) / T(static_cast<double>(n)));
    T f(1);
    for (std::size_t k = 1; k <= n; ++k) {
      f /= rho;
      a[k] *= f;
    }
  }
  const std::size_t w = n / 2 + 1;
  std::vector<T> prev(w, T(0)), cur(w, T(0));
  for (std::size_t k = 0; k <= n; k += 2) prev[k / 2] = a[k];
  for (std::size_t k = 1; k <= n; k += 2) cur[k / 2] = a[k];
  double min_rel = 1e300;
  bool marginal = false, unstable = false;
  auto visit = [&](const T& pivot, const T& scale) {
    rep.pivots.push_back(static_cast<double>(pivot));
    const double rel = scale > T(0) ? static_cast<double>(T(abs(pivot) / scale)) : 0.0;
    min_rel = std::min(min_rel, rel);
    if (rel <= rel_tol) marginal = true;
    else if (pivot < T(0)) unstable = true;
  };
  visit(prev[0], T(abs(prev[0])));
  if (n > 0) visit(cur[0], std::max({T(abs(a[0])), T(abs(a[1])), n > 1 ? T(abs(a[2])) : T(0)}));
  for (std::size_t k = 2; k <= n; ++k) {
    if (marginal) break;  // degenerate row, stop building
    std::vector<T> next(w, T(0));
    for (std::size_t c = 0; c + 1 < w; ++c)
      next[c] = (cur[0] * prev[c + 1] - prev[0] * cur[c + 1]) / cur[0];
    const T terms = (abs(cur[0] * prev[1]) + abs(prev[0] * cur[1])) / abs(cur[0]);
    visit(next[0], terms);
    prev.swap(cur);
    cur.swap(next);
  }
  rep.min_relative_pivot = min_rel;
  rep.verdict = unstable ? Stability::Unstable : marginal ? Stability::Marginal : Stability::Stable;
  return rep;
}

}  // namespace ltispec::detail
