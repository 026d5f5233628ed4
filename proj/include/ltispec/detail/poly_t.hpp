#pragma once

#include <vector>

#include "ltispec/detail/scalar.hpp"

namespace ltispec::detail {

// Tr(A^l) for l = 1..l_max from the powers A^1..A^m, m = ceil(l_max/2),
// using Tr(A^a A^b) = sum(A^a .* (A^b)^T).
template <class T>
std::vector<T> plain_traces(const Mat<T>& A, int l_max) {
  std::vector<T> tr(l_max > 0 ? l_max : 0);
  if (l_max <= 0) return tr;
  const int m = (l_max + 1) / 2;
  std::vector<Mat<T>> pw;
  pw.reserve(m);
  pw.push_back(A);
  for (int k = 1; k < m; ++k) pw.push_back(pw.back() * A);
  for (int l = 1; l <= l_max; ++l) {
    if (l <= m) {
      tr[l - 1] = pw[l - 1].trace();
    } else {
      const Mat<T>& X = pw[m - 1];
      const Mat<T>& Y = pw[l - m - 1];
      T s(0);
      for (Eigen::Index c = 0; c < X.cols(); ++c)
        for (Eigen::Index r = 0; r < X.rows(); ++r) s += X(r, c) * Y(c, r);
      tr[l - 1] = s;
    }
  }
  return tr;
}

template <class T>
std::vector<T> trace_powers_t(const Mat<T>& A, int k_max, bool squared) {
  if (!squared) return plain_traces<T>(A, k_max);
  return plain_traces<T>(Mat<T>(A * A), k_max);
}

// Leading principal minors B_0..B_k of the Hessenberg matrix built from
// r = (r^1, ..., r^k): H(a,b) = -r^{b-a+1} for b >= a, H(a+1,a) = -a.
template <class T>
std::vector<T> bell_prefix(const std::vector<T>& r, int k) {
  std::vector<T> f(k + 1);
  f[0] = T(1);
  for (int m = 1; m <= k; ++m) {
    T acc(0);
    T prod(1);  // product of subdiagonal entries H(l+1,l), l = row..m-1
    for (int row = m; row >= 1; --row) {
      if (row < m) prod *= T(-row);
      const T h = -r[m - row];
      const T term = h * prod * f[row - 1];
      if ((m - row) % 2 == 0)
        acc += term;
      else
        acc -= term;
    }
    f[m] = acc;
  }
  return f;
}

// Elementary symmetric values e_0..e_k of the eigenvalues behind the power
// sums r: e_j = (-1)^j / j! * B_j.
template <class T>
std::vector<T> elementary_from_powers(const std::vector<T>& r, int k) {
  std::vector<T> B = bell_prefix<T>(r, k);
  std::vector<T> e(k + 1);
  T fact(1);
  for (int j = 0; j <= k; ++j) {
    if (j > 0) fact *= T(j);
    e[j] = (j % 2 == 0 ? B[j] : T(-B[j])) / fact;
  }
  return e;
}

// q_a = e_{n-a}(eigenvalues of J^2), a = 0..n.
template <class T>
std::vector<T> denominator_coeffs_t(const Mat<T>& J) {
  const int n = static_cast<int>(J.rows());
  std::vector<T> e = elementary_from_powers<T>(trace_powers_t<T>(J, n, true), n);
  std::vector<T> q(n + 1);
  for (int a = 0; a <= n; ++a) q[a] = e[n - a];
  return q;
}

template <class T>
T horner_even(const std::vector<T>& c, const T& w) {
  const T w2 = w * w;
  T acc(0);
  for (auto it = c.rbegin(); it != c.rend(); ++it) acc = acc * w2 + *it;
  return acc;
}

}  // namespace ltispec::detail
