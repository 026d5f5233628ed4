#pragma once

#include <algorithm>
#include <cstdlib>
#include <map>
#include <utility>
#include <vector>

#include "ltispec/detail/poly_t.hpp"
#include "ltispec/detail/scalar.hpp"

namespace ltispec::detail {

template <class T>
using Coeffs = std::vector<T>;

template <class T>
Mat<T> remove_row_col(const Mat<T>& A, int r, int c) {
  const Eigen::Index n = A.rows(), m = A.cols();
  Mat<T> out(n - 1, m - 1);
  for (Eigen::Index a = 0, ra = 0; a < n; ++a) {
    if (a == r) continue;
    for (Eigen::Index b = 0, cb = 0; b < m; ++b) {
      if (b == c) continue;
      out(ra, cb++) = A(a, b);
    }
    ++ra;
  }
  return out;
}

template <class T>
struct OBuild {
  Mat<T> O, Op;
  int beta = 0;
  int gamma = 0;
};

template <class T>
OBuild<T> build_O_t(const Mat<T>& J, int i, int j) {
  OBuild<T> out;
  Mat<T> N = remove_row_col<T>(J, i, j);
  out.beta = std::min(i, j);
  if (i > j) {
    for (int c = i - 1; c > j; --c) N.col(c).swap(N.col(c - 1));
  } else if (i < j) {
    for (int r = j - 1; r > i; --r) N.row(r).swap(N.row(r - 1));
  }
  out.gamma = i == j ? 0 : std::abs(i - j) - 1;
  out.O = std::move(N);
  if (i != j) out.Op = remove_row_col<T>(out.O, out.beta, out.beta);
  return out;
}

// Bell-polynomial data of one square matrix A (k x k):
// c[j] is the coefficient of (iw)^j in det(A + iwI), j = 0..k;
// d[a] is the coefficient of w^{2a} in |det(A + iwI)|^2, a = 0..k.
template <class T>
struct DetData {
  Coeffs<T> c, d;
};

template <class T>
DetData<T> det_data(const Mat<T>& A) {
  const int k = static_cast<int>(A.rows());
  DetData<T> out;
  if (k == 0) {
    out.c = {T(1)};
    out.d = {T(1)};
    return out;
  }
  const std::vector<T> tr = plain_traces<T>(A, 2 * k);
  const std::vector<T> e = elementary_from_powers<T>(std::vector<T>(tr.begin(), tr.begin() + k), k);
  std::vector<T> r2(k);
  for (int l = 1; l <= k; ++l) r2[l - 1] = tr[2 * l - 1];
  const std::vector<T> e2 = elementary_from_powers<T>(r2, k);
  out.c.resize(k + 1);
  out.d.resize(k + 1);
  for (int j = 0; j <= k; ++j) {
    out.c[j] = e[k - j];
    out.d[j] = e2[k - j];
  }
  return out;
}

// R[s] = sum_{j+l=s} (-1)^j a_j b_l: conj(D_a) D_b = sum_s R[s] i^s w^s.
template <class T>
Coeffs<T> conj_product(const Coeffs<T>& a, const Coeffs<T>& b) {
  Coeffs<T> R(a.size() + b.size() - 1, T(0));
  for (std::size_t j = 0; j < a.size(); ++j) {
    const T aj = j % 2 == 0 ? a[j] : T(-a[j]);
    for (std::size_t l = 0; l < b.size(); ++l) R[j + l] += aj * b[l];
  }
  return R;
}

template <class T>
void add_scaled(Coeffs<T>& dst, const Coeffs<T>& src, const T& s, std::size_t shift = 0) {
  if (dst.size() < src.size() + shift) dst.resize(src.size() + shift, T(0));
  for (std::size_t a = 0; a < src.size(); ++a) dst[a + shift] += s * src[a];
}

template <class T>
struct Pair {
  Coeffs<T> first, second;
};

// h(A,B) = 2 conj(D_A) D_B = h1 + i w h2; A and B of equal size k.
template <class T>
Pair<T> canon_h_t(const DetData<T>& A, const DetData<T>& B) {
  const Coeffs<T> R = conj_product<T>(A.c, B.c);
  const std::size_t k = A.c.size() - 1;
  Pair<T> out;
  out.first.assign(k + 1, T(0));
  out.second.assign(k, T(0));
  for (std::size_t a = 0; a <= k; ++a) {
    const T v = T(2) * R[2 * a];
    out.first[a] = a % 2 == 0 ? v : T(-v);
  }
  for (std::size_t a = 0; a < k; ++a) {
    const T v = T(2) * R[2 * a + 1];
    out.second[a] = a % 2 == 0 ? v : T(-v);
  }
  return out;
}

// g(A,B) = 2w conj(D_A) D_B = w g1 + i g2; A of size k, B of size k-1.
template <class T>
Pair<T> canon_g_t(const DetData<T>& A, const DetData<T>& B) {
  const Coeffs<T> R = conj_product<T>(A.c, B.c);
  const std::size_t k = A.c.size() - 1;
  Pair<T> out;
  out.first.assign(k, T(0));
  out.second.assign(k + 1, T(0));
  for (std::size_t a = 0; a < k; ++a) {
    const T v = T(2) * R[2 * a];
    out.first[a] = a % 2 == 0 ? v : T(-v);
  }
  for (std::size_t a = 1; a <= k; ++a) {
    const T v = T(2) * R[2 * a - 1];
    out.second[a] = (a - 1) % 2 == 0 ? v : T(-v);
  }
  return out;
}

// f = d(A) + w^2 d(B) + g2(A,B), B = A without row/column beta.
template <class T>
Coeffs<T> canon_f_t(const DetData<T>& A, const DetData<T>& B) {
  Coeffs<T> out = A.d;
  add_scaled<T>(out, B.d, T(1), 1);
  add_scaled<T>(out, canon_g_t<T>(A, B).second, T(1));
  out.resize(A.d.size());
  return out;
}

// s1 = h1(A,B) + g2(A,C), s2 = -h2(A,B) + g1(A,C), C = B without beta.
template <class T>
Pair<T> canon_s_t(const DetData<T>& A, const DetData<T>& B, const DetData<T>& C) {
  const Pair<T> h = canon_h_t<T>(A, B);
  const Pair<T> g = canon_g_t<T>(A, C);
  Pair<T> out;
  out.first = h.first;
  add_scaled<T>(out.first, g.second, T(1));
  out.second.assign(h.second.size(), T(0));
  add_scaled<T>(out.second, h.second, T(-1));
  add_scaled<T>(out.second, g.first, T(1));
  return out;
}

// t1 = h1(A,B) + w^2 h1(C,D) + g2(B,C) + g2(A,D),
// t2 = -h2(A,B) - w^2 h2(C,D) - g1(B,C) + g1(A,D).
template <class T>
Pair<T> canon_t_t(const DetData<T>& A, const DetData<T>& B, const DetData<T>& C,
                  const DetData<T>& D) {
  const Pair<T> hab = canon_h_t<T>(A, B);
  const Pair<T> hcd = canon_h_t<T>(C, D);
  const Pair<T> gbc = canon_g_t<T>(B, C);
  const Pair<T> gad = canon_g_t<T>(A, D);
  Pair<T> out;
  out.first = hab.first;
  add_scaled<T>(out.first, hcd.first, T(1), 1);
  add_scaled<T>(out.first, gbc.second, T(1));
  add_scaled<T>(out.first, gad.second, T(1));
  out.second.assign(hab.second.size(), T(0));
  add_scaled<T>(out.second, hab.second, T(-1));
  add_scaled<T>(out.second, hcd.second, T(-1), 1);
  add_scaled<T>(out.second, gbc.first, T(-1));
  add_scaled<T>(out.second, gad.first, T(1));
  out.first.resize(hab.first.size());
  out.second.resize(hab.second.size());
  return out;
}

// Auto/cross numerators from the adjugate expansion, with noise channels
// folded into W = L D L^T. Determinant data of every O_ki / O'_ki is cached.
template <class T>
class Assembler {
 public:
  Assembler(Mat<T> J, Mat<T> W) : J_(std::move(J)), W_(std::move(W)), n_(static_cast<int>(J_.rows())) {}

  Coeffs<T> auto_p(int i) {
    Coeffs<T> p(n_, T(0));
    add_scaled<T>(p, O(i, i).d, W_(i, i));
    for (int k = 0; k < n_; ++k) {
      if (k == i || W_(k, k) == T(0)) continue;
      add_scaled<T>(p, canon_f_t<T>(O(k, i), Op(k, i)), W_(k, k));
    }
    for (int q = 0; q < n_; ++q) {
      if (q == i || W_(i, q) == T(0)) continue;
      add_scaled<T>(p, canon_s_t<T>(O(i, i), O(q, i), Op(q, i)).first, T(-W_(i, q)));
    }
    for (int k = 0; k < n_; ++k) {
      for (int q = k + 1; q < n_; ++q) {
        if (k == i || q == i || W_(k, q) == T(0)) continue;
        add_scaled<T>(p, canon_t_t<T>(O(k, i), O(q, i), Op(k, i), Op(q, i)).first, W_(k, q));
      }
    }
    p.resize(n_);
    return p;
  }

  Pair<T> cross(int i, int j) {
    Pair<T> z;
    z.first.assign(n_, T(0));
    z.second.assign(n_ - 1, T(0));
    const T half(0.5);
    if (W_(i, j) != T(0)) {
      const Pair<T> h = canon_h_t<T>(O(i, i), O(j, j));
      add_scaled<T>(z.first, h.first, half * W_(i, j));
      add_scaled<T>(z.second, h.second, T(-half * W_(i, j)));
    }
    for (int q = 0; q < n_; ++q) {
      if (q == j || W_(i, q) == T(0)) continue;
      const Pair<T> s = canon_s_t<T>(O(i, i), O(q, j), Op(q, j));
      add_scaled<T>(z.first, s.first, T(-half * W_(i, q)));
      add_scaled<T>(z.second, s.second, T(-half * W_(i, q)));
    }
    for (int k = 0; k < n_; ++k) {
      if (k == i || W_(k, j) == T(0)) continue;
      const Pair<T> s = canon_s_t<T>(O(j, j), O(k, i), Op(k, i));
      add_scaled<T>(z.first, s.first, T(-half * W_(k, j)));
      add_scaled<T>(z.second, s.second, half * W_(k, j));
    }
    for (int k = 0; k < n_; ++k) {
      if (k == i) continue;
      for (int q = 0; q < n_; ++q) {
        if (q == j || W_(k, q) == T(0)) continue;
        const Pair<T> t = canon_t_t<T>(O(k, i), O(q, j), Op(k, i), Op(q, j));
        add_scaled<T>(z.first, t.first, half * W_(k, q));
        add_scaled<T>(z.second, t.second, half * W_(k, q));
      }
    }
    z.first.resize(n_);
    z.second.resize(n_ - 1);
    return z;
  }

 private:
  const DetData<T>& O(int k, int i) { return entry(k, i).first; }
  const DetData<T>& Op(int k, int i) { return entry(k, i).second; }

  const std::pair<DetData<T>, DetData<T>>& entry(int k, int i) {
    const int key = k * n_ + i;
    auto it = cache_.find(key);
    if (it != cache_.end()) return it->second;
    const OBuild<T> ob = build_O_t<T>(J_, k, i);
    std::pair<DetData<T>, DetData<T>> v{det_data<T>(ob.O), k == i ? DetData<T>{} : det_data<T>(ob.Op)};
    return cache_.emplace(key, std::move(v)).first->second;
  }

  Mat<T> J_, W_;
  int n_;
  std::map<int, std::pair<DetData<T>, DetData<T>>> cache_;
};

}  // namespace ltispec::detail
