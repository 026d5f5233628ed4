#pragma once

#include <vector>

#include "ltispec/detail/scalar.hpp"

namespace ltispec::detail {

template <class T>
struct RecursionT {
  std::vector<Mat<T>> P;   // P_0 .. P_{n-1}
  std::vector<Mat<T>> Pp;  // P'_0 .. P'_{n-2}
  std::vector<T> q;        // q_0 .. q_n
};

template <class T>
T trace_product(const Mat<T>& A, const Mat<T>& B) {  // Tr(A B)
  T s(0);
  for (Eigen::Index c = 0; c < A.cols(); ++c)
    for (Eigen::Index r = 0; r < A.rows(); ++r) s += A(r, c) * B(c, r);
  return s;
}

// One downward sweep. With q empty the sweep also produces q (C must be I);
// otherwise q is consumed. P'_{a-1} = J P_a - P_a J^T - J P'_a J^T and
// P_{a-1} = q_a C + P'_{a-1} J^T - J P'_{a-1} - J P_a J^T, using
// P J^T = (J P)^T and P' J^T = -(J P')^T.
template <class T>
RecursionT<T> sweep(const Mat<T>& J, const Mat<T>& C, std::vector<T> q) {
  const Eigen::Index n = J.rows();
  const bool twin = q.empty();
  RecursionT<T> out;
  out.P.resize(n);
  out.Pp.resize(n > 1 ? n - 1 : 0);
  if (twin) {
    q.assign(n + 1, T(0));
    q[n] = T(1);
  }
  const Mat<T> JtJ = J.transpose() * J;
  Mat<T> P = Mat<T>::Zero(n, n);    // P_a
  Mat<T> JPp = Mat<T>::Zero(n, n);  // J P'_a
  for (Eigen::Index a = n; a >= 1; --a) {
    const Mat<T> JP = J * P;
    Mat<T> Pp_next = JP - JP.transpose() - JPp * J.transpose();  // P'_{a-1}
    if (twin && a < n) {
      // q_a = [Tr(J Q'_{a-1}) + Tr(J Q_a J^T)] / (n - a)
      q[a] = (trace_product<T>(J, Pp_next) + trace_product<T>(P, JtJ)) / T(n - a);
    }
    const Mat<T> JPp_next = J * Pp_next;
    Mat<T> P_next = -JPp_next.transpose() - JPp_next - JP * J.transpose();
    P_next += q[a] * C;
    if (a <= n - 1) out.Pp[a - 1] = Pp_next;
    out.P[a - 1] = P_next;
    P = std::move(P_next);
    JPp = JPp_next;
  }
  if (twin) q[0] = trace_product<T>(P, JtJ) / T(n);
  out.q = std::move(q);
  return out;
}

template <class T>
RecursionT<T> solve_recursive_t(const Mat<T>& J, const Mat<T>& C) {
  const Mat<T> I = Mat<T>::Identity(J.rows(), J.cols());
  RecursionT<T> twin = sweep<T>(J, I, {});
  return sweep<T>(J, C, twin.q);
}

}  // namespace ltispec::detail

namespace ltispec::detail {

template <class T>
struct ResidualT {
  T r1, r2, scale1, scale2;
};

template <class T>
ResidualT<T> residuals_t(const Mat<T>& J, const Mat<T>& C, const Mat<T>& P0, const Mat<T>& Pp0,
                         const T& q0) {
  using std::abs;
  const Mat<T> JP = J * P0;
  const Mat<T> R1 = JP - JP.transpose() - J * Pp0 * J.transpose();
  const Mat<T> R2 = q0 * C - JP * J.transpose();
  const T nJ = J.norm();
  return {R1.norm(), R2.norm(), T(2) * nJ * P0.norm() + nJ * nJ * Pp0.norm(),
          T(abs(q0)) * C.norm() + nJ * nJ * P0.norm()};
}

}  // namespace ltispec::detail
