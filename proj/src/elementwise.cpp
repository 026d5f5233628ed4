#include "ltispec/elementwise.hpp"

#include <cmath>

#include "ltispec/detail/elementwise_t.hpp"
#include "ltispec/errors.hpp"

namespace ltispec {

namespace {

void check_square(const Eigen::MatrixXd& A, const char* what) {
  if (A.rows() != A.cols()) throw DimensionError(std::string(what) + ": matrix is not square");
}

void check_index(int idx, Eigen::Index n, const char* what) {
  if (idx < 0 || idx >= n)
    throw ParseError(std::string(what) + ": index " + std::to_string(idx) + " out of range");
}

template <class T>
EvenPolynomial poly(const detail::Coeffs<T>& c) {
  return EvenPolynomial(detail::to_double(c));
}

template <class T>
CanonPair pair(const detail::Pair<T>& p) {
  return {poly<T>(p.first), poly<T>(p.second)};
}

Precision tier(Precision p, Eigen::Index k) { return resolve_precision(p, static_cast<int>(k) + 1); }

template <class T>
detail::DetData<T> data(const Eigen::MatrixXd& A) {
  return detail::det_data<T>(detail::cast_matrix<T>(A));
}

template <class T>
detail::DetData<T> data_without(const Eigen::MatrixXd& A, int beta) {
  return detail::det_data<T>(detail::remove_row_col<T>(detail::cast_matrix<T>(A), beta, beta));
}

}  // namespace

SubmatrixSet build_O(const Eigen::MatrixXd& J, int i, int j) {
  check_square(J, "build_O");
  check_index(i, J.rows(), "build_O");
  check_index(j, J.rows(), "build_O");
  const auto ob = detail::build_O_t<double>(J, i, j);
  SubmatrixSet out;
  out.O = ob.O;
  out.Oprime = ob.Op;
  out.i = i;
  out.j = j;
  out.beta = ob.beta;
  out.sign_exchanges = ob.gamma;
  return out;
}

EvenPolynomial canon_d(const Eigen::MatrixXd& A, Precision p) {
  check_square(A, "canon_d");
  return detail::with_scalar(tier(p, A.rows()), [&]<class T>(T) { return poly<T>(data<T>(A).d); });
}

CanonPair canon_g(const Eigen::MatrixXd& A, const Eigen::MatrixXd& B, Precision p) {
  check_square(A, "canon_g");
  check_square(B, "canon_g");
  if (A.rows() < 1 || B.rows() != A.rows() - 1)
    throw DimensionError("canon_g: B must be one size smaller than A");
  return detail::with_scalar(tier(p, A.rows()), [&]<class T>(T) {
    return pair<T>(detail::canon_g_t<T>(data<T>(A), data<T>(B)));
  });
}

CanonPair canon_h(const Eigen::MatrixXd& A, const Eigen::MatrixXd& B, Precision p) {
  check_square(A, "canon_h");
  check_square(B, "canon_h");
  if (B.rows() != A.rows()) throw DimensionError("canon_h: A and B must have the same size");
  return detail::with_scalar(tier(p, A.rows()), [&]<class T>(T) {
    return pair<T>(detail::canon_h_t<T>(data<T>(A), data<T>(B)));
  });
}

EvenPolynomial canon_f(const Eigen::MatrixXd& A, int beta, Precision p) {
  check_square(A, "canon_f");
  check_index(beta, A.rows(), "canon_f");
  return detail::with_scalar(tier(p, A.rows()), [&]<class T>(T) {
    return poly<T>(detail::canon_f_t<T>(data<T>(A), data_without<T>(A, beta)));
  });
}

CanonPair canon_s(const Eigen::MatrixXd& A, const Eigen::MatrixXd& B, int beta, Precision p) {
  check_square(A, "canon_s");
  check_square(B, "canon_s");
  if (B.rows() != A.rows()) throw DimensionError("canon_s: A and B must have the same size");
  check_index(beta, B.rows(), "canon_s");
  return detail::with_scalar(tier(p, A.rows()), [&]<class T>(T) {
    return pair<T>(detail::canon_s_t<T>(data<T>(A), data<T>(B), data_without<T>(B, beta)));
  });
}

CanonPair canon_t(const Eigen::MatrixXd& A, const Eigen::MatrixXd& B, int beta1, int beta2,
                  Precision p) {
  check_square(A, "canon_t");
  check_square(B, "canon_t");
  if (B.rows() != A.rows()) throw DimensionError("canon_t: A and B must have the same size");
  check_index(beta1, A.rows(), "canon_t");
  check_index(beta2, B.rows(), "canon_t");
  return detail::with_scalar(tier(p, A.rows()), [&]<class T>(T) {
    return pair<T>(detail::canon_t_t<T>(data<T>(A), data<T>(B), data_without<T>(A, beta1),
                                        data_without<T>(B, beta2)));
  });
}

std::vector<ElementCoeffs> element_coeffs_batch(const LtiSystem& sys,
                                                const std::vector<std::pair<int, int>>& pairs,
                                                const ElementOptions& opts) {
  sys.validate();
  const int n = sys.n();
  for (const auto& [i, j] : pairs) {
    check_index(i, n, "element_coeffs");
    check_index(j, n, "element_coeffs");
  }
  const Eigen::MatrixXd W = build_covariance(sys).C;
  return detail::with_scalar(resolve_precision(opts.precision, n), [&]<class T>(T) {
    detail::Assembler<T> as(detail::cast_matrix<T>(sys.J), detail::cast_matrix<T>(W));
    std::vector<ElementCoeffs> out;
    for (const auto& [i, j] : pairs) {
      ElementCoeffs ec;
      ec.i = i;
      ec.j = j;
      if (i == j) {
        ec.p = poly<T>(as.auto_p(i));
        ec.pp = EvenPolynomial(std::vector<double>(std::max(n - 1, 1), 0.0));
      } else {
        const auto z = as.cross(i, j);
        ec.p = poly<T>(z.first);
        ec.pp = poly<T>(z.second);
      }
      out.push_back(std::move(ec));
    }
    return out;
  });
}

ElementCoeffs auto_coeffs(const LtiSystem& sys, int i, const ElementOptions& opts) {
  return element_coeffs_batch(sys, {{i, i}}, opts).front();
}

ElementCoeffs cross_coeffs(const LtiSystem& sys, int i, int j, const ElementOptions& opts) {
  if (i == j) throw ParseError("cross_coeffs: i and j must differ");
  return element_coeffs_batch(sys, {{i, j}}, opts).front();
}

ElementCoeffs element_coeffs(const LtiSystem& sys, int i, int j, const ElementOptions& opts) {
  return element_coeffs_batch(sys, {{i, j}}, opts).front();
}

namespace {

template <class T>
struct Tr {
  // Tr(M^k) for k = 1..kmax
  explicit Tr(const detail::Mat<T>& M, int kmax = 6) : v(detail::plain_traces<T>(M, kmax)) {}
  T operator()(int k) const { return v[k - 1]; }
  std::vector<T> v;
};

template <class T>
std::vector<T> closed_form_t(const detail::Mat<T>& J, const std::vector<T>& w) {
  const int n = static_cast<int>(J.rows());
  std::vector<T> p(n, T(0));
  const Tr<T> o11(detail::build_O_t<T>(J, 0, 0).O);
  std::vector<Tr<T>> o, op;
  for (int j = 1; j < n; ++j) {
    const auto ob = detail::build_O_t<T>(J, j, 0);
    o.emplace_back(ob.O);
    op.emplace_back(ob.Op.rows() > 0 ? ob.Op : detail::Mat<T>::Zero(1, 1));
  }
  if (n == 2) {
    p[0] = w[0] * o11(2) + w[1] * o[0](2);
    p[1] = w[0];
  } else if (n == 3) {
    T p0 = w[0] * (o11(2) * o11(2) - o11(4));
    T p1 = w[0] * o11(2);
    for (int j = 1; j < 3; ++j) {
      const Tr<T>& O = o[j - 1];
      const Tr<T>& Q = op[j - 1];
      p0 += w[j] * (Q(2) * Q(2) - Q(4) + O(2) * O(2) - O(4));
      p1 += w[j] * (T(-2) * Q(1) * O(1) + Q(2) + O(1) * O(1));
    }
    p[0] = p0 / T(2);
    p[1] = p1;
    p[2] = w[0];
  } else {
    auto cube = [](const Tr<T>& M) { return M(2) * M(2) * M(2) - T(3) * M(2) * M(4) + T(2) * M(6); };
    T p0 = w[0] * cube(o11);
    T p1 = T(3) * w[0] * (o11(2) * o11(2) - o11(4));
    T p2 = w[0] * o11(2);
    for (int j = 1; j < 4; ++j) {
      const Tr<T>& O = o[j - 1];
      const Tr<T>& Q = op[j - 1];
      p0 += w[j] * (cube(Q) + cube(O));
      p1 += w[j] * (T(-3) * (Q(1) * Q(1) - Q(2)) * (O(1) * O(1) - O(2)) + T(3) * Q(2) * Q(2) +
                    T(2) * Q(1) * (O(1) * O(1) * O(1) - T(3) * O(1) * O(2) + T(2) * O(3)) -
                    T(3) * Q(4) + T(3) * O(2) * O(2) - T(3) * O(4));
      p2 += w[j] * (Q(1) * Q(1) + O(1) * O(1) - T(2) * Q(1) * O(1));
    }
    p[0] = p0 / T(6);
    p[1] = p1 / T(6);
    p[2] = p2;
    p[3] = w[0];
  }
  return p;
}

template <class T>
std::vector<T> equal_noise_t(const detail::Mat<T>& J, const T& s2) {
  const detail::Mat<T> A = J.rightCols(2);
  const detail::Mat<T> A1 = A.topRows(1);
  const detail::Mat<T> A2 = A.bottomRows(2);
  const T det = (A.transpose() * A).determinant();
  const T tr = (A1.transpose() * A1 + A2 * A2).trace();
  return {s2 * det, s2 * tr, s2};
}

}  // namespace

ElementCoeffs closed_form_auto(const LtiSystem& sys, bool equal_noise) {
  sys.validate();
  const int n = sys.n();
  if (n < 2 || n > 4) throw DimensionError("closed_form_auto: n must be 2, 3 or 4");
  if (sys.m() != n) throw DimensionError("closed_form_auto: L must be square");
  const Eigen::MatrixXd Loff = sys.L - Eigen::MatrixXd(sys.L.diagonal().asDiagonal());
  if (Loff.cwiseAbs().maxCoeff() != 0.0) throw DimensionError("closed_form_auto: L must be diagonal");
  std::vector<double> w(n);
  for (int k = 0; k < n; ++k) w[k] = sys.L(k, k) * sys.L(k, k) * sys.D(k);
  if (equal_noise) {
    if (n != 3) throw DimensionError("closed_form_auto: equal-noise form exists for n = 3 only");
    for (int k = 1; k < n; ++k) {
      if (std::abs(w[k] - w[0]) > 1e-12 * std::abs(w[0]))
        throw DimensionError("closed_form_auto: noise levels differ");
    }
  }
  ElementCoeffs ec;
  ec.p = detail::with_scalar(Precision::Quad, [&]<class T>(T) {
    const detail::Mat<T> Jt = detail::cast_matrix<T>(sys.J);
    if (equal_noise) return poly<T>(equal_noise_t<T>(Jt, T(w[0])));
    std::vector<T> wt(w.begin(), w.end());
    return poly<T>(closed_form_t<T>(Jt, wt));
  });
  ec.pp = EvenPolynomial(std::vector<double>(n - 1, 0.0));
  return ec;
}

LtiSystem permute_to_front(const LtiSystem& sys, int i) {
  sys.validate();
  check_index(i, sys.n(), "permute_to_front");
  const int n = sys.n();
  Eigen::VectorXi order(n);
  order(0) = i;
  for (int k = 0, pos = 1; k < n; ++k)
    if (k != i) order(pos++) = k;
  Eigen::MatrixXd J(n, n), L(n, sys.m());
  for (int r = 0; r < n; ++r) {
    L.row(r) = sys.L.row(order(r));
    for (int c = 0; c < n; ++c) J(r, c) = sys.J(order(r), order(c));
  }
  std::vector<std::string> labels;
  if (!sys.labels.empty())
    for (int r = 0; r < n; ++r) labels.push_back(sys.labels[order(r)]);
  return LtiSystem(J, L, sys.D, labels);
}

ElementCoeffs auto_coeffs_general_index(const LtiSystem& sys, int i, const ElementOptions& opts) {
  ElementCoeffs ec = auto_coeffs(permute_to_front(sys, i), 0, opts);
  ec.i = ec.j = i;
  return ec;
}

}  // namespace ltispec
