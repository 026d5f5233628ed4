#pragma once

#include <Eigen/Core>

#include "ltispec/lti.hpp"
#include "ltispec/poly.hpp"
#include "ltispec/precision.hpp"

// Indices in this header are 0-based (row i of the paper's J_{i+1,...}).

namespace ltispec {

struct SubmatrixSet {
  Eigen::MatrixXd O;       // (n-1) x (n-1)
  Eigen::MatrixXd Oprime;  // O without row/column beta; empty when i == j
  int i = 0, j = 0;
  int beta = 0;            // min(i, j)
  int sign_exchanges = 0;  // adjacent row/column exchanges performed
};

/// Remove row i and column j of J, then cycle the displaced column (i > j)
/// or row (i < j) into position min(i, j) so that every entry that carried
/// +iw in J + iwI is back on the diagonal. det(O) = (-1)^sign_exchanges det(N_ij).
SubmatrixSet build_O(const Eigen::MatrixXd& J, int i, int j);

/// Pair of real coefficient lists produced by the complex-valued canonical functions.
struct CanonPair {
  EvenPolynomial first;
  EvenPolynomial second;
};

/// |det(A + iwI)|^2.
EvenPolynomial canon_d(const Eigen::MatrixXd& A, Precision p = Precision::Auto);
/// 2w conj(det(A + iwI)) det(B + iwI) = w g1(w) + i g2(w); B is one size smaller.
CanonPair canon_g(const Eigen::MatrixXd& A, const Eigen::MatrixXd& B, Precision p = Precision::Auto);
/// 2 conj(det(A + iwI)) det(B + iwI) = h1(w) + i w h2(w).
CanonPair canon_h(const Eigen::MatrixXd& A, const Eigen::MatrixXd& B, Precision p = Precision::Auto);
/// |det(A + iwI - iw e_b e_b^T)|^2.
EvenPolynomial canon_f(const Eigen::MatrixXd& A, int beta, Precision p = Precision::Auto);
/// 2 det(A + iwI) conj(det(B + iwI - iw e_b e_b^T)) = s1(w) + i w s2(w).
CanonPair canon_s(const Eigen::MatrixXd& A, const Eigen::MatrixXd& B, int beta,
                  Precision p = Precision::Auto);
/// 2 det(A + iwI - iw e_b1 e_b1^T) conj(det(B + iwI - iw e_b2 e_b2^T)) = t1(w) + i w t2(w).
CanonPair canon_t(const Eigen::MatrixXd& A, const Eigen::MatrixXd& B, int beta1, int beta2,
                  Precision p = Precision::Auto);

/// Numerator of S_ij(w) = (p(w) + i w pp(w)) / Q(w).
struct ElementCoeffs {
  EvenPolynomial p;
  EvenPolynomial pp;
  int i = 0, j = 0;
};

struct ElementOptions {
  Precision precision = Precision::Auto;
};

ElementCoeffs auto_coeffs(const LtiSystem& sys, int i, const ElementOptions& opts = {});
ElementCoeffs cross_coeffs(const LtiSystem& sys, int i, int j, const ElementOptions& opts = {});
/// auto_coeffs for i == j, cross_coeffs otherwise.
ElementCoeffs element_coeffs(const LtiSystem& sys, int i, int j, const ElementOptions& opts = {});

/// Several entries sharing one cache of submatrix determinants.
std::vector<ElementCoeffs> element_coeffs_batch(const LtiSystem& sys,
                                                const std::vector<std::pair<int, int>>& pairs,
                                                const ElementOptions& opts = {});

/// Printed trace formulas for the auto-spectrum of variable 0 in n = 2, 3, 4
/// with diagonal L. With equal_noise (n = 3 only, all l_k^2 sigma_k^2 equal)
/// the det(A^T A) simplification is used instead.
ElementCoeffs closed_form_auto(const LtiSystem& sys, bool equal_noise = false);

/// Simultaneous row/column exchange of J and row exchange of L bringing
/// variable i to position 0.
LtiSystem permute_to_front(const LtiSystem& sys, int i);

/// auto_coeffs(permute_to_front(sys, i), 0).
ElementCoeffs auto_coeffs_general_index(const LtiSystem& sys, int i, const ElementOptions& opts = {});

}  // namespace ltispec
