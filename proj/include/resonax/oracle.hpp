#pragma once

#include <vector>

#include <Eigen/Dense>

#include "resonax/model.hpp"
#include "resonax/roots.hpp"

namespace resonax {

/// Closed forms for the rank-one Yamaguchi coupling
///   v_ab(k, k') = lambda_ab g_a(k) g_b(k'),  g_a(k) = 1 / (k^2 + beta_a^2).
/// With q = sqrt(z - threshold) on the physical branch,
///   Phi(z)       = int_0^inf q^2 g(q)^2 / (threshold + q^2 - z) dq
///                = pi / (4 beta (beta - i q)^2),
/// and the continuation across the cut replaces -i q by +i q.
class SeparableOracle {
 public:
  /// Throws InvalidParameter unless the model is Yamaguchi.
  explicit SeparableOracle(const ModelSpec& model);

  int channel_count() const { return static_cast<int>(threshold_.size()); }

  cplx form_factor(int gamma, cplx k) const;
  /// Throws BranchPointError at the threshold.
  cplx phi(int gamma, cplx z, int ell = 0) const;
  /// tau(z | Pi_ell) = (I + lambda Phi_ell)^{-1} lambda.
  Eigen::MatrixXcd tau(cplx z, const SheetIndex& sheet) const;
  cplx t(int alpha, int beta, cplx k, cplx kp, cplx z, const SheetIndex& sheet) const;

  /// A_a = -pi i q_a on the physical sheet.
  Eigen::VectorXcd a_factors(cplx z) const;
  /// s(z | Pi_ell)_ab = delta_ab + g_a(e_a q_a) tau_ell g_b(e_b q_b) A_b e_b.
  Eigen::MatrixXcd smatrix(cplx z, const SheetIndex& sheet) const;
  /// det s_ell(z) = det(I + lambda Phi_ell) / det(I + lambda Phi).
  cplx det_truncated(cplx z, const SheetIndex& sheet) const;
  /// det(I + lambda Phi_ell(z)); zeros are the poles on Pi_ell.
  cplx resonance_condition(cplx z, const SheetIndex& sheet) const;

  /// <phi, g(z | Pi_ell) psi> for phi_a = c_a g_a and psi_a = d_a g_a.
  cplx resolvent_form(cplx z, const SheetIndex& sheet, const Eigen::VectorXcd& c,
                      const Eigen::VectorXcd& d) const;

 private:
  Eigen::MatrixXd lambda_;
  Eigen::VectorXd beta_;
  std::vector<double> threshold_;
};

/// Zeros of resonance_condition inside `region`, seeded from a coarse grid
/// and refined with Muller. Sorted by real then imaginary part.
std::vector<cplx> oracle_resonance_roots(const SeparableOracle& oracle, const SheetIndex& sheet,
                                         const SearchRegion& region);

}  // namespace resonax
