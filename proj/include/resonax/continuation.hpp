#pragma once

#include <functional>
#include <vector>

#include <Eigen/Dense>

#include "resonax/lsolve.hpp"
#include "resonax/model.hpp"
#include "resonax/smatrix.hpp"

namespace resonax {

/// Radial holomorphic function of a complex momentum.
using RadialFunction = std::function<cplx(cplx)>;

enum class ContinuedKind { TKernel, SMatrix, ResolventForm };

/// A value on sheet `sheet` at the complex position z, expressed through
/// physical-sheet quantities. Scalars are stored as 1x1 matrices.
struct ContinuedValue {
  SheetIndex sheet;
  cplx z{};
  ContinuedKind kind = ContinuedKind::TKernel;
  Eigen::MatrixXcd value;
};

/// Phi(z) = int_0^inf q^2 f(q) / (threshold + q^2 - z) dq on the physical sheet.
cplx cauchy_radial(const MomentumGrid& grid, const RadialFunction& f, double threshold, cplx z);

/// Phi(z | Pi_ell) = Phi(z) - ell pi i q f(q), q = sqrt(z - threshold) on the
/// physical branch.
cplx continue_cauchy_radial(const MomentumGrid& grid, const RadialFunction& f, double threshold,
                            int ell, cplx z);

/// s_ell^{-1} (or the inverse of the transposed truncation) with the trivial
/// rows and columns bypassed. Throws TruncatedSMatrixSingular when the
/// smallest singular value of the active block is below `singular_tol`.
Eigen::MatrixXcd truncated_inverse(const Eigen::MatrixXcd& s_ell, const SheetIndex& sheet,
                                   double singular_tol = 1e-10);

/// t_ab(k, k', z | Pi_ell) from the left-handed representation
///   t - t J^+ L A s_ell^{-1} L~ J t.
cplx continued_tmatrix(const Problem& problem, cplx z, const SheetIndex& sheet, int alpha,
                       int beta, cplx k, cplx kp);

/// Same value from the transposed representation
///   t - t J^+ L~ [s^+_ell]^{-1} A L J t.
cplx continued_tmatrix_transposed(const Problem& problem, cplx z, const SheetIndex& sheet,
                                  int alpha, int beta, cplx k, cplx kp);

/// s(z | Pi_ell) = E [I + t A e - t L A s_ell^{-1} t A e] E with the on-shell
/// block t, momentum inversion E and branch signs e.
Eigen::MatrixXcd continued_smatrix(const Problem& problem, cplx z, const SheetIndex& sheet);
Eigen::MatrixXcd continued_smatrix(const SMatrixSet& set, int partial_wave);

/// s^+(z | Pi_ell) = E [I + e A t - e A t [s^+_ell]^{-1} A L t] E.
Eigen::MatrixXcd continued_smatrix_transposed(const Problem& problem, cplx z,
                                              const SheetIndex& sheet);
Eigen::MatrixXcd continued_smatrix_transposed(const SMatrixSet& set, int partial_wave);

/// <phi, g(z | Pi_ell) psi> for channel vectors of radial form factors, with
/// the bilinear pairing <f, h> = sum_a int q^2 dq f_a(q) h_a(q).
cplx continued_resolvent_form(const Problem& problem, cplx z, const SheetIndex& sheet,
                              const std::vector<RadialFunction>& phi,
                              const std::vector<RadialFunction>& psi);

/// Same value through the transposed truncated matrix.
cplx continued_resolvent_form_transposed(const Problem& problem, cplx z, const SheetIndex& sheet,
                                         const std::vector<RadialFunction>& phi,
                                         const std::vector<RadialFunction>& psi);

}  // namespace resonax
