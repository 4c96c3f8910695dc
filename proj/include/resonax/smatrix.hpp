#pragma once

#include <vector>

#include <Eigen/Dense>

#include "resonax/lsolve.hpp"
#include "resonax/model.hpp"

namespace resonax {

/// -pi i (sqrt(z - threshold))^(dimension - 2) on the physical sheet.
cplx a_factor(cplx z, double threshold, int dimension = 3);

/// On-shell scattering matrices at one physical-sheet energy. Stored
/// unsymmetrised: s_ab = delta_ab + t_ab(q_a, q_b) A_b.
struct SMatrixSet {
  cplx z{};
  SheetIndex sheet;
  Eigen::MatrixXcd onshell_t;
  Eigen::VectorXcd a_factors;
  Eigen::MatrixXcd full;                  // I + t A
  Eigen::MatrixXcd truncated;             // I + L~ t L A
  Eigen::MatrixXcd transposed_truncated;  // I + L A t L~
};

SMatrixSet build_smatrix(const TMatrixSolution& sol, const SheetIndex& sheet);

/// log det of a square complex matrix via LU with partial pivoting.
cplx log_determinant(const Eigen::MatrixXcd& a);

/// Principal submatrix over the given rows/columns.
Eigen::MatrixXcd principal_submatrix(const Eigen::MatrixXcd& a, const std::vector<int>& idx);

/// det s_ell, from the nontrivial principal block of the truncated matrix.
cplx det_truncated(const SMatrixSet& set);

/// Fresh solve plus assembly.
cplx det_truncated(const Problem& problem, cplx z, const SheetIndex& sheet);

/// Channels open at real energy E (threshold < E).
std::vector<int> open_channels(const ModelSpec& model, double energy);

/// delta_ab - pi i sqrt(q_a q_b) t_ab restricted to `channels`. Unitary on the
/// rim when `channels` are the open ones.
Eigen::MatrixXcd symmetrized_smatrix(const TMatrixSolution& sol, const std::vector<int>& channels);

/// Frobenius norm of S S^* - I.
double unitarity_defect(const Eigen::MatrixXcd& s);

/// Open-channel symmetrised S at E + i eps and E + i eps/2.
struct RimEvaluation {
  double energy = 0.0;
  double eps = 0.0;
  std::vector<int> open;
  Eigen::MatrixXcd s;       // at eps
  Eigen::MatrixXcd s_half;  // at eps / 2
  Eigen::MatrixXcd s_limit;  // 2 s_half - s, the eps -> 0 extrapolation
  double richardson_gap = 0.0;  // max |s - s_half|
};

RimEvaluation rim_smatrix(const Problem& problem, double energy, double eps = 1e-6);

}  // namespace resonax
