#include "resonax/smatrix.hpp"

#include <cmath>
#include <numbers>

#include "resonax/errors.hpp"

namespace resonax {

cplx a_factor(cplx z, double threshold, int dimension) {
  const cplx q = physical_momentum(z, threshold);
  return cplx(0.0, -std::numbers::pi) * std::pow(q, dimension - 2);
}

SMatrixSet build_smatrix(const TMatrixSolution& sol, const SheetIndex& sheet) {
  const int m = sol.problem().channel_count();
  if (sheet.size() != m) throw InvalidParameter("sheet index length differs from channel count");

  SMatrixSet set;
  set.z = sol.z();
  set.sheet = sheet;
  set.onshell_t = sol.onshell();
  set.a_factors = sol.problem().a_factors(sol.z());

  const Eigen::MatrixXcd id = Eigen::MatrixXcd::Identity(m, m);
  set.full = id;
  set.truncated = id;
  set.transposed_truncated = id;
  for (int a = 0; a < m; ++a) {
    for (int b = 0; b < m; ++b) {
      const cplx t = set.onshell_t(a, b);
      set.full(a, b) += t * set.a_factors(b);
      set.truncated(a, b) +=
          double(sheet.ltilde_factor(a) * sheet.l_factor(b)) * t * set.a_factors(b);
      set.transposed_truncated(a, b) +=
          double(sheet.l_factor(a) * sheet.ltilde_factor(b)) * set.a_factors(a) * t;
    }
  }
  return set;
}

cplx log_determinant(const Eigen::MatrixXcd& a) {
  if (a.rows() == 0) return 0.0;
  Eigen::PartialPivLU<Eigen::MatrixXcd> lu(a);
  const auto& u = lu.matrixLU();
  cplx sum = 0.0;
  for (Eigen::Index i = 0; i < u.rows(); ++i) sum += std::log(u(i, i));
  if (lu.permutationP().determinant() < 0) sum += cplx(0.0, std::numbers::pi);
  return sum;
}

Eigen::MatrixXcd principal_submatrix(const Eigen::MatrixXcd& a, const std::vector<int>& idx) {
  const auto k = static_cast<Eigen::Index>(idx.size());
  Eigen::MatrixXcd out(k, k);
  for (Eigen::Index i = 0; i < k; ++i) {
    for (Eigen::Index j = 0; j < k; ++j) out(i, j) = a(idx[i], idx[j]);
  }
  return out;
}

cplx det_truncated(const SMatrixSet& set) {
  const auto active = set.sheet.active_channels();
  if (active.empty()) return 1.0;
  return std::exp(log_determinant(principal_submatrix(set.truncated, active)));
}

cplx det_truncated(const Problem& problem, cplx z, const SheetIndex& sheet) {
  if (sheet.is_physical()) {
    if (sheet.size() != problem.channel_count()) {
      throw InvalidParameter("sheet index length differs from channel count");
    }
    return 1.0;
  }
  return det_truncated(build_smatrix(solve_halfshell(problem, z), sheet));
}

std::vector<int> open_channels(const ModelSpec& model, double energy) {
  std::vector<int> out;
  for (int a = 0; a < model.channel_count(); ++a) {
    if (model.threshold(a) < energy) out.push_back(a);
  }
  return out;
}

Eigen::MatrixXcd symmetrized_smatrix(const TMatrixSolution& sol, const std::vector<int>& channels) {
  const auto k = static_cast<Eigen::Index>(channels.size());
  Eigen::MatrixXcd s = Eigen::MatrixXcd::Identity(k, k);
  for (Eigen::Index i = 0; i < k; ++i) {
    const cplx qa = std::sqrt(sol.onshell_momentum(channels[i]));
    for (Eigen::Index j = 0; j < k; ++j) {
      const cplx qb = std::sqrt(sol.onshell_momentum(channels[j]));
      s(i, j) += sol.problem().a_factor_sign() * cplx(0.0, -std::numbers::pi) * qa * qb *
                 sol.onshell()(channels[i], channels[j]);
    }
  }
  return s;
}

double unitarity_defect(const Eigen::MatrixXcd& s) {
  const auto k = s.rows();
  return (s * s.adjoint() - Eigen::MatrixXcd::Identity(k, k)).norm();
}

RimEvaluation rim_smatrix(const Problem& problem, double energy, double eps) {
  RimEvaluation rim;
  rim.energy = energy;
  rim.eps = eps;
  rim.open = open_channels(problem.model(), energy);
  if (rim.open.empty()) throw InvalidParameter("no open channel below the lowest threshold");
  rim.s = symmetrized_smatrix(solve_halfshell(problem, cplx(energy, eps)), rim.open);
  rim.s_half = symmetrized_smatrix(solve_halfshell(problem, cplx(energy, 0.5 * eps)), rim.open);
  rim.s_limit = 2.0 * rim.s_half - rim.s;
  rim.richardson_gap = (rim.s - rim.s_half).cwiseAbs().maxCoeff();
  return rim;
}

}  // namespace resonax
