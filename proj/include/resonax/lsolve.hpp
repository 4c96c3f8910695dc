#pragma once

#include <memory>
#include <vector>

#include <Eigen/Dense>

#include "resonax/model.hpp"
#include "resonax/quadrature.hpp"

namespace resonax {

struct SolverOptions {
  double cond_limit = 1e12;
  double subtraction_tol = 1e-14;
};

/// Model plus discretisation. Caches the kernel on the real grid, which does
/// not depend on the energy. Immutable apart from the fault-injection hook.
class Problem {
 public:
  Problem(ModelSpec model, MomentumGrid grid, SolverOptions options = {});

  const ModelSpec& model() const { return model_; }
  const MomentumGrid& grid() const { return grid_; }
  const SolverOptions& options() const { return options_; }
  int channel_count() const { return model_.channel_count(); }

  /// v_ab(q_i, q_j) on real grid nodes.
  double grid_kernel(int alpha, int i, int beta, int j) const {
    const int n = grid_.size();
    return grid_kernel_(alpha * n + i, beta * n + j);
  }
  cplx kernel(int alpha, int beta, cplx k, cplx kp) const {
    return kernel_value(model_, alpha, beta, k, kp);
  }

  /// A_alpha(z) = -pi i sqrt(z - threshold_alpha) times the configured sign.
  cplx a_factor(cplx z, int alpha) const;
  Eigen::VectorXcd a_factors(cplx z) const;

  /// Test fixtures flip this to -1 to check that the identity suite notices.
  void set_a_factor_sign(double sign) { a_sign_ = sign; }
  double a_factor_sign() const { return a_sign_; }

 private:
  ModelSpec model_;
  MomentumGrid grid_;
  SolverOptions options_;
  Eigen::MatrixXd grid_kernel_;
  double a_sign_ = 1.0;
};

/// The discretised coupled Lippmann-Schwinger operator I + K at one energy,
/// with unknowns t_c(p_i, .) over the per-channel Cauchy rules, plus its LU
/// factorisation.
class LsSystem {
 public:
  /// Throws OnCutError for real z on [threshold_1, inf) and SingularKernel for
  /// a non-finite assembly.
  LsSystem(const Problem& problem, cplx z);

  const Problem& problem() const { return *problem_; }
  cplx z() const { return z_; }
  int unknowns() const { return static_cast<int>(node_.size()); }
  int channel_of(int row) const { return channel_[row]; }
  cplx node(int row) const { return node_[row]; }
  cplx weight(int row) const { return weight_[row]; }
  const CauchyRule& rule(int alpha) const { return rules_.at(alpha); }

  const Eigen::MatrixXcd& matrix() const { return matrix_; }
  /// 1 / rcond of the LU factorisation.
  double condition_estimate() const;
  /// log det (I + K), accumulated from the LU diagonal.
  cplx log_determinant() const;
  /// Throws LinearSolveFailure above the configured condition limit.
  Eigen::MatrixXcd solve(const Eigen::MatrixXcd& rhs) const;

  /// v_{c(i) c(j)}(p_i, p_j).
  cplx kernel_between(int i, int j) const;
  /// v_{alpha, c(i)}(k, p_i) over all unknowns i.
  Eigen::VectorXcd kernel_row(int alpha, cplx k) const;
  /// v_{c(i), beta}(p_i, kp) over all unknowns i.
  Eigen::VectorXcd kernel_column(int beta, cplx kp) const;

 private:
  const Problem* problem_;
  cplx z_;
  std::vector<CauchyRule> rules_;
  std::vector<int> channel_;
  std::vector<int> grid_index_;  // -1 for subtraction nodes
  std::vector<cplx> node_;
  std::vector<cplx> weight_;
  Eigen::MatrixXcd matrix_;
  Eigen::PartialPivLU<Eigen::MatrixXcd> lu_;
};

/// I + K at energy z.
Eigen::MatrixXcd assemble_system(const Problem& problem, cplx z);

/// det (I + K(z)); vanishes at bound states on the physical sheet.
cplx fredholm_determinant(const Problem& problem, cplx z);

struct External {
  int channel = 0;  // beta, 0-based
  cplx momentum{};  // kappa_b
};

/// Half-shell columns t_{c beta}(p_i, kappa_b, z) for a list of external
/// momenta. The first channel_count() externals are always the on-shell
/// momenta q_beta(z); requested externals follow in order.
class TMatrixSolution {
 public:
  TMatrixSolution(std::shared_ptr<const LsSystem> system, std::vector<External> externals,
                  Eigen::MatrixXcd columns);

  cplx z() const { return system_->z(); }
  const Problem& problem() const { return system_->problem(); }
  const LsSystem& system() const { return *system_; }
  std::shared_ptr<const LsSystem> system_ptr() const { return system_; }
  const std::vector<External>& externals() const { return externals_; }
  const Eigen::MatrixXcd& columns() const { return columns_; }
  /// t_ab(q_a(z), q_b(z), z).
  const Eigen::MatrixXcd& onshell() const { return onshell_; }
  cplx onshell_momentum(int alpha) const { return system_->rule(alpha).onshell; }
  /// Index of the first requested external in columns().
  int first_requested() const { return system_->problem().channel_count(); }

 private:
  std::shared_ptr<const LsSystem> system_;
  std::vector<External> externals_;
  Eigen::MatrixXcd columns_;
  Eigen::MatrixXcd onshell_;
};

TMatrixSolution solve_halfshell(const Problem& problem, cplx z,
                                const std::vector<External>& externals = {});
/// Same, reusing an already factorised system.
TMatrixSolution solve_halfshell(std::shared_ptr<const LsSystem> system,
                                const std::vector<External>& externals = {});

/// t_{alpha beta_b}(k, kappa_b, z) by substituting the stored column back
/// into the integral equation.
cplx nystrom_extend(const TMatrixSolution& sol, int alpha, cplx k, int column);

/// Off-shell t(p_i, p_j, z) between all unknowns of the system.
Eigen::MatrixXcd node_tmatrix(const LsSystem& system);

}  // namespace resonax
