#include "resonax/lsolve.hpp"

#include <cmath>
#include <numbers>

#include "resonax/errors.hpp"

namespace resonax {

Problem::Problem(ModelSpec model, MomentumGrid grid, SolverOptions options)
    : model_(std::move(model)), grid_(std::move(grid)), options_(options) {
  const int m = model_.channel_count();
  const int n = grid_.size();
  grid_kernel_.resize(m * n, m * n);
  for (int a = 0; a < m; ++a) {
    for (int b = a; b < m; ++b) {
      for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
          const double v = kernel_value(model_, a, b, grid_.nodes[i], grid_.nodes[j]).real();
          grid_kernel_(a * n + i, b * n + j) = v;
          grid_kernel_(b * n + j, a * n + i) = v;
        }
      }
    }
  }
}

cplx Problem::a_factor(cplx z, int alpha) const {
  return a_sign_ * cplx(0.0, -std::numbers::pi) * physical_momentum(z, model_.threshold(alpha));
}

Eigen::VectorXcd Problem::a_factors(cplx z) const {
  Eigen::VectorXcd out(channel_count());
  for (int a = 0; a < channel_count(); ++a) out(a) = a_factor(z, a);
  return out;
}

LsSystem::LsSystem(const Problem& problem, cplx z) : problem_(&problem), z_(z) {
  const ModelSpec& model = problem.model();
  const int m = model.channel_count();
  if (z.imag() == 0.0 && z.real() >= model.threshold(0)) {
    throw OnCutError("real energy on the continuous spectrum; add a rim offset");
  }

  rules_.reserve(m);
  for (int a = 0; a < m; ++a) {
    rules_.push_back(cauchy_rule(problem.grid(), z, model.threshold(a),
                                 problem.options().subtraction_tol));
    const int n_grid = problem.grid().size();
    for (int i = 0; i < rules_[a].size(); ++i) {
      channel_.push_back(a);
      grid_index_.push_back(i < n_grid ? i : -1);
      node_.push_back(rules_[a].nodes[i]);
      weight_.push_back(rules_[a].weights[i]);
    }
  }

  const int n = unknowns();
  matrix_.resize(n, n);
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < n; ++i) {
      matrix_(i, j) = kernel_between(i, j) * weight_[j];
    }
    matrix_(j, j) += 1.0;
  }
  if (!matrix_.allFinite()) throw SingularKernel("non-finite entry in I + K");
  lu_.compute(matrix_);
}

double LsSystem::condition_estimate() const {
  const double rc = lu_.rcond();
  return rc > 0.0 ? 1.0 / rc : std::numeric_limits<double>::infinity();
}

cplx LsSystem::log_determinant() const {
  // The permutation contributes its sign; the diagonal of U carries the rest.
  const auto& lu = lu_.matrixLU();
  cplx sum = 0.0;
  for (Eigen::Index i = 0; i < lu.rows(); ++i) sum += std::log(lu(i, i));
  if (lu_.permutationP().determinant() < 0) sum += cplx(0.0, std::numbers::pi);
  return sum;
}

Eigen::MatrixXcd LsSystem::solve(const Eigen::MatrixXcd& rhs) const {
  const double cond = condition_estimate();
  if (!(cond <= problem_->options().cond_limit)) {
    throw LinearSolveFailure("condition estimate " + std::to_string(cond) +
                             " exceeds limit; energy is close to a bound state");
  }
  return lu_.solve(rhs);
}

cplx LsSystem::kernel_between(int i, int j) const {
  const int gi = grid_index_[i], gj = grid_index_[j];
  if (gi >= 0 && gj >= 0) return problem_->grid_kernel(channel_[i], gi, channel_[j], gj);
  return problem_->kernel(channel_[i], channel_[j], node_[i], node_[j]);
}

Eigen::VectorXcd LsSystem::kernel_row(int alpha, cplx k) const {
  Eigen::VectorXcd row(unknowns());
  for (int i = 0; i < unknowns(); ++i) row(i) = problem_->kernel(alpha, channel_[i], k, node_[i]);
  return row;
}

Eigen::VectorXcd LsSystem::kernel_column(int beta, cplx kp) const {
  Eigen::VectorXcd col(unknowns());
  for (int i = 0; i < unknowns(); ++i) col(i) = problem_->kernel(channel_[i], beta, node_[i], kp);
  return col;
}

Eigen::MatrixXcd assemble_system(const Problem& problem, cplx z) {
  return LsSystem(problem, z).matrix();
}

cplx fredholm_determinant(const Problem& problem, cplx z) {
  return std::exp(LsSystem(problem, z).log_determinant());
}

TMatrixSolution::TMatrixSolution(std::shared_ptr<const LsSystem> system,
                                 std::vector<External> externals, Eigen::MatrixXcd columns)
    : system_(std::move(system)), externals_(std::move(externals)), columns_(std::move(columns)) {
  const int m = system_->problem().channel_count();
  onshell_.resize(m, m);
  for (int a = 0; a < m; ++a) {
    for (int b = 0; b < m; ++b) onshell_(a, b) = nystrom_extend(*this, a, onshell_momentum(a), b);
  }
}

TMatrixSolution solve_halfshell(const Problem& problem, cplx z,
                                const std::vector<External>& externals) {
  return solve_halfshell(std::make_shared<const LsSystem>(problem, z), externals);
}

TMatrixSolution solve_halfshell(std::shared_ptr<const LsSystem> system,
                                const std::vector<External>& externals) {
  const int m = system->problem().channel_count();

  std::vector<External> all;
  all.reserve(m + externals.size());
  for (int b = 0; b < m; ++b) all.push_back({b, system->rule(b).onshell});
  for (const External& e : externals) {
    if (e.channel < 0 || e.channel >= m) throw InvalidParameter("external channel out of range");
    all.push_back(e);
  }

  Eigen::MatrixXcd rhs(system->unknowns(), static_cast<Eigen::Index>(all.size()));
  for (std::size_t c = 0; c < all.size(); ++c) {
    rhs.col(static_cast<Eigen::Index>(c)) = system->kernel_column(all[c].channel, all[c].momentum);
  }
  Eigen::MatrixXcd columns = system->solve(rhs);
  return TMatrixSolution(std::move(system), std::move(all), std::move(columns));
}

cplx nystrom_extend(const TMatrixSolution& sol, int alpha, cplx k, int column) {
  const LsSystem& sys = sol.system();
  const External& ext = sol.externals().at(column);
  const cplx direct = sys.problem().kernel(alpha, ext.channel, k, ext.momentum);
  const Eigen::VectorXcd row = sys.kernel_row(alpha, k);
  cplx sum = 0.0;
  for (int i = 0; i < sys.unknowns(); ++i) sum += row(i) * sys.weight(i) * sol.columns()(i, column);
  return direct - sum;
}

Eigen::MatrixXcd node_tmatrix(const LsSystem& system) {
  const int n = system.unknowns();
  Eigen::MatrixXcd v(n, n);
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < n; ++i) v(i, j) = system.kernel_between(i, j);
  }
  return system.solve(v);
}

}  // namespace resonax
