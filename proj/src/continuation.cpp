#include "resonax/continuation.hpp"

#include <numbers>

#include "resonax/errors.hpp"

namespace resonax {

cplx cauchy_radial(const MomentumGrid& grid, const RadialFunction& f, double threshold, cplx z) {
  const CauchyRule rule = cauchy_rule(grid, z, threshold);
  cplx sum = 0.0;
  for (int j = 0; j < rule.size(); ++j) sum += rule.weights[j] * f(rule.nodes[j]);
  return sum;
}

cplx continue_cauchy_radial(const MomentumGrid& grid, const RadialFunction& f, double threshold,
                            int ell, cplx z) {
  if (ell != 0 && ell != 1) throw InvalidParameter("sheet bit must be 0 or 1");
  const cplx phi = cauchy_radial(grid, f, threshold, z);
  if (ell == 0) return phi;
  const cplx q = physical_momentum(z, threshold);
  return phi - cplx(0.0, std::numbers::pi) * q * f(q);
}

Eigen::MatrixXcd truncated_inverse(const Eigen::MatrixXcd& s_ell, const SheetIndex& sheet,
                                   double singular_tol) {
  const auto m = s_ell.rows();
  Eigen::MatrixXcd inv = Eigen::MatrixXcd::Identity(m, m);
  const auto active = sheet.active_channels();
  if (active.empty()) return inv;
  const Eigen::MatrixXcd block = principal_submatrix(s_ell, active);
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(block);
  const double smallest = svd.singularValues().minCoeff();
  if (!(smallest >= singular_tol)) {
    throw TruncatedSMatrixSingular("smallest singular value " + std::to_string(smallest) +
                                   " on sheet (" + sheet.to_string() + ")");
  }
  const Eigen::MatrixXcd block_inv = block.partialPivLu().inverse();
  for (std::size_t i = 0; i < active.size(); ++i) {
    for (std::size_t j = 0; j < active.size(); ++j) {
      inv(active[i], active[j]) = block_inv(static_cast<Eigen::Index>(i),
                                            static_cast<Eigen::Index>(j));
    }
  }
  return inv;
}

namespace {

struct HalfShellPieces {
  cplx t_physical;
  Eigen::VectorXcd left;   // t_{alpha gamma}(k, q_gamma)
  Eigen::VectorXcd right;  // t_{delta beta}(q_delta, k')
  SMatrixSet set;
};

HalfShellPieces half_shell_pieces(const Problem& problem, cplx z, const SheetIndex& sheet,
                                  int alpha, int beta, cplx k, cplx kp) {
  const int m = problem.channel_count();
  if (sheet.size() != m) throw InvalidParameter("sheet index length differs from channel count");
  const TMatrixSolution sol = solve_halfshell(problem, z, {External{beta, kp}});
  const int col = sol.first_requested();
  HalfShellPieces p;
  p.t_physical = nystrom_extend(sol, alpha, k, col);
  p.left.resize(m);
  p.right.resize(m);
  for (int g = 0; g < m; ++g) {
    p.left(g) = nystrom_extend(sol, alpha, k, g);
    p.right(g) = nystrom_extend(sol, g, sol.onshell_momentum(g), col);
  }
  p.set = build_smatrix(sol, sheet);
  return p;
}

}  // namespace

cplx continued_tmatrix(const Problem& problem, cplx z, const SheetIndex& sheet, int alpha,
                       int beta, cplx k, cplx kp) {
  const HalfShellPieces p = half_shell_pieces(problem, z, sheet, alpha, beta, k, kp);
  if (sheet.is_physical()) return p.t_physical;
  const Eigen::MatrixXcd inv = truncated_inverse(p.set.truncated, sheet);
  cplx correction = 0.0;
  for (int g : sheet.active_channels()) {
    for (int d : sheet.active_channels()) {
      correction += p.left(g) * double(sheet.l_factor(g)) * p.set.a_factors(g) * inv(g, d) *
                    double(sheet.ltilde_factor(d)) * p.right(d);
    }
  }
  return p.t_physical - correction;
}

cplx continued_tmatrix_transposed(const Problem& problem, cplx z, const SheetIndex& sheet,
                                  int alpha, int beta, cplx k, cplx kp) {
  const HalfShellPieces p = half_shell_pieces(problem, z, sheet, alpha, beta, k, kp);
  if (sheet.is_physical()) return p.t_physical;
  const Eigen::MatrixXcd inv = truncated_inverse(p.set.transposed_truncated, sheet);
  cplx correction = 0.0;
  for (int g : sheet.active_channels()) {
    for (int d : sheet.active_channels()) {
      correction += p.left(g) * double(sheet.ltilde_factor(g)) * inv(g, d) *
                    p.set.a_factors(d) * double(sheet.l_factor(d)) * p.right(d);
    }
  }
  return p.t_physical - correction;
}

namespace {

Eigen::MatrixXcd inversion_conjugate(const Eigen::MatrixXcd& x, const SheetIndex& sheet,
                                     int partial_wave) {
  Eigen::MatrixXcd out = x;
  for (Eigen::Index a = 0; a < x.rows(); ++a) {
    for (Eigen::Index b = 0; b < x.cols(); ++b) {
      out(a, b) *= double(sheet.inversion_factor(static_cast<int>(a), partial_wave) *
                          sheet.inversion_factor(static_cast<int>(b), partial_wave));
    }
  }
  return out;
}

}  // namespace

Eigen::MatrixXcd continued_smatrix(const SMatrixSet& set, int partial_wave) {
  const SheetIndex& sheet = set.sheet;
  const auto m = set.onshell_t.rows();
  const Eigen::MatrixXcd& t = set.onshell_t;
  const Eigen::MatrixXcd a = set.a_factors.asDiagonal();
  const Eigen::MatrixXcd e = sheet.e().cast<cplx>();
  const Eigen::MatrixXcd l = sheet.L().cast<cplx>();
  const Eigen::MatrixXcd inv = truncated_inverse(set.truncated, sheet);
  const Eigen::MatrixXcd inner = Eigen::MatrixXcd::Identity(m, m) + t * a * e -
                                 t * l * a * inv * t * a * e;
  return inversion_conjugate(inner, sheet, partial_wave);
}

Eigen::MatrixXcd continued_smatrix(const Problem& problem, cplx z, const SheetIndex& sheet) {
  return continued_smatrix(build_smatrix(solve_halfshell(problem, z), sheet),
                           problem.model().partial_wave());
}

Eigen::MatrixXcd continued_smatrix_transposed(const SMatrixSet& set, int partial_wave) {
  const SheetIndex& sheet = set.sheet;
  const auto m = set.onshell_t.rows();
  const Eigen::MatrixXcd& t = set.onshell_t;
  const Eigen::MatrixXcd a = set.a_factors.asDiagonal();
  const Eigen::MatrixXcd e = sheet.e().cast<cplx>();
  const Eigen::MatrixXcd l = sheet.L().cast<cplx>();
  const Eigen::MatrixXcd inv = truncated_inverse(set.transposed_truncated, sheet);
  const Eigen::MatrixXcd inner = Eigen::MatrixXcd::Identity(m, m) + e * a * t -
                                 e * a * t * inv * a * l * t;
  return inversion_conjugate(inner, sheet, partial_wave);
}

Eigen::MatrixXcd continued_smatrix_transposed(const Problem& problem, cplx z,
                                              const SheetIndex& sheet) {
  return continued_smatrix_transposed(build_smatrix(solve_halfshell(problem, z), sheet),
                                      problem.model().partial_wave());
}

namespace {

struct ResolventPieces {
  cplx physical;           // <phi, g psi>
  Eigen::VectorXcd left;   // J (I - g v)^T phi
  Eigen::VectorXcd right;  // J (I - v g) psi
  SMatrixSet set;
};

ResolventPieces resolvent_pieces(const Problem& problem, cplx z, const SheetIndex& sheet,
                                 const std::vector<RadialFunction>& phi,
                                 const std::vector<RadialFunction>& psi) {
  const int m = problem.channel_count();
  if (static_cast<int>(phi.size()) != m || static_cast<int>(psi.size()) != m) {
    throw InvalidParameter("form factor vectors must have one entry per channel");
  }
  if (sheet.size() != m) throw InvalidParameter("sheet index length differs from channel count");

  auto system = std::make_shared<const LsSystem>(problem, z);
  const int n = system->unknowns();
  Eigen::VectorXcd dphi(n), dpsi(n);
  cplx free_part = 0.0;
  for (int i = 0; i < n; ++i) {
    const int c = system->channel_of(i);
    const cplx f = phi[c](system->node(i));
    const cplx h = psi[c](system->node(i));
    free_part += system->weight(i) * f * h;
    dphi(i) = system->weight(i) * f;
    dpsi(i) = system->weight(i) * h;
  }

  const Eigen::MatrixXcd t_nodes = node_tmatrix(*system);
  const TMatrixSolution sol = solve_halfshell(system);

  ResolventPieces p;
  p.physical = free_part - (dphi.transpose() * t_nodes * dpsi)(0);
  p.left.resize(m);
  p.right.resize(m);
  for (int g = 0; g < m; ++g) {
    const cplx q = sol.onshell_momentum(g);
    p.left(g) = phi[g](q) - (dphi.transpose() * sol.columns().col(g))(0);
    // Row t_{g c(j)}(q_g, p_j) by substituting the node solution back.
    const Eigen::VectorXcd row = system->kernel_row(g, q);
    Eigen::VectorXcd weighted(n);
    for (int i = 0; i < n; ++i) weighted(i) = row(i) * system->weight(i);
    const Eigen::RowVectorXcd t_row = row.transpose() - weighted.transpose() * t_nodes;
    p.right(g) = psi[g](q) - (t_row * dpsi)(0);
  }
  p.set = build_smatrix(sol, sheet);
  return p;
}

}  // namespace

cplx continued_resolvent_form(const Problem& problem, cplx z, const SheetIndex& sheet,
                              const std::vector<RadialFunction>& phi,
                              const std::vector<RadialFunction>& psi) {
  const ResolventPieces p = resolvent_pieces(problem, z, sheet, phi, psi);
  if (sheet.is_physical()) return p.physical;
  const Eigen::MatrixXcd inv = truncated_inverse(p.set.truncated, sheet);
  cplx correction = 0.0;
  for (int g : sheet.active_channels()) {
    for (int d : sheet.active_channels()) {
      correction += p.left(g) * p.set.a_factors(g) * double(sheet.l_factor(g)) * inv(g, d) *
                    p.right(d);
    }
  }
  return p.physical + correction;
}

cplx continued_resolvent_form_transposed(const Problem& problem, cplx z, const SheetIndex& sheet,
                                         const std::vector<RadialFunction>& phi,
                                         const std::vector<RadialFunction>& psi) {
  const ResolventPieces p = resolvent_pieces(problem, z, sheet, phi, psi);
  if (sheet.is_physical()) return p.physical;
  const Eigen::MatrixXcd inv = truncated_inverse(p.set.transposed_truncated, sheet);
  cplx correction = 0.0;
  for (int g : sheet.active_channels()) {
    for (int d : sheet.active_channels()) {
      correction += p.left(g) * inv(g, d) * p.set.a_factors(d) * double(sheet.l_factor(d)) *
                    p.right(d);
    }
  }
  return p.physical + correction;
}

}  // namespace resonax
