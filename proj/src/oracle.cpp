#include "resonax/oracle.hpp"

#include <algorithm>
#include <numbers>

#include "resonax/errors.hpp"

namespace resonax {

namespace {
constexpr cplx I{0.0, 1.0};
}

SeparableOracle::SeparableOracle(const ModelSpec& model) {
  if (model.potential().kind() != PotentialKind::SeparableYamaguchi) {
    throw InvalidParameter("closed forms exist only for the Yamaguchi coupling");
  }
  lambda_ = model.potential().yamaguchi().strength;
  beta_ = model.potential().yamaguchi().beta;
  for (const auto& c : model.channels()) threshold_.push_back(c.threshold);
}

cplx SeparableOracle::form_factor(int gamma, cplx k) const {
  const double b = beta_(gamma);
  return 1.0 / (k * k + b * b);
}

cplx SeparableOracle::phi(int gamma, cplx z, int ell) const {
  const cplx q = physical_momentum(z, threshold_.at(gamma));
  const double b = beta_(gamma);
  const cplx d = ell == 0 ? b - I * q : b + I * q;
  return std::numbers::pi / (4.0 * b * d * d);
}

Eigen::MatrixXcd SeparableOracle::tau(cplx z, const SheetIndex& sheet) const {
  const int m = channel_count();
  Eigen::MatrixXcd a = Eigen::MatrixXcd::Identity(m, m);
  for (int g = 0; g < m; ++g) {
    const cplx p = phi(g, z, sheet[g]);
    for (int r = 0; r < m; ++r) a(r, g) += lambda_(r, g) * p;
  }
  return a.partialPivLu().solve(lambda_.cast<cplx>());
}

cplx SeparableOracle::t(int alpha, int beta, cplx k, cplx kp, cplx z,
                        const SheetIndex& sheet) const {
  return form_factor(alpha, k) * tau(z, sheet)(alpha, beta) * form_factor(beta, kp);
}

Eigen::VectorXcd SeparableOracle::a_factors(cplx z) const {
  Eigen::VectorXcd a(channel_count());
  for (int g = 0; g < channel_count(); ++g) {
    a(g) = -std::numbers::pi * I * physical_momentum(z, threshold_[g]);
  }
  return a;
}

Eigen::MatrixXcd SeparableOracle::smatrix(cplx z, const SheetIndex& sheet) const {
  const int m = channel_count();
  const Eigen::MatrixXcd tl = tau(z, sheet);
  const Eigen::VectorXcd a = a_factors(z);
  Eigen::MatrixXcd s = Eigen::MatrixXcd::Identity(m, m);
  for (int r = 0; r < m; ++r) {
    const double er = sheet.e_factor(r);
    const cplx gr = form_factor(r, er * physical_momentum(z, threshold_[r]));
    for (int c = 0; c < m; ++c) {
      const double ec = sheet.e_factor(c);
      const cplx gc = form_factor(c, ec * physical_momentum(z, threshold_[c]));
      s(r, c) += gr * tl(r, c) * gc * a(c) * ec;
    }
  }
  return s;
}

cplx SeparableOracle::resonance_condition(cplx z, const SheetIndex& sheet) const {
  const int m = channel_count();
  Eigen::MatrixXcd a = Eigen::MatrixXcd::Identity(m, m);
  for (int g = 0; g < m; ++g) {
    const cplx p = phi(g, z, sheet[g]);
    for (int r = 0; r < m; ++r) a(r, g) += lambda_(r, g) * p;
  }
  return a.determinant();
}

cplx SeparableOracle::det_truncated(cplx z, const SheetIndex& sheet) const {
  return resonance_condition(z, sheet) /
         resonance_condition(z, SheetIndex::physical(channel_count()));
}

cplx SeparableOracle::resolvent_form(cplx z, const SheetIndex& sheet, const Eigen::VectorXcd& c,
                                     const Eigen::VectorXcd& d) const {
  const int m = channel_count();
  Eigen::VectorXcd p(m);
  for (int g = 0; g < m; ++g) p(g) = phi(g, z, sheet[g]);
  const Eigen::VectorXcd pc = p.cwiseProduct(c);
  const Eigen::VectorXcd pd = p.cwiseProduct(d);
  return (c.transpose() * pd)(0) - (pc.transpose() * tau(z, sheet) * pd)(0);
}

std::vector<cplx> oracle_resonance_roots(const SeparableOracle& oracle, const SheetIndex& sheet,
                                         const SearchRegion& region) {
  const auto f = [&](cplx z) { return oracle.resonance_condition(z, sheet); };
  const double scale = std::max(region.re_max - region.re_min, region.im_max - region.im_min);
  const int seeds = 12;
  std::vector<cplx> roots;
  for (int i = 0; i < seeds; ++i) {
    for (int j = 0; j < seeds; ++j) {
      const cplx z0{region.re_min + (i + 0.5) * (region.re_max - region.re_min) / seeds,
                    region.im_min + (j + 0.5) * (region.im_max - region.im_min) / seeds};
      MullerOptions opt;
      opt.f_tol = 1e-14;
      opt.step_tol = 1e-15;
      MullerResult r;
      try {
        r = muller(f, z0, 1e-3 * scale, opt);
      } catch (const Error&) {
        continue;  // wandered onto a branch point
      }
      if (!r.converged || !region.contains(r.z)) continue;
      const bool seen = std::any_of(roots.begin(), roots.end(), [&](cplx z) {
        return std::abs(z - r.z) < 1e-9 * std::max(1.0, std::abs(z));
      });
      if (!seen) roots.push_back(r.z);
    }
  }
  std::sort(roots.begin(), roots.end(), [](cplx a, cplx b) {
    return a.real() != b.real() ? a.real() < b.real() : a.imag() < b.imag();
  });
  return roots;
}

}  // namespace resonax
