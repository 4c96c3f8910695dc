#include <doctest.h>

#include <limits>
#include <numbers>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "closed_forms.hpp"
#include "resonax/continuation.hpp"
#include "resonax/errors.hpp"

using namespace resonax;
using boost::math::quadrature::gauss_kronrod;

namespace {

constexpr cplx I{0.0, 1.0};

ModelSpec yamaguchi(const Eigen::MatrixXd& l, const std::vector<double>& beta,
                    const std::vector<double>& thr) {
  std::vector<ChannelSpec> ch;
  for (std::size_t a = 0; a < thr.size(); ++a) ch.push_back({int(a) + 1, thr[a], 3});
  return ModelSpec(ch, SeparableYamaguchi{l, Eigen::Map<const Eigen::VectorXd>(beta.data(), beta.size())});
}

ModelSpec gaussian_1ch(double depth, int l) {
  Eigen::MatrixXd d(1, 1), r(1, 1);
  d << depth;
  r << 1.0;
  return ModelSpec({{1, 0.0, 3}}, LocalGaussian{d, r}, l);
}

struct Fixture2 {
  Eigen::MatrixXd l;
  closed::Separable oracle;
  Problem problem;
  Fixture2()
      : l((Eigen::MatrixXd(2, 2) << -1.0, 0.3, 0.3, -3.0).finished()),
        oracle{l, {1.0, 1.5}, {0.0, 1.0}},
        problem(yamaguchi(l, {1.0, 1.5}, {0.0, 1.0}), build_grid(100, 1.0)) {}

  Eigen::MatrixXcd smatrix(cplx z, const SheetIndex& s) const {
    const Eigen::MatrixXcd tau = oracle.tau(z, s.bits());
    Eigen::MatrixXcd out = Eigen::MatrixXcd::Identity(2, 2);
    for (int a = 0; a < 2; ++a) {
      const cplx qa = double(s.e_factor(a)) * closed::momentum(z, oracle.thr[a]);
      for (int b = 0; b < 2; ++b) {
        const double eb = s.e_factor(b);
        const cplx qb = closed::momentum(z, oracle.thr[b]);
        out(a, b) += closed::g(oracle.beta[a], qa) * tau(a, b) * closed::g(oracle.beta[b], eb * qb) *
                     (-std::numbers::pi * I * qb) * eb;
      }
    }
    return out;
  }
};

// i int q f(q) / (u^2 + 1) du with q = sqrt(E + eps u): the exact cut
// discontinuity of int q^2 f / (q^2 - z) dq at finite eps.
double jump_by_substitution(double e, double eps, double (*f)(double)) {
  const auto h = [&](double u) { const double q = std::sqrt(e + eps * u); return q * f(q) / (u * u + 1.0); };
  using GK = gauss_kronrod<double, 61>;
  return GK::integrate(h, -e / eps, -50.0, 15, 1e-13) + GK::integrate(h, -50.0, 50.0, 15, 1e-13) +
         GK::integrate(h, 50.0, std::numeric_limits<double>::infinity(), 15, 1e-13);
}

double gauss_ff(double q) { return std::exp(-q * q); }

}  // namespace

TEST_CASE("radial Cauchy integral and its continuation against the closed form") {
  const MomentumGrid g = build_grid(100, 1.0);
  const double beta = 1.5;
  const RadialFunction f = [&](cplx q) { const cplx v = closed::g(beta, q); return v * v; };
  for (cplx z : {cplx(-1.0, 0.0), cplx(0.8, -0.3), cplx(2.0, 0.5)}) {
    CHECK(std::abs(continue_cauchy_radial(g, f, 0.0, 0, z) - closed::phi(beta, 0.0, z, 0)) < 1e-9);
    CHECK(std::abs(continue_cauchy_radial(g, f, 0.0, 1, z) - closed::phi(beta, 0.0, z, 1)) < 1e-9);
    CHECK(continue_cauchy_radial(g, f, 0.0, 0, z) == cauchy_radial(g, f, 0.0, z));
  }
  CHECK_THROWS_AS(continue_cauchy_radial(g, f, 0.0, 2, {-1.0, 0.0}), InvalidParameter);
  CHECK_THROWS_AS(continue_cauchy_radial(g, f, 0.5, 1, {0.5, 0.0}), BranchPointError);
}

TEST_CASE("cut discontinuity matches the continuation term") {
  const MomentumGrid g = build_grid(100, 1.0);
  const RadialFunction f = [](cplx q) { return std::exp(-q * q); };
  const double eps = 1e-6;
  for (double e : {0.3, 1.0, 2.5}) {
    const cplx measured = cauchy_radial(g, f, 0.0, {e, eps}) - cauchy_radial(g, f, 0.0, {e, -eps});
    // independent value of the same finite-eps jump
    const cplx reference = I * jump_by_substitution(e, eps, gauss_ff);
    CHECK(std::abs(measured - reference) < 1e-9 * std::abs(reference));
    // limit: -pi i q f(q) with q the physical root at the lower rim
    const cplx q_low = physical_momentum({e, -eps}, 0.0);
    CHECK(q_low.real() < 0.0);
    const cplx term = -std::numbers::pi * I * q_low * f(q_low);
    CHECK(std::abs(measured - term) < 1e-5 * std::abs(term));
  }
}

TEST_CASE("truncated inverse bypasses inactive channels") {
  Eigen::MatrixXcd s(3, 3);
  s << 1, 0, 0, 0, cplx(2, 1), 0.5, 0, 0.25, 3;
  const SheetIndex sheet = SheetIndex::parse("0,1,1");
  const Eigen::MatrixXcd inv = truncated_inverse(s, sheet);
  CHECK(inv(0, 0) == cplx(1, 0));
  CHECK(inv(0, 1) == cplx(0, 0));
  CHECK((inv.bottomRightCorner(2, 2) * s.bottomRightCorner(2, 2) - Eigen::MatrixXcd::Identity(2, 2))
            .norm() < 1e-14);

  Eigen::MatrixXcd singular = Eigen::MatrixXcd::Identity(2, 2);
  singular(1, 1) = 1e-12;
  CHECK_THROWS_AS(truncated_inverse(singular, SheetIndex::parse("0,1")), TruncatedSMatrixSingular);
  CHECK_NOTHROW(truncated_inverse(singular, SheetIndex::parse("1,0")));
}

TEST_CASE("continued t on every sheet matches the closed form; both representations agree") {
  const Fixture2 fx;
  const cplx k{0.7, 0.2}, kp{1.3, -0.3};
  for (cplx z : {cplx(0.4, -0.3), cplx(1.8, 0.4), cplx(-0.6, -1.0), cplx(0.5, 1e-6)}) {
    for (const auto& sheet : enumerate_sheets(2)) {
      for (int a = 0; a < 2; ++a) {
        for (int b = 0; b < 2; ++b) {
          const cplx left = continued_tmatrix(fx.problem, z, sheet, a, b, k, kp);
          const cplx right = continued_tmatrix_transposed(fx.problem, z, sheet, a, b, k, kp);
          CHECK(std::abs(left - fx.oracle.t(a, b, k, kp, z, sheet.bits())) < 1e-8);
          CHECK(std::abs(left - right) < 1e-10 * std::max(1.0, std::abs(left)));
        }
      }
    }
  }
}

TEST_CASE("sheet 0 continuation is the physical value") {
  const Fixture2 fx;
  const cplx z{0.4, -0.3};
  const TMatrixSolution sol = solve_halfshell(fx.problem, z, {External{1, 0.9}});
  CHECK(continued_tmatrix(fx.problem, z, SheetIndex::physical(2), 0, 1, 0.5, 0.9) ==
        nystrom_extend(sol, 0, 0.5, sol.first_requested()));
  const SMatrixSet set = build_smatrix(solve_halfshell(fx.problem, z), SheetIndex::physical(2));
  CHECK((continued_smatrix(set, 0) - set.full).norm() < 1e-15);
}

TEST_CASE("continued S matches the closed form, including the rim between thresholds") {
  const Fixture2 fx;
  for (cplx z : {cplx(0.4, -0.3), cplx(1.8, 0.4), cplx(0.6, 1e-7)}) {
    for (const auto& sheet : enumerate_sheets(2)) {
      const Eigen::MatrixXcd s = continued_smatrix(fx.problem, z, sheet);
      CHECK((s - fx.smatrix(z, sheet)).cwiseAbs().maxCoeff() < 1e-7);
      CHECK((s - continued_smatrix_transposed(fx.problem, z, sheet).transpose()).cwiseAbs().maxCoeff() <
            1e-10 * std::max(1.0, s.cwiseAbs().maxCoeff()));
    }
  }
}

TEST_CASE("single-channel inversion s(z | Pi_1) s(z) = 1") {
  Eigen::MatrixXd l(1, 1);
  l << -2.0;
  const std::vector<ModelSpec> models = {yamaguchi(l, {1.0}, {0.0}), gaussian_1ch(-3.0, 0),
                                         gaussian_1ch(-3.0, 1), gaussian_1ch(-5.0, 2)};
  for (const auto& m : models) {
    const Problem p(m, build_grid(100, 1.0));
    for (cplx z : {cplx(0.5, -0.5), cplx(2.0, 0.3), cplx(-1.5, 0.0), cplx(1.0, 1e-6)}) {
      const SMatrixSet set = build_smatrix(solve_halfshell(p, z), SheetIndex::parse("1"));
      const cplx flipped = continued_smatrix(set, m.partial_wave())(0, 0);
      CHECK(std::abs(flipped * set.full(0, 0) - 1.0) < 1e-8);
      // involution: applying the rule twice returns s
      CHECK(std::abs(1.0 / flipped - set.full(0, 0)) < 1e-8 * std::abs(set.full(0, 0)));
    }
  }
}

TEST_CASE("free resolvent continuation") {
  const ModelSpec zero({{1, 0.0, 3}}, ZeroPotential{});
  const Problem p(zero, build_grid(100, 1.0));
  const RadialFunction g = [](cplx q) { return closed::g(1.0, q); };
  for (cplx z : {cplx(-0.5, 0.2), cplx(1.2, -0.6), cplx(3.0, 0.05)}) {
    const cplx q = closed::momentum(z, 0.0);
    const cplx physical = closed::phi(1.0, 0.0, z);
    const cplx continued = physical - std::numbers::pi * I * q * g(q) * g(q);
    CHECK(std::abs(continued - closed::phi(1.0, 0.0, z, 1)) < 1e-13);
    CHECK(std::abs(continued_resolvent_form(p, z, SheetIndex::parse("0"), {g}, {g}) - physical) < 1e-9);
    CHECK(std::abs(continued_resolvent_form(p, z, SheetIndex::parse("1"), {g}, {g}) - continued) < 1e-9);
  }
}

TEST_CASE("interacting resolvent continuation matches the closed form") {
  const Fixture2 fx;
  const Eigen::Vector2d c(1.0, 0.5), d(0.3, -1.2);
  std::vector<RadialFunction> phi, psi;
  for (int a = 0; a < 2; ++a) {
    const double b = fx.oracle.beta[a];
    phi.push_back([b, w = c(a)](cplx q) { return w * closed::g(b, q); });
    psi.push_back([b, w = d(a)](cplx q) { return w * closed::g(b, q); });
  }
  for (cplx z : {cplx(0.4, -0.3), cplx(1.8, 0.4), cplx(-0.6, -1.0)}) {
    for (const auto& sheet : enumerate_sheets(2)) {
      Eigen::Vector2cd p;
      for (int a = 0; a < 2; ++a) p(a) = closed::phi(fx.oracle.beta[a], fx.oracle.thr[a], z, sheet[a]);
      const Eigen::Vector2cd pc = p.cwiseProduct(c.cast<cplx>()), pd = p.cwiseProduct(d.cast<cplx>());
      const cplx expect = (c.cast<cplx>().transpose() * pd)(0) -
                          (pc.transpose() * fx.oracle.tau(z, sheet.bits()) * pd)(0);
      CHECK(std::abs(continued_resolvent_form(fx.problem, z, sheet, phi, psi) - expect) < 1e-7);
      CHECK(std::abs(continued_resolvent_form_transposed(fx.problem, z, sheet, phi, psi) - expect) < 1e-7);
    }
  }
}

TEST_CASE("property: continuation through the cut is continuous") {
  const Problem p(gaussian_1ch(-3.0, 0), build_grid(100, 1.0));
  const double delta = 1e-7;
  for (double e : {0.4, 1.5, 3.0}) {
    const cplx above = continued_tmatrix(p, {e, delta}, SheetIndex::parse("0"), 0, 0, 0.5, 0.8);
    const cplx below = continued_tmatrix(p, {e, -delta}, SheetIndex::parse("1"), 0, 0, 0.5, 0.8);
    CHECK(std::abs(above - below) < 1e-5 * std::max(1.0, std::abs(above)));
  }
}

TEST_CASE("property: Schwarz reflection holds on every sheet") {
  const Fixture2 fx;
  const cplx z{0.9, -0.4};
  for (const auto& sheet : enumerate_sheets(2)) {
    const cplx a = continued_tmatrix(fx.problem, z, sheet, 0, 1, 0.6, 1.1);
    const cplx b = continued_tmatrix(fx.problem, std::conj(z), sheet, 0, 1, 0.6, 1.1);
    CHECK(std::abs(a - std::conj(b)) < 1e-10 * std::max(1.0, std::abs(a)));
  }
}

TEST_CASE("property: pole transfer leaves a finite rank-one residue") {
  // closed-form root of det s_(1,1) for a repulsive two-channel coupling
  Eigen::MatrixXd l(2, 2);
  l << 1.0, 0.5, 0.5, 2.0;
  const Problem p(yamaguchi(l, {1.0, 1.0}, {0.0, 1.0}), build_grid(100, 1.0));
  const cplx z_star{-0.287409036512732, -1.60930279446487};
  const SheetIndex sheet = SheetIndex::parse("1,1");
  auto residue = [&](cplx h) {
    Eigen::Matrix2cd r;
    for (int a = 0; a < 2; ++a) {
      for (int b = 0; b < 2; ++b) r(a, b) = h * continued_tmatrix(p, z_star + h, sheet, a, b, 0.5, 0.9);
    }
    return r;
  };
  const Eigen::Matrix2cd r1 = residue(1e-4), r2 = residue(5e-5);
  const Eigen::Matrix2cd extrapolated = 2.0 * r2 - r1;
  CHECK(extrapolated.cwiseAbs().maxCoeff() > 1e-4);
  CHECK(extrapolated.cwiseAbs().maxCoeff() < 1e4);
  Eigen::JacobiSVD<Eigen::Matrix2cd> svd(extrapolated);
  CHECK(svd.singularValues()(1) < 1e-6 * svd.singularValues()(0));
  // the distance to the root sets the scale of |t|
  CHECK(std::abs(continued_tmatrix(p, z_star + 1e-6, sheet, 0, 0, 0.5, 0.9)) >
        100.0 * std::abs(continued_tmatrix(p, z_star + 1e-3, sheet, 0, 0, 0.5, 0.9)));
}
