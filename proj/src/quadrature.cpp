#include "resonax/quadrature.hpp"

#include <cmath>
#include <numbers>

#include "resonax/errors.hpp"

namespace resonax {

void gauss_legendre(int n, std::vector<double>& x, std::vector<double>& w) {
  x.assign(n, 0.0);
  w.assign(n, 0.0);
  const int half = (n + 1) / 2;
  for (int i = 0; i < half; ++i) {
    // Tricomi initial guess, then Newton on P_n.
    double t = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0, p1 = t;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * t * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (t * p1 - p0) / (t * t - 1.0);
      const double dt = p1 / dp;
      t -= dt;
      if (std::abs(dt) < 1e-16) break;
    }
    double p0 = 1.0, p1 = t;
    for (int k = 2; k <= n; ++k) {
      const double p2 = ((2.0 * k - 1.0) * t * p1 - (k - 1.0) * p0) / k;
      p0 = p1;
      p1 = p2;
    }
    dp = n * (t * p1 - p0) / (t * t - 1.0);
    const double weight = 2.0 / ((1.0 - t * t) * dp * dp);
    x[i] = -t;
    x[n - 1 - i] = t;
    w[i] = weight;
    w[n - 1 - i] = weight;
  }
}

MomentumGrid build_grid(int n, double map_scale) {
  if (n < 8) throw InvalidParameter("grid needs at least 8 nodes, got " + std::to_string(n));
  if (!(map_scale > 0.0) || !std::isfinite(map_scale)) {
    throw InvalidParameter("map scale must be positive");
  }
  std::vector<double> x, w;
  gauss_legendre(n, x, w);

  MomentumGrid grid;
  grid.map_scale = map_scale;
  grid.nodes.resize(n);
  grid.weights.resize(n);
  for (int i = 0; i < n; ++i) {
    const double one_minus = 1.0 - x[i];
    grid.nodes[i] = map_scale * (1.0 + x[i]) / one_minus;
    grid.weights[i] = w[i] * 2.0 * map_scale / (one_minus * one_minus);
  }

  if (n >= 48) {
    double sum = 0.0;
    for (int i = 0; i < n; ++i) sum += grid.weights[i] * std::exp(-grid.nodes[i]);
    if (std::abs(sum - 1.0) >= 1e-8) {
      throw InvalidParameter("grid self-check failed: int exp(-q) = " + std::to_string(sum));
    }
  }
  return grid;
}

namespace {

constexpr double kPi = std::numbers::pi;

// exp(-shift) * i_l(a), i_l the modified spherical Bessel function of the
// first kind, evaluated without forming exp(a) on its own.
cplx scaled_bessel_i(int l, cplx a, cplx shift) {
  const double threshold = std::max(1.0, l + 1.0);
  if (std::abs(a) <= threshold) {
    // Power series: i_l(a) = a^l/(2l+1)!! sum_k (a^2/2)^k / (k! prod_{j<=k}(2l+2j+1))
    cplx lead = 1.0;
    double dfact = 1.0;
    for (int j = 1; j <= l; ++j) {
      lead *= a;
      dfact *= 2.0 * j + 1.0;
    }
    lead /= dfact;
    const cplx x = 0.5 * a * a;
    cplx term = 1.0, sum = 1.0;
    for (int k = 1; k < 200; ++k) {
      term *= x / (k * (2.0 * l + 2.0 * k + 1.0));
      sum += term;
      if (std::abs(term) < 1e-17 * std::abs(sum)) break;
    }
    return std::exp(-shift) * lead * sum;
  }
  // i_l(a) = [e^a P(-) + (-1)^{l+1} e^{-a} P(+)] / (2a),
  // P(+-) = sum_k (+-1)^k (l+k)! / (k! (l-k)! (2a)^k).
  cplx plus = 0.0, minus = 0.0;
  cplx inv = 1.0;
  for (int k = 0; k <= l; ++k) {
    double c = 1.0;  // (l+k)! / (k! (l-k)!)
    for (int j = l - k + 1; j <= l + k; ++j) c *= j;
    for (int j = 2; j <= k; ++j) c /= j;
    plus += c * inv;
    minus += ((k % 2 == 0) ? c : -c) * inv;
    inv /= 2.0 * a;
  }
  const double sign = (l % 2 == 0) ? -1.0 : 1.0;
  return (std::exp(a - shift) * minus + sign * std::exp(-a - shift) * plus) / (2.0 * a);
}

}  // namespace

double gaussian_plane_wave(double depth, double range, double k, double kp, double x) {
  const double r2 = range * range;
  const double p2 = k * k + kp * kp - 2.0 * k * kp * x;
  return depth * range * r2 / (8.0 * kPi * std::sqrt(kPi)) * std::exp(-0.25 * p2 * r2);
}

cplx kernel_value(const ModelSpec& model, int alpha, int beta, cplx k, cplx kp) {
  const auto& pot = model.potential();
  switch (pot.kind()) {
    case PotentialKind::Zero:
      return 0.0;
    case PotentialKind::SeparableYamaguchi: {
      if (model.partial_wave() != 0) {
        throw UnsupportedPartialWave("yamaguchi kernel is defined for l = 0 only");
      }
      const auto& p = pot.yamaguchi();
      const double ba = p.beta(alpha), bb = p.beta(beta);
      const cplx da = k * k + ba * ba;
      const cplx db = kp * kp + bb * bb;
      if (std::abs(da) < 1e-12 * ba * ba || std::abs(db) < 1e-12 * bb * bb) {
        throw AnalyticityViolation("momentum at a pole of the yamaguchi form factor");
      }
      return p.strength(alpha, beta) / (da * db);
    }
    case PotentialKind::LocalGaussian: {
      const auto& p = pot.gaussian();
      const double depth = p.depth(alpha, beta);
      if (depth == 0.0) return 0.0;
      const double r = p.range(alpha, beta);
      const double r2 = r * r;
      const cplx shift = 0.25 * r2 * (k * k + kp * kp);
      const cplx a = 0.5 * r2 * k * kp;
      return depth * r * r2 / (2.0 * std::sqrt(kPi)) *
             scaled_bessel_i(model.partial_wave(), a, shift);
    }
  }
  return 0.0;
}

CauchyRule cauchy_rule(const MomentumGrid& grid, cplx z, double threshold,
                       double subtraction_tol) {
  CauchyRule rule;
  const cplx w = z - threshold;
  rule.onshell = physical_momentum(z, threshold);
  const int n = grid.size();
  rule.nodes.reserve(n + 1);
  rule.weights.reserve(n + 1);
  cplx free_sum = 0.0;
  for (int j = 0; j < n; ++j) {
    const double q = grid.nodes[j];
    const cplx denom = q * q - w;
    rule.nodes.emplace_back(q);
    rule.weights.push_back(grid.weights[j] * q * q / denom);
    free_sum += grid.weights[j] / denom;
  }
  const cplx defect = cplx(0.0, kPi) / (2.0 * rule.onshell) - free_sum;
  if (std::abs(defect * rule.onshell) > subtraction_tol) {
    rule.nodes.push_back(rule.onshell);
    rule.weights.push_back(w * defect);
    rule.augmented = true;
  }
  return rule;
}

}  // namespace resonax
