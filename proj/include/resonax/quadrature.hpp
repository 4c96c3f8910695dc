#pragma once

#include <vector>

#include "resonax/model.hpp"

namespace resonax {

/// Gauss-Legendre nodes on (-1, 1) mapped to (0, inf) by
/// q = c (1 + x) / (1 - x).
struct MomentumGrid {
  std::vector<double> nodes;
  std::vector<double> weights;
  double map_scale = 1.0;

  int size() const { return static_cast<int>(nodes.size()); }
};

/// Throws InvalidParameter for n < 8, c <= 0, or (n >= 48) a failed
/// self-check on the integral of exp(-q).
MomentumGrid build_grid(int n, double map_scale);

/// Plain Gauss-Legendre rule on (-1, 1), ascending nodes.
void gauss_legendre(int n, std::vector<double>& x, std::vector<double>& w);

/// Partial-wave kernel v_{ab,l}(k, k'), channels 0-based. Kernels are
/// normalised so that the radial Lippmann-Schwinger equation reads
/// t(k,k') = v(k,k') - sum_c int q^2 dq v(k,q) t(q,k') / (lambda_c + q^2 - z).
cplx kernel_value(const ModelSpec& model, int alpha, int beta, cplx k, cplx kp);

/// Gaussian local potential in plane-wave form, before partial-wave
/// projection: v(k, k', x) with x the cosine between the momenta.
double gaussian_plane_wave(double depth, double range, double k, double kp, double x);

/// Quadrature rule for radial Cauchy integrals
///   int_0^inf q^2 F(q) / (threshold + q^2 - z) dq  ~  sum_j weights_j F(nodes_j)
/// for F analytic near the positive axis. Near the cut an extra node at the
/// on-shell momentum carries the subtraction of the free integral
/// int_0^inf dq / (q^2 - kappa^2) = i pi / (2 kappa).
struct CauchyRule {
  std::vector<cplx> nodes;
  std::vector<cplx> weights;
  cplx onshell{};       // physical-sheet momentum sqrt(z - threshold)
  bool augmented = false;  // last node is `onshell`

  int size() const { return static_cast<int>(nodes.size()); }
};

/// `subtraction_tol` is the relative defect |d kappa| of the discretised free
/// integral below which the subtraction node is omitted.
CauchyRule cauchy_rule(const MomentumGrid& grid, cplx z, double threshold,
                       double subtraction_tol = 1e-14);

}  // namespace resonax
