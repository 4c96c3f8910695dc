#pragma once

#include <functional>
#include <string>

#include "resonax/model.hpp"

namespace resonax {

using ComplexFunction = std::function<cplx(cplx)>;

/// Axis-aligned rectangle of the complex energy plane plus its sampling.
struct SearchRegion {
  double re_min = 0.0, re_max = 0.0, im_min = 0.0, im_max = 0.0;
  int grid_nx = 40;
  int grid_ny = 40;
  int boundary_points = 256;  // initial samples along the contour

  bool contains(cplx z) const {
    return z.real() >= re_min && z.real() <= re_max && z.imag() >= im_min && z.imag() <= im_max;
  }
  /// Centre of grid cell (i, j), i along Re.
  cplx cell(int i, int j) const;
  double cell_width() const { return (re_max - re_min) / grid_nx; }
  double cell_height() const { return (im_max - im_min) / grid_ny; }
};

/// Parses "re_min,re_max,im_min,im_max". Throws InvalidRegion.
SearchRegion parse_region(const std::string& text);

struct MullerOptions {
  double f_tol = 1e-10;
  double step_tol = 1e-12;  // relative to max(1, |z|)
  int max_iterations = 50;
  int polish_steps = 3;  // extra iterations once |f| < f_tol, while steps shrink
};

struct MullerResult {
  cplx z{};
  cplx value{};
  int iterations = 0;
  bool converged = false;
};

/// Muller's three-point iteration started from z0 and two points offset by
/// +-`spread`. Never throws; callers inspect `converged`.
MullerResult muller(const ComplexFunction& f, cplx z0, double spread = 1e-3,
                    const MullerOptions& options = {});

}  // namespace resonax
