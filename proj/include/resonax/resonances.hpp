#pragma once

#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "resonax/lsolve.hpp"
#include "resonax/model.hpp"
#include "resonax/roots.hpp"

namespace resonax {

/// Function whose zeros are searched. det s_ell locates poles on Pi_ell;
/// the Fredholm determinant det(I + K) locates bound states on Pi_0, where
/// det s_0 is identically 1.
enum class RootTarget { TruncatedSMatrix, FredholmDeterminant };

enum class ResonanceKind { Resonance, VirtualState, BoundState };

std::string_view to_string(ResonanceKind kind);

cplx evaluate_target(const Problem& problem, cplx z, const SheetIndex& sheet, RootTarget target);

/// Throws InvalidRegion for a degenerate rectangle, bad sampling counts, or
/// a threshold in the closed rectangle.
void validate_region(const ModelSpec& model, const SearchRegion& region);

struct ScanPoint {
  cplx z{};
  cplx value{};
};

/// Cell-centre samples, row-major: index j * grid_nx + i with j along Im z.
struct ScanGrid {
  SearchRegion region;
  SheetIndex sheet;
  std::vector<ScanPoint> points;

  const ScanPoint& at(int i, int j) const { return points[j * region.grid_nx + i]; }
};

ScanGrid scan(const Problem& problem, const SearchRegion& region, const SheetIndex& sheet,
              RootTarget target = RootTarget::TruncatedSMatrix);

/// Winding number of the target along the rectangle boundary: zeros minus
/// poles inside. The closed rectangle must not meet the cut [threshold_1, inf).
/// Throws ContourTooClose when |target| < 1e-6 on the boundary and
/// NonIntegerWinding when the sum of phase steps is not near a multiple of 2 pi.
int count_zeros(const Problem& problem, const SearchRegion& region, const SheetIndex& sheet,
                RootTarget target = RootTarget::TruncatedSMatrix);

struct ResonanceResult {
  SheetIndex sheet;
  cplx z_star{};
  double residual = 0.0;
  int iterations = 0;
  /// Breakup amplitudes: unit norm, zero off the active channels, first
  /// nonzero component real positive. All zero for bound states.
  Eigen::VectorXcd null_vector;
  /// Extra null directions when the smallest two singular values of the
  /// active block are both small.
  std::vector<Eigen::VectorXcd> extra_null_vectors;
  bool degenerate_null = false;
  /// -t L A null_vector, with t the on-shell block.
  Eigen::VectorXcd extended;
  Eigen::VectorXcd gamow_coeffs;
  ResonanceKind kind = ResonanceKind::Resonance;
};

/// C_a = sqrt(pi/2) exp(i pi (n - 3)(2 ell - 1) / 4) (z - threshold)^((n - 3) / 4).
cplx gamow_coefficient(cplx z, double threshold, int dimension, int ell);

/// Muller refinement from z0 followed by null-space analysis. Throws
/// NoConvergence after 50 iterations or when the target cannot be evaluated.
ResonanceResult refine(const Problem& problem, cplx z0, const SheetIndex& sheet,
                       RootTarget target = RootTarget::TruncatedSMatrix);

ResonanceKind classify(const ResonanceResult& result, const ModelSpec& model);

struct FindResult {
  int count = 0;
  std::vector<ResonanceResult> roots;  // sorted by Re z*, then Im z*
  std::string warning;                 // empty unless count and roots disagree
};

/// count_zeros, then Muller from the local minima of a scan.
FindResult find_resonances(const Problem& problem, const SearchRegion& region,
                           const SheetIndex& sheet,
                           RootTarget target = RootTarget::TruncatedSMatrix);

}  // namespace resonax
