#include "resonax/resonances.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <optional>

#include "resonax/errors.hpp"
#include "resonax/parallel.hpp"
#include "resonax/smatrix.hpp"

namespace resonax {

namespace {

constexpr double kBoundaryFloor = 1e-6;
constexpr double kRealTol = 1e-8;

bool by_position(cplx a, cplx b) {
  return a.real() != b.real() ? a.real() < b.real() : a.imag() < b.imag();
}

void check_target(const Problem& problem, const SheetIndex& sheet) {
  if (sheet.size() != problem.channel_count()) {
    throw InvalidParameter("sheet index length differs from channel count");
  }
}

}  // namespace

std::string_view to_string(ResonanceKind kind) {
  switch (kind) {
    case ResonanceKind::Resonance: return "resonance";
    case ResonanceKind::VirtualState: return "virtual_state";
    case ResonanceKind::BoundState: return "bound_state";
  }
  return "unknown";
}

cplx evaluate_target(const Problem& problem, cplx z, const SheetIndex& sheet, RootTarget target) {
  if (target == RootTarget::FredholmDeterminant) return fredholm_determinant(problem, z);
  return det_truncated(problem, z, sheet);
}

void validate_region(const ModelSpec& model, const SearchRegion& region) {
  if (!(region.re_min < region.re_max) || !(region.im_min < region.im_max)) {
    throw InvalidRegion("degenerate rectangle");
  }
  if (region.grid_nx < 1 || region.grid_ny < 1) throw InvalidRegion("scan grid must be at least 1x1");
  if (region.boundary_points < 8) throw InvalidRegion("need at least 8 boundary points");
  for (const auto& c : model.channels()) {
    if (region.contains(cplx(c.threshold, 0.0))) {
      throw InvalidRegion("threshold " + std::to_string(c.threshold) + " lies in the rectangle");
    }
  }
}

ScanGrid scan(const Problem& problem, const SearchRegion& region, const SheetIndex& sheet,
              RootTarget target) {
  check_target(problem, sheet);
  validate_region(problem.model(), region);
  ScanGrid grid{region, sheet, {}};
  const int nx = region.grid_nx, ny = region.grid_ny;
  grid.points.resize(static_cast<std::size_t>(nx) * ny);
  for (int j = 0; j < ny; ++j) {
    for (int i = 0; i < nx; ++i) {
      const cplx z = region.cell(i, j);
      if (z.imag() == 0.0 && z.real() >= problem.model().threshold(0)) {
        throw InvalidRegion("scan point lies on the cut; shift the rectangle");
      }
      grid.points[j * nx + i].z = z;
    }
  }
  parallel_for(grid.points.size(), [&](std::size_t k) {
    grid.points[k].value = evaluate_target(problem, grid.points[k].z, sheet, target);
  });
  return grid;
}

int count_zeros(const Problem& problem, const SearchRegion& region, const SheetIndex& sheet,
                RootTarget target) {
  check_target(problem, sheet);
  validate_region(problem.model(), region);
  if (region.im_min <= 0.0 && region.im_max >= 0.0 &&
      region.re_max >= problem.model().threshold(0)) {
    throw InvalidRegion("contour would cross the cut [" +
                        std::to_string(problem.model().threshold(0)) + ", inf)");
  }

  // Counter-clockwise corners; each edge gets points in proportion to length.
  const cplx corners[4] = {{region.re_min, region.im_min}, {region.re_max, region.im_min},
                           {region.re_max, region.im_max}, {region.re_min, region.im_max}};
  const double width = region.re_max - region.re_min, height = region.im_max - region.im_min;
  const double perimeter = 2.0 * (width + height);
  std::vector<cplx> z;
  for (int e = 0; e < 4; ++e) {
    const cplx a = corners[e], b = corners[(e + 1) % 4];
    const int n = std::max(2, static_cast<int>(std::ceil(region.boundary_points *
                                                         std::abs(b - a) / perimeter)));
    for (int k = 0; k < n; ++k) z.push_back(a + (b - a) * (double(k) / n));
  }
  std::vector<cplx> f(z.size());
  parallel_for(z.size(), [&](std::size_t k) { f[k] = evaluate_target(problem, z[k], sheet, target); });

  const double min_step = 1e-9 * perimeter;
  for (int round = 0;; ++round) {
    for (const cplx v : f) {
      if (!(std::abs(v) >= kBoundaryFloor)) {
        throw ContourTooClose("|target| = " + std::to_string(std::abs(v)) + " on the contour");
      }
    }
    std::vector<std::size_t> split;
    for (std::size_t k = 0; k < z.size(); ++k) {
      const std::size_t next = (k + 1) % z.size();
      if (std::abs(std::arg(f[next] / f[k])) >= std::numbers::pi / 2) split.push_back(k);
    }
    if (split.empty()) break;
    if (round > 40) throw NonIntegerWinding("phase steps did not resolve");
    std::vector<cplx> mid_z(split.size()), mid_f(split.size());
    for (std::size_t s = 0; s < split.size(); ++s) {
      const std::size_t k = split[s];
      const cplx a = z[k], b = z[(k + 1) % z.size()];
      if (std::abs(b - a) < min_step) {
        throw ContourTooClose("phase jump unresolved near " + std::to_string(a.real()) + "," +
                              std::to_string(a.imag()));
      }
      mid_z[s] = 0.5 * (a + b);
    }
    parallel_for(split.size(), [&](std::size_t s) {
      mid_f[s] = evaluate_target(problem, mid_z[s], sheet, target);
    });
    std::vector<cplx> nz, nf;
    nz.reserve(z.size() + split.size());
    nf.reserve(z.size() + split.size());
    std::size_t s = 0;
    for (std::size_t k = 0; k < z.size(); ++k) {
      nz.push_back(z[k]);
      nf.push_back(f[k]);
      if (s < split.size() && split[s] == k) {
        nz.push_back(mid_z[s]);
        nf.push_back(mid_f[s]);
        ++s;
      }
    }
    z.swap(nz);
    f.swap(nf);
  }

  double total = 0.0;
  for (std::size_t k = 0; k < z.size(); ++k) total += std::arg(f[(k + 1) % z.size()] / f[k]);
  const double winding = total / (2.0 * std::numbers::pi);
  const double rounded = std::round(winding);
  if (std::abs(winding - rounded) > 0.25) {
    throw NonIntegerWinding("winding " + std::to_string(winding));
  }
  return static_cast<int>(rounded);
}

cplx gamow_coefficient(cplx z, double threshold, int dimension, int ell) {
  const double p = (dimension - 3) / 4.0;
  const cplx phase =
      std::exp(cplx(0.0, std::numbers::pi * (dimension - 3) * (2 * ell - 1) / 4.0));
  return std::sqrt(std::numbers::pi / 2.0) * phase * std::pow(z - threshold, p);
}

namespace {

void normalise_gauge(Eigen::VectorXcd& v) {
  v /= v.norm();
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (std::abs(v(i)) > 1e-12) {
      v *= std::conj(v(i)) / std::abs(v(i));
      v(i) = std::abs(v(i));
      return;
    }
  }
}

void analyse_null_space(const Problem& problem, ResonanceResult& r) {
  const int m = problem.channel_count();
  r.null_vector = Eigen::VectorXcd::Zero(m);
  r.extended = Eigen::VectorXcd::Zero(m);
  const auto active = r.sheet.active_channels();
  if (active.empty()) return;

  const TMatrixSolution sol = solve_halfshell(problem, r.z_star);
  const SMatrixSet set = build_smatrix(sol, r.sheet);
  const Eigen::MatrixXcd block = principal_submatrix(set.truncated, active);
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(block, Eigen::ComputeFullV);
  const Eigen::VectorXd sv = svd.singularValues();
  const auto n = sv.size();
  const double small = 1e-6 * std::max(1.0, sv(0));

  auto embed = [&](Eigen::Index col) {
    Eigen::VectorXcd v = Eigen::VectorXcd::Zero(m);
    for (std::size_t i = 0; i < active.size(); ++i) {
      v(active[i]) = svd.matrixV()(static_cast<Eigen::Index>(i), col);
    }
    normalise_gauge(v);
    return v;
  };
  r.null_vector = embed(n - 1);
  for (Eigen::Index k = n - 2; k >= 0 && sv(k) < small; --k) {
    r.degenerate_null = true;
    r.extra_null_vectors.push_back(embed(k));
  }
  r.extended = -(set.onshell_t * r.sheet.L().cast<cplx>() * set.a_factors.asDiagonal() *
                 r.null_vector);
}

}  // namespace

ResonanceResult refine(const Problem& problem, cplx z0, const SheetIndex& sheet,
                       RootTarget target) {
  check_target(problem, sheet);
  const auto f = [&](cplx z) { return evaluate_target(problem, z, sheet, target); };
  const double spread = 1e-3 * std::max(1.0, std::abs(z0));
  MullerResult mr;
  try {
    mr = muller(f, z0, spread);
  } catch (const Error& e) {
    throw NoConvergence(std::string("target failed during refinement: ") + e.what());
  }
  if (!mr.converged) {
    throw NoConvergence("Muller from (" + std::to_string(z0.real()) + "," +
                        std::to_string(z0.imag()) + ") stopped at |f| = " +
                        std::to_string(std::abs(mr.value)));
  }

  ResonanceResult r;
  r.sheet = sheet;
  r.z_star = mr.z;
  if (std::abs(r.z_star.imag()) < 1e-14 * std::max(1.0, std::abs(r.z_star))) {
    r.z_star = {r.z_star.real(), 0.0};
  }
  r.residual = std::abs(f(r.z_star));
  r.iterations = mr.iterations;
  analyse_null_space(problem, r);
  const int m = problem.channel_count();
  r.gamow_coeffs.resize(m);
  for (int a = 0; a < m; ++a) {
    const auto& ch = problem.model().channel(a);
    r.gamow_coeffs(a) = gamow_coefficient(r.z_star, ch.threshold, ch.dimension, sheet[a]);
  }
  r.kind = classify(r, problem.model());
  return r;
}

ResonanceKind classify(const ResonanceResult& result, const ModelSpec& model) {
  const bool real_below = std::abs(result.z_star.imag()) < kRealTol &&
                          result.z_star.real() < model.threshold(0);
  if (real_below && result.sheet.is_physical()) return ResonanceKind::BoundState;
  if (real_below) return ResonanceKind::VirtualState;
  return ResonanceKind::Resonance;
}

FindResult find_resonances(const Problem& problem, const SearchRegion& region,
                           const SheetIndex& sheet, RootTarget target) {
  FindResult out;
  out.count = count_zeros(problem, region, sheet, target);
  if (out.count <= 0) {
    if (out.count < 0) out.warning = "winding is negative: the region encloses poles";
    return out;
  }

  const ScanGrid grid = scan(problem, region, sheet, target);
  const int nx = region.grid_nx, ny = region.grid_ny;
  std::vector<std::pair<double, cplx>> minima;
  for (int j = 0; j < ny; ++j) {
    for (int i = 0; i < nx; ++i) {
      const double v = std::abs(grid.at(i, j).value);
      bool lowest = true;
      for (int dj = -1; dj <= 1 && lowest; ++dj) {
        for (int di = -1; di <= 1; ++di) {
          const int ii = i + di, jj = j + dj;
          if ((di == 0 && dj == 0) || ii < 0 || jj < 0 || ii >= nx || jj >= ny) continue;
          if (std::abs(grid.at(ii, jj).value) < v) {
            lowest = false;
            break;
          }
        }
      }
      if (lowest) minima.emplace_back(v, grid.at(i, j).z);
    }
  }
  std::sort(minima.begin(), minima.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
  minima.resize(std::min<std::size_t>(minima.size(), 2 * out.count + 4));

  std::vector<std::optional<ResonanceResult>> refined(minima.size());
  parallel_for(minima.size(), [&](std::size_t k) {
    try {
      refined[k] = refine(problem, minima[k].second, sheet, target);
    } catch (const NoConvergence&) {
      // seed outside any basin
    }
  });
  for (auto& r : refined) {
    if (!r || !region.contains(r->z_star)) continue;
    const bool seen = std::any_of(out.roots.begin(), out.roots.end(), [&](const auto& o) {
      return std::abs(o.z_star - r->z_star) < 1e-7 * std::max(1.0, std::abs(r->z_star));
    });
    if (!seen) out.roots.push_back(std::move(*r));
  }
  std::sort(out.roots.begin(), out.roots.end(),
            [](const auto& a, const auto& b) { return by_position(a.z_star, b.z_star); });
  if (static_cast<int>(out.roots.size()) != out.count) {
    out.warning = "contour count " + std::to_string(out.count) + " but " +
                  std::to_string(out.roots.size()) + " distinct roots refined";
  }
  return out;
}

}  // namespace resonax
