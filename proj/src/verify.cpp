#include "resonax/verify.hpp"

#include <algorithm>
#include <cmath>
#include <mutex>
#include <optional>
#include <random>

#include "resonax/continuation.hpp"
#include "resonax/errors.hpp"
#include "resonax/oracle.hpp"
#include "resonax/parallel.hpp"
#include "resonax/smatrix.hpp"

namespace resonax {

namespace {

struct Sample {
  cplx z;
  SheetIndex sheet;
  int alpha = 0, beta = 0;
  cplx k, kp;
  double rim_energy = 0.0;
};

double rel(cplx a, cplx b) { return std::abs(a - b) / std::max({1.0, std::abs(a), std::abs(b)}); }

double rel(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b) {
  return (a - b).cwiseAbs().maxCoeff() /
         std::max({1.0, a.cwiseAbs().maxCoeff(), b.cwiseAbs().maxCoeff()});
}

// Entire test functions for the resolvent pairing.
cplx bump(cplx q) { return std::exp(-0.5 * q * q); }
cplx bump2(cplx q) { return (1.0 + q * q) * std::exp(-0.7 * q * q); }

enum Id {
  kUnitarity,
  kReciprocity,
  kTRepresentation,
  kSRepresentation,
  kGRepresentation,
  kInversion,
  kOracleT,
  kOracleS,
  kOracleDet,
  kIdCount
};

const char* const kNames[kIdCount] = {
    "unitarity",       "reciprocity",          "t_representation",
    "s_transposed",    "resolvent_representation", "inversion",
    "oracle_t",        "oracle_s",             "oracle_det"};
const double kTolerance[kIdCount] = {1e-5, 1e-9, 1e-8, 1e-8, 1e-8, 1e-8, 1e-7, 1e-7, 1e-7};

}  // namespace

bool VerifyReport::passed() const {
  return std::all_of(checks.begin(), checks.end(), [](const auto& c) { return c.passed(); });
}

VerifyReport verify_identities(const Problem& problem, int samples, std::uint64_t seed) {
  if (samples < 1) throw InvalidParameter("need at least one sample");
  const ModelSpec& model = problem.model();
  const int m = model.channel_count();
  const bool yamaguchi = model.potential().kind() == PotentialKind::SeparableYamaguchi;
  std::optional<SeparableOracle> oracle;
  if (yamaguchi) oracle.emplace(model);

  // Momenta stay inside the strip where every form factor is analytic.
  double k_im = 0.5;
  if (yamaguchi) k_im = 0.5 * model.potential().yamaguchi().beta.minCoeff();

  const double lo = model.threshold(0), hi = model.threshold(m - 1);
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<Sample> draws(samples);
  const auto sheets = enumerate_sheets(m);
  for (auto& s : draws) {
    const double im = (0.05 + 1.45 * unit(rng)) * (unit(rng) < 0.5 ? -1.0 : 1.0);
    s.z = {lo - 2.0 + (hi - lo + 4.0) * unit(rng), im};
    s.sheet = sheets[1 + static_cast<std::size_t>(unit(rng) * (sheets.size() - 1))];
    s.alpha = static_cast<int>(unit(rng) * m);
    s.beta = static_cast<int>(unit(rng) * m);
    s.k = {0.2 + 1.8 * unit(rng), k_im * (2.0 * unit(rng) - 1.0)};
    s.kp = {0.2 + 1.8 * unit(rng), k_im * (2.0 * unit(rng) - 1.0)};
    s.rim_energy = hi + 0.05 + 2.0 * unit(rng);
  }

  std::vector<std::vector<std::optional<double>>> dev(samples,
                                                      std::vector<std::optional<double>>(kIdCount));
  const SheetIndex full(std::vector<int>(m, 1));
  parallel_for(draws.size(), [&](std::size_t n) {
    const Sample& s = draws[n];
    auto& d = dev[n];
    auto guarded = [&](Id id, auto&& fn) {
      try {
        d[id] = fn();
      } catch (const TruncatedSMatrixSingular&) {
      } catch (const LinearSolveFailure&) {
      } catch (const AnalyticityViolation&) {
      }
    };

    guarded(kUnitarity, [&] {
      const RimEvaluation rim = rim_smatrix(problem, s.rim_energy);
      return unitarity_defect(rim.s_limit);
    });
    guarded(kReciprocity, [&] {
      const TMatrixSolution sol = solve_halfshell(problem, s.z, {External{s.beta, s.kp}});
      const TMatrixSolution rev = solve_halfshell(sol.system_ptr(), {External{s.alpha, s.k}});
      const cplx forward = nystrom_extend(sol, s.alpha, s.k, sol.first_requested());
      const cplx backward = nystrom_extend(rev, s.beta, s.kp, rev.first_requested());
      return std::max(rel(forward, backward), rel(sol.onshell(), sol.onshell().transpose()));
    });
    guarded(kTRepresentation, [&] {
      return rel(continued_tmatrix(problem, s.z, s.sheet, s.alpha, s.beta, s.k, s.kp),
                 continued_tmatrix_transposed(problem, s.z, s.sheet, s.alpha, s.beta, s.k, s.kp));
    });
    std::optional<SMatrixSet> maybe_set;
    try {
      maybe_set = build_smatrix(solve_halfshell(problem, s.z), s.sheet);
    } catch (const LinearSolveFailure&) {
      return;
    }
    const SMatrixSet& set = *maybe_set;
    guarded(kSRepresentation, [&] {
      return rel(continued_smatrix(set, model.partial_wave()),
                 continued_smatrix_transposed(set, model.partial_wave()).transpose());
    });
    guarded(kGRepresentation, [&] {
      const std::vector<RadialFunction> phi(m, bump), psi(m, bump2);
      return rel(continued_resolvent_form(problem, s.z, s.sheet, phi, psi),
                 continued_resolvent_form_transposed(problem, s.z, s.sheet, phi, psi));
    });
    guarded(kInversion, [&] {
      const SMatrixSet all = build_smatrix(solve_halfshell(problem, s.z), full);
      const Eigen::MatrixXcd prod = continued_smatrix(all, model.partial_wave()) * all.full;
      return rel(prod, Eigen::MatrixXcd::Identity(m, m));
    });
    if (oracle) {
      guarded(kOracleT, [&] {
        return rel(continued_tmatrix(problem, s.z, s.sheet, s.alpha, s.beta, s.k, s.kp),
                   oracle->t(s.alpha, s.beta, s.k, s.kp, s.z, s.sheet));
      });
      guarded(kOracleS, [&] {
        return rel(continued_smatrix(set, model.partial_wave()), oracle->smatrix(s.z, s.sheet));
      });
      guarded(kOracleDet, [&] {
        return rel(det_truncated(set), oracle->det_truncated(s.z, s.sheet));
      });
    }
  });

  VerifyReport report;
  report.seed = seed;
  report.requested_samples = samples;
  for (int id = 0; id < kIdCount; ++id) {
    if (!oracle && (id == kOracleT || id == kOracleS || id == kOracleDet)) continue;
    IdentityCheck c{kNames[id], 0.0, kTolerance[id], 0, 0};
    for (const auto& row : dev) {
      if (row[id]) {
        ++c.samples;
        c.max_deviation = std::max(c.max_deviation, *row[id]);
        if (std::isnan(*row[id])) c.max_deviation = *row[id];
      } else {
        ++c.skipped;
      }
    }
    report.checks.push_back(c);
  }
  return report;
}

}  // namespace resonax
