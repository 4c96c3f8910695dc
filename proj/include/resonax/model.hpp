#pragma once

#include <complex>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include <Eigen/Dense>

namespace resonax {

using cplx = std::complex<double>;

/// One binary channel. Momenta live in R^dimension; only dimension 3 is
/// supported, which makes every threshold a square-root branch point.
struct ChannelSpec {
  int index = 1;  // 1-based, as in the channel labels of the config file
  double threshold = 0.0;
  int dimension = 3;
};

/// Rank-one separable coupling lambda_ab g_a(k) g_b(k') with
/// g_a(k) = 1 / (k^2 + beta_a^2). Only the s-wave is defined.
struct SeparableYamaguchi {
  Eigen::MatrixXd strength;
  Eigen::VectorXd beta;
};

/// Local coupling V_ab(r) = depth_ab * exp(-r^2 / range_ab^2).
struct LocalGaussian {
  Eigen::MatrixXd depth;
  Eigen::MatrixXd range;
};

struct ZeroPotential {};

enum class PotentialKind { SeparableYamaguchi, LocalGaussian, Zero };

class PotentialKernel {
 public:
  PotentialKernel() = default;
  PotentialKernel(SeparableYamaguchi p) : impl_(std::move(p)) {}
  PotentialKernel(LocalGaussian p) : impl_(std::move(p)) {}
  PotentialKernel(ZeroPotential p) : impl_(p) {}

  PotentialKind kind() const;
  const SeparableYamaguchi& yamaguchi() const { return std::get<SeparableYamaguchi>(impl_); }
  const LocalGaussian& gaussian() const { return std::get<LocalGaussian>(impl_); }

  /// Coupling matrix block size, or 0 for the zero potential.
  int block_size() const;

  /// Same kernel with every coupling multiplied by `factor`.
  PotentialKernel scaled(double factor) const;

 private:
  std::variant<ZeroPotential, SeparableYamaguchi, LocalGaussian> impl_;
};

std::string_view to_string(PotentialKind kind);

/// Validated multichannel problem: thresholds, couplings and the partial
/// wave shared by all channel pairs. Immutable after construction.
class ModelSpec {
 public:
  /// Throws ValidationError when any invariant fails.
  ModelSpec(std::vector<ChannelSpec> channels, PotentialKernel potential,
            int partial_wave = 0);

  int channel_count() const { return static_cast<int>(channels_.size()); }
  const std::vector<ChannelSpec>& channels() const { return channels_; }
  const ChannelSpec& channel(int alpha) const { return channels_.at(alpha); }
  double threshold(int alpha) const { return channels_.at(alpha).threshold; }
  const PotentialKernel& potential() const { return potential_; }
  int partial_wave() const { return partial_wave_; }

  ModelSpec scaled(double factor) const;

 private:
  std::vector<ChannelSpec> channels_;
  PotentialKernel potential_;
  int partial_wave_ = 0;
};

/// Multi-index selecting one sheet of the energy Riemann surface. Entry
/// alpha is 1 when the branch of sqrt(z - threshold_alpha) is flipped.
class SheetIndex {
 public:
  SheetIndex() = default;
  explicit SheetIndex(std::vector<int> ell);

  static SheetIndex physical(int m) { return SheetIndex(std::vector<int>(m, 0)); }
  /// Parses comma separated bits such as "1,0,1".
  static SheetIndex parse(std::string_view text);

  int size() const { return static_cast<int>(ell_.size()); }
  int operator[](int alpha) const { return ell_.at(alpha); }
  const std::vector<int>& bits() const { return ell_; }
  bool is_physical() const;

  /// Diagonal entries of L, L~ and e(ell).
  int l_factor(int alpha) const { return ell_.at(alpha); }
  int ltilde_factor(int alpha) const { return ell_.at(alpha) == 0 ? 0 : 1; }
  int e_factor(int alpha) const { return ell_.at(alpha) == 1 ? -1 : 1; }
  /// Partial-wave image of the momentum inversion on channel alpha.
  int inversion_factor(int alpha, int partial_wave) const;

  Eigen::MatrixXd L() const;
  Eigen::MatrixXd Ltilde() const;
  Eigen::MatrixXd e() const;

  /// Channels with ell_alpha = 1, ascending.
  std::vector<int> active_channels() const;

  std::string to_string() const;

  auto operator<=>(const SheetIndex&) const = default;

 private:
  std::vector<int> ell_;
};

/// All 2^m sheets in lexicographic order; the first one is the physical sheet.
std::vector<SheetIndex> enumerate_sheets(int m);

/// Physical-sheet branch of sqrt(z - threshold): Im q > 0 off the cut
/// [threshold, inf), and the positive root on the cut's upper rim.
cplx physical_momentum(cplx z, double threshold);

/// Parses and validates a JSON model configuration.
ModelSpec parse_model(std::string_view config_text);

}  // namespace resonax
