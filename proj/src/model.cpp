#include "resonax/model.hpp"

#include <cmath>
#include <set>
#include <sstream>

#include <json.hpp>

#include "resonax/errors.hpp"

namespace resonax {

PotentialKind PotentialKernel::kind() const {
  switch (impl_.index()) {
    case 1:
      return PotentialKind::SeparableYamaguchi;
    case 2:
      return PotentialKind::LocalGaussian;
    default:
      return PotentialKind::Zero;
  }
}

int PotentialKernel::block_size() const {
  switch (kind()) {
    case PotentialKind::SeparableYamaguchi:
      return static_cast<int>(yamaguchi().strength.rows());
    case PotentialKind::LocalGaussian:
      return static_cast<int>(gaussian().depth.rows());
    case PotentialKind::Zero:
      break;
  }
  return 0;
}

PotentialKernel PotentialKernel::scaled(double factor) const {
  switch (kind()) {
    case PotentialKind::SeparableYamaguchi: {
      SeparableYamaguchi p = yamaguchi();
      p.strength *= factor;
      return p;
    }
    case PotentialKind::LocalGaussian: {
      LocalGaussian p = gaussian();
      p.depth *= factor;
      return p;
    }
    case PotentialKind::Zero:
      break;
  }
  return ZeroPotential{};
}

std::string_view to_string(PotentialKind kind) {
  switch (kind) {
    case PotentialKind::SeparableYamaguchi:
      return "yamaguchi";
    case PotentialKind::LocalGaussian:
      return "gaussian";
    case PotentialKind::Zero:
      break;
  }
  return "zero";
}

namespace {

void require_symmetric(const Eigen::MatrixXd& a, const char* what) {
  if (a.rows() != a.cols()) {
    throw ValidationError(std::string(what) + " matrix is not square");
  }
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < i; ++j) {
      if (a(i, j) != a(j, i)) {
        throw ValidationError(std::string(what) + " matrix is not symmetric");
      }
    }
  }
  if (!a.allFinite()) throw ValidationError(std::string(what) + " has non-finite entries");
}

void require_positive(const Eigen::MatrixXd& a, const char* what) {
  for (Eigen::Index i = 0; i < a.size(); ++i) {
    const double r = a.data()[i];
    if (!(r > 0.0) || !std::isfinite(r)) {
      throw ValidationError(std::string(what) + " must be strictly positive");
    }
  }
}

}  // namespace

ModelSpec::ModelSpec(std::vector<ChannelSpec> channels, PotentialKernel potential,
                     int partial_wave)
    : channels_(std::move(channels)), potential_(std::move(potential)),
      partial_wave_(partial_wave) {
  const int m = channel_count();
  if (m < 1) throw ValidationError("at least one channel is required");
  if (partial_wave_ < 0) throw ValidationError("partial_wave must be >= 0");
  for (int a = 0; a < m; ++a) {
    if (channels_[a].dimension != 3) {
      throw ValidationError("channel " + std::to_string(a + 1) +
                            ": only dimension 3 is supported");
    }
    if (!std::isfinite(channels_[a].threshold)) {
      throw ValidationError("channel " + std::to_string(a + 1) + ": threshold is not finite");
    }
    if (a > 0 && !(channels_[a - 1].threshold < channels_[a].threshold)) {
      throw ValidationError("thresholds must be strictly ascending");
    }
    channels_[a].index = a + 1;
  }

  switch (potential_.kind()) {
    case PotentialKind::SeparableYamaguchi: {
      const auto& p = potential_.yamaguchi();
      require_symmetric(p.strength, "strength");
      if (p.strength.rows() != m || p.beta.size() != m) {
        throw ValidationError("yamaguchi block structure does not match channel count");
      }
      require_positive(p.beta, "range");
      break;
    }
    case PotentialKind::LocalGaussian: {
      const auto& p = potential_.gaussian();
      require_symmetric(p.depth, "depth");
      require_symmetric(p.range, "range");
      if (p.depth.rows() != m || p.range.rows() != m) {
        throw ValidationError("gaussian block structure does not match channel count");
      }
      require_positive(p.range, "range");
      break;
    }
    case PotentialKind::Zero:
      break;
  }
}

ModelSpec ModelSpec::scaled(double factor) const {
  return ModelSpec(channels_, potential_.scaled(factor), partial_wave_);
}

SheetIndex::SheetIndex(std::vector<int> ell) : ell_(std::move(ell)) {
  for (int b : ell_) {
    if (b != 0 && b != 1) throw InvalidParameter("sheet index entries must be 0 or 1");
  }
}

SheetIndex SheetIndex::parse(std::string_view text) {
  std::vector<int> bits;
  std::string token;
  std::istringstream in{std::string(text)};
  while (std::getline(in, token, ',')) {
    if (token == "0") {
      bits.push_back(0);
    } else if (token == "1") {
      bits.push_back(1);
    } else {
      throw InvalidParameter("malformed sheet index '" + std::string(text) + "'");
    }
  }
  if (bits.empty()) throw InvalidParameter("empty sheet index");
  return SheetIndex(std::move(bits));
}

bool SheetIndex::is_physical() const {
  for (int b : ell_) {
    if (b != 0) return false;
  }
  return true;
}

int SheetIndex::inversion_factor(int alpha, int partial_wave) const {
  if (ell_.at(alpha) % 2 == 0) return 1;
  return partial_wave % 2 == 0 ? 1 : -1;
}

Eigen::MatrixXd SheetIndex::L() const {
  Eigen::VectorXd d(size());
  for (int a = 0; a < size(); ++a) d(a) = l_factor(a);
  return d.asDiagonal();
}

Eigen::MatrixXd SheetIndex::Ltilde() const {
  Eigen::VectorXd d(size());
  for (int a = 0; a < size(); ++a) d(a) = ltilde_factor(a);
  return d.asDiagonal();
}

Eigen::MatrixXd SheetIndex::e() const {
  Eigen::VectorXd d(size());
  for (int a = 0; a < size(); ++a) d(a) = e_factor(a);
  return d.asDiagonal();
}

std::vector<int> SheetIndex::active_channels() const {
  std::vector<int> out;
  for (int a = 0; a < size(); ++a) {
    if (ell_[a] != 0) out.push_back(a);
  }
  return out;
}

std::string SheetIndex::to_string() const {
  std::string s;
  for (int a = 0; a < size(); ++a) {
    if (a > 0) s += ',';
    s += static_cast<char>('0' + ell_[a]);
  }
  return s;
}

std::vector<SheetIndex> enumerate_sheets(int m) {
  if (m < 1 || m > 30) throw InvalidParameter("channel count out of range");
  std::vector<SheetIndex> out;
  const unsigned long count = 1UL << m;
  out.reserve(count);
  for (unsigned long code = 0; code < count; ++code) {
    std::vector<int> bits(m);
    for (int a = 0; a < m; ++a) bits[a] = static_cast<int>((code >> (m - 1 - a)) & 1UL);
    out.emplace_back(std::move(bits));
  }
  return out;
}

cplx physical_momentum(cplx z, double threshold) {
  const cplx w = z - threshold;
  if (w == cplx(0.0, 0.0)) {
    throw BranchPointError("energy coincides with threshold " + std::to_string(threshold));
  }
  cplx q = std::sqrt(w);
  // std::sqrt has Re >= 0, so real positive w yields the upper-rim root.
  if (q.imag() < 0.0) q = -q;
  return q;
}

// ---------------------------------------------------------------------------
// Configuration parsing

namespace {

using nlohmann::json;

void reject_unknown(const json& obj, std::initializer_list<const char*> allowed,
                    const std::string& where) {
  std::set<std::string> ok(allowed.begin(), allowed.end());
  for (const auto& [key, _] : obj.items()) {
    if (!ok.count(key)) throw SchemaError("unknown key '" + key + "' in " + where);
  }
}

double as_number(const json& v, const std::string& where) {
  if (!v.is_number()) throw SchemaError(where + " must be a number");
  return v.get<double>();
}

Eigen::MatrixXd as_matrix(const json& v, int m, const std::string& where) {
  if (v.is_number() && m == 1) {
    Eigen::MatrixXd out(1, 1);
    out(0, 0) = v.get<double>();
    return out;
  }
  if (!v.is_array()) throw SchemaError(where + " must be a matrix (array of arrays)");
  const int rows = static_cast<int>(v.size());
  if (rows == 0) throw SchemaError(where + " is empty");
  Eigen::MatrixXd out(rows, rows);
  for (int i = 0; i < rows; ++i) {
    const json& row = v[i];
    if (!row.is_array() || static_cast<int>(row.size()) != rows) {
      throw SchemaError(where + " must be a square matrix");
    }
    for (int j = 0; j < rows; ++j) out(i, j) = as_number(row[j], where);
  }
  return out;
}

Eigen::VectorXd as_vector(const json& v, int m, const std::string& where) {
  if (v.is_number() && m == 1) {
    Eigen::VectorXd out(1);
    out(0) = v.get<double>();
    return out;
  }
  if (!v.is_array() || v.empty()) throw SchemaError(where + " must be a non-empty array");
  Eigen::VectorXd out(static_cast<Eigen::Index>(v.size()));
  for (std::size_t i = 0; i < v.size(); ++i) out(i) = as_number(v[i], where);
  return out;
}

const json& required(const json& obj, const char* key, const std::string& where) {
  auto it = obj.find(key);
  if (it == obj.end()) throw SchemaError("missing key '" + std::string(key) + "' in " + where);
  return *it;
}

}  // namespace

ModelSpec parse_model(std::string_view config_text) {
  json doc;
  try {
    doc = json::parse(config_text);
  } catch (const json::parse_error& e) {
    throw SchemaError(std::string("malformed JSON: ") + e.what());
  }
  if (!doc.is_object()) throw SchemaError("top level must be an object");
  reject_unknown(doc, {"channels", "potential", "partial_wave", "grid", "solver"}, "config");

  const json& jch = required(doc, "channels", "config");
  if (!jch.is_array()) throw SchemaError("'channels' must be an array");
  std::vector<ChannelSpec> channels;
  for (std::size_t i = 0; i < jch.size(); ++i) {
    const json& c = jch[i];
    const std::string where = "channels[" + std::to_string(i) + "]";
    if (!c.is_object()) throw SchemaError(where + " must be an object");
    reject_unknown(c, {"threshold", "dimension"}, where);
    ChannelSpec spec;
    spec.index = static_cast<int>(i) + 1;
    spec.threshold = as_number(required(c, "threshold", where), where + ".threshold");
    if (c.contains("dimension")) {
      if (!c["dimension"].is_number_integer()) throw SchemaError(where + ".dimension must be an integer");
      spec.dimension = c["dimension"].get<int>();
    }
    channels.push_back(spec);
  }
  const int m = static_cast<int>(channels.size());

  int partial_wave = 0;
  if (doc.contains("partial_wave")) {
    if (!doc["partial_wave"].is_number_integer()) throw SchemaError("'partial_wave' must be an integer");
    partial_wave = doc["partial_wave"].get<int>();
  }

  const json& jp = required(doc, "potential", "config");
  if (!jp.is_object()) throw SchemaError("'potential' must be an object");
  const json& jkind = required(jp, "kind", "potential");
  if (!jkind.is_string()) throw SchemaError("potential.kind must be a string");
  const std::string kind = jkind.get<std::string>();

  PotentialKernel potential;
  if (kind == "zero") {
    reject_unknown(jp, {"kind"}, "potential");
    potential = ZeroPotential{};
  } else if (kind == "yamaguchi") {
    reject_unknown(jp, {"kind", "strength", "range"}, "potential");
    SeparableYamaguchi p;
    p.strength = as_matrix(required(jp, "strength", "potential"), m, "potential.strength");
    p.beta = as_vector(required(jp, "range", "potential"), m, "potential.range");
    if (partial_wave != 0) {
      throw ValidationError("yamaguchi form factors are defined for partial_wave 0 only");
    }
    potential = std::move(p);
  } else if (kind == "gaussian") {
    reject_unknown(jp, {"kind", "depth", "range"}, "potential");
    LocalGaussian p;
    p.depth = as_matrix(required(jp, "depth", "potential"), m, "potential.depth");
    p.range = as_matrix(required(jp, "range", "potential"), m, "potential.range");
    potential = std::move(p);
  } else {
    throw SchemaError("unknown potential kind '" + kind + "'");
  }

  return ModelSpec(std::move(channels), std::move(potential), partial_wave);
}

}  // namespace resonax
