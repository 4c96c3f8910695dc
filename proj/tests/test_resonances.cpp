#include <doctest.h>

#include <numbers>

#include "closed_forms.hpp"
#include "resonax/errors.hpp"
#include "resonax/resonances.hpp"
#include "resonax/smatrix.hpp"

using namespace resonax;

namespace {

ModelSpec yamaguchi(const Eigen::MatrixXd& l, const std::vector<double>& beta,
                    const std::vector<double>& thr) {
  std::vector<ChannelSpec> ch;
  for (std::size_t a = 0; a < thr.size(); ++a) ch.push_back({int(a) + 1, thr[a], 3});
  return ModelSpec(ch, SeparableYamaguchi{l, Eigen::Map<const Eigen::VectorXd>(beta.data(), beta.size())});
}

ModelSpec single(double lambda) {
  Eigen::MatrixXd l(1, 1);
  l << lambda;
  return yamaguchi(l, {1.0}, {0.0});
}

SearchRegion rect(double a, double b, double c, double d, int n = 16) {
  SearchRegion r;
  r.re_min = a;
  r.re_max = b;
  r.im_min = c;
  r.im_max = d;
  r.grid_nx = n;
  r.grid_ny = n;
  return r;
}

const double kVirtual = -std::pow(1.0 + std::sqrt(std::numbers::pi / 2.0), 2.0);

}  // namespace

TEST_CASE("region validation") {
  const ModelSpec m({{1, 0.0, 3}, {2, 1.0, 3}}, ZeroPotential{});
  CHECK_NOTHROW(validate_region(m, rect(-2.0, -1.0, -1.0, 1.0)));
  CHECK_THROWS_AS(validate_region(m, rect(-1.0, 0.5, -1.0, 1.0)), InvalidRegion);
  CHECK_THROWS_AS(validate_region(m, rect(0.5, 1.5, -1.0, 0.0)), InvalidRegion);
  CHECK_THROWS_AS(validate_region(m, rect(-1.0, -2.0, -1.0, 1.0)), InvalidRegion);
  CHECK_THROWS_AS(validate_region(m, rect(-2.0, -1.0, 0.0, 0.0)), InvalidRegion);
  SearchRegion r = rect(-2.0, -1.0, -1.0, 1.0);
  r.grid_nx = 0;
  CHECK_THROWS_AS(validate_region(m, r), InvalidRegion);
  // off the real axis a threshold abscissa is fine
  CHECK_NOTHROW(validate_region(m, rect(-1.0, 2.0, -2.0, -0.5)));
}

TEST_CASE("region parsing") {
  const SearchRegion r = parse_region("-7,-3.5,-1,1");
  CHECK(r.re_min == -7.0);
  CHECK(r.re_max == -3.5);
  CHECK(r.im_min == -1.0);
  CHECK(r.im_max == 1.0);
  CHECK_THROWS_AS(parse_region("1,2,3"), InvalidRegion);
  CHECK_THROWS_AS(parse_region("1,0,0,1"), InvalidRegion);
  CHECK_THROWS_AS(parse_region("a,b,c,d"), InvalidRegion);
}

TEST_CASE("scan of the zero potential is identically one") {
  const Problem p(ModelSpec({{1, 0.0, 3}, {2, 0.5, 3}}, ZeroPotential{}), build_grid(16, 1.0));
  const ScanGrid g = scan(p, rect(-2.0, 2.0, -1.0, -0.1, 5), SheetIndex::parse("1,1"));
  REQUIRE(g.points.size() == 25);
  for (const auto& pt : g.points) CHECK(pt.value == cplx(1.0, 0.0));
  CHECK(g.at(1, 0).z.real() > g.at(0, 0).z.real());
  CHECK(g.at(0, 1).z.imag() > g.at(0, 0).z.imag());
}

TEST_CASE("scan minimum sits next to the closed-form root") {
  const Problem p(single(-2.0), build_grid(100, 1.0));
  const SearchRegion r = rect(-7.0, -3.5, -1.0, 1.0, 14);
  const ScanGrid g = scan(p, r, SheetIndex::parse("1"));
  std::size_t best = 0;
  for (std::size_t k = 0; k < g.points.size(); ++k) {
    CHECK(std::isfinite(std::abs(g.points[k].value)));
    if (std::abs(g.points[k].value) < std::abs(g.points[best].value)) best = k;
  }
  CHECK(std::abs(g.points[best].z.real() - kVirtual) <= 1.5 * r.cell_width());
  CHECK(std::abs(g.points[best].z.imag()) <= 1.5 * r.cell_height());
}

TEST_CASE("winding count") {
  const Problem zero(ModelSpec({{1, 0.0, 3}}, ZeroPotential{}), build_grid(16, 1.0));
  CHECK(count_zeros(zero, rect(-3.0, -1.0, -1.0, 1.0), SheetIndex::parse("1")) == 0);

  const Problem p(single(-2.0), build_grid(100, 1.0));
  CHECK(count_zeros(p, rect(-7.0, -3.5, -1.0, 1.0), SheetIndex::parse("1")) == 1);
  CHECK(count_zeros(p, rect(-7.0, -3.5, -1.0, 1.0), SheetIndex::parse("0")) == 0);
  CHECK(count_zeros(p, rect(-3.0, -1.5, -1.0, 1.0), SheetIndex::parse("1")) == 0);
  // physical bound state counted through the Fredholm determinant
  CHECK(count_zeros(p, rect(-0.5, -0.01, -0.3, 0.3), SheetIndex::parse("0"),
                    RootTarget::FredholmDeterminant) == 1);

  CHECK_THROWS_AS(count_zeros(p, rect(-2.0, 1.0, -1.0, -0.5), SheetIndex::parse("2")), InvalidParameter);
}

TEST_CASE("count rejects contours that meet the cut or pass through a zero") {
  const Problem p(single(-2.0), build_grid(100, 1.0));
  CHECK_THROWS_AS(count_zeros(p, rect(0.5, 2.0, -1.0, 1.0), SheetIndex::parse("1")), InvalidRegion);
  // right edge through the root
  CHECK_THROWS_AS(count_zeros(p, rect(-7.0, kVirtual, -1.0, 1.0), SheetIndex::parse("1")),
                  ContourTooClose);
}

TEST_CASE("refine reproduces the closed-form virtual state") {
  const Problem p(single(-2.0), build_grid(100, 1.0));
  const ResonanceResult r = refine(p, {-5.3, 0.2}, SheetIndex::parse("1"));
  CHECK(std::abs(r.z_star.real() - kVirtual) < 1e-8);
  CHECK(std::abs(r.z_star.imag()) < 1e-8);
  CHECK(r.residual < 1e-10);
  CHECK(r.kind == ResonanceKind::VirtualState);
  REQUIRE(r.null_vector.size() == 1);
  CHECK(r.null_vector(0) == cplx(1.0, 0.0));
  CHECK(r.gamow_coeffs(0) == cplx(std::sqrt(std::numbers::pi / 2.0), 0.0));
}

TEST_CASE("refine fails cleanly without a zero") {
  const Problem zero(ModelSpec({{1, 0.0, 3}}, ZeroPotential{}), build_grid(16, 1.0));
  CHECK_THROWS_AS(refine(zero, {-2.0, 0.5}, SheetIndex::parse("1")), NoConvergence);
}

TEST_CASE("Gamow coefficients") {
  for (cplx z : {cplx(-1.0, 0.0), cplx(0.3, -0.7), cplx(5.0, -2.0)}) {
    for (int ell : {0, 1}) CHECK(gamow_coefficient(z, 0.0, 3, ell) == std::sqrt(std::numbers::pi / 2.0));
  }
  // other dimensions pick up the phase and the power of the momentum
  const cplx c = gamow_coefficient({4.0, 0.0}, 0.0, 5, 1);
  CHECK(std::abs(c - std::sqrt(std::numbers::pi / 2.0) * cplx(0.0, 1.0) * 2.0) < 1e-14);
}

TEST_CASE("classification") {
  const ModelSpec m = single(-2.0);
  ResonanceResult r;
  r.sheet = SheetIndex::parse("0");
  r.z_star = {-0.5, 0.0};
  CHECK(classify(r, m) == ResonanceKind::BoundState);
  r.sheet = SheetIndex::parse("1");
  r.z_star = {-0.02, 0.0};
  CHECK(classify(r, m) == ResonanceKind::VirtualState);
  r.z_star = {1.3, -0.2};
  CHECK(classify(r, m) == ResonanceKind::Resonance);
  CHECK(to_string(ResonanceKind::VirtualState) == "virtual_state");
}

TEST_CASE("two-channel resonances: roots, null vectors and amplitudes") {
  Eigen::MatrixXd l(2, 2);
  l << 1.0, 0.5, 0.5, 2.0;
  const Problem p(yamaguchi(l, {1.0, 1.0}, {0.0, 1.0}), build_grid(100, 1.0));
  const closed::Separable oracle{l, {1.0, 1.0}, {0.0, 1.0}};
  const SheetIndex sheet = SheetIndex::parse("1,1");
  const FindResult found = find_resonances(p, rect(-1.0, 3.0, -3.5, -0.5, 16), sheet);
  CHECK(found.count == 2);
  CHECK(found.warning.empty());
  REQUIRE(found.roots.size() == 2);
  CHECK(found.roots[0].z_star.real() < found.roots[1].z_star.real());
  for (const auto& r : found.roots) {
    CHECK(std::abs(oracle.condition(r.z_star, {1, 1})) < 1e-9);
    CHECK(r.kind == ResonanceKind::Resonance);
    CHECK(std::abs(r.null_vector.norm() - 1.0) < 1e-14);
    const SMatrixSet set = build_smatrix(solve_halfshell(p, r.z_star), sheet);
    CHECK((set.truncated * r.null_vector).norm() < 1e-6 * set.truncated.norm());
    CHECK((r.extended - r.null_vector).norm() < 1e-8);
    CHECK(!r.degenerate_null);
  }
}

TEST_CASE("partially flipped sheet: null vector vanishes on closed channels") {
  Eigen::MatrixXd l(2, 2);
  l << -1.0, 0.3, 0.3, -3.0;
  const Problem p(yamaguchi(l, {1.0, 1.0}, {0.0, 1.0}), build_grid(100, 1.0));
  const SheetIndex sheet = SheetIndex::parse("1,0");
  const ResonanceResult r = refine(p, {0.72, -0.01}, sheet);
  CHECK(r.kind == ResonanceKind::Resonance);
  CHECK(r.null_vector(1) == cplx(0.0, 0.0));
  CHECK(r.null_vector(0) == cplx(1.0, 0.0));
  // extended amplitude completes the closed channel
  CHECK(std::abs(r.extended(1)) > 1.0);
  CHECK(std::abs(r.extended(0) - r.null_vector(0)) < 1e-8);
}

TEST_CASE("weak inter-channel coupling perturbs the uncoupled root at second order") {
  const SheetIndex sheet = SheetIndex::parse("1,1");
  const cplx uncoupled{kVirtual + 1.0, 0.0};  // channel-2 virtual state
  auto root_for = [&](double g) {
    Eigen::MatrixXd l(2, 2);
    l << 0.5, g, g, -2.0;
    const Problem p(yamaguchi(l, {1.0, 1.0}, {0.0, 1.0}), build_grid(100, 1.0));
    return refine(p, uncoupled + 0.05, sheet);
  };
  const ResonanceResult a = root_for(0.02), b = root_for(0.04);
  const double da = std::abs(a.z_star - uncoupled), db = std::abs(b.z_star - uncoupled);
  CHECK(da > 0.0);
  CHECK(std::abs(db / da - 4.0) < 0.1);
  CHECK(std::abs(a.null_vector(1)) > 0.99);
}

TEST_CASE("property: conjugate pairing of roots for real couplings") {
  Eigen::MatrixXd l(2, 2);
  l << 1.0, 0.5, 0.5, 2.0;
  const Problem p(yamaguchi(l, {1.0, 1.0}, {0.0, 1.0}), build_grid(100, 1.0));
  const SheetIndex sheet = SheetIndex::parse("1,1");
  const ResonanceResult lower = refine(p, {-0.3, -1.6}, sheet);
  const ResonanceResult upper = refine(p, {-0.3, 1.6}, sheet);
  CHECK(std::abs(upper.z_star - std::conj(lower.z_star)) < 1e-8);
}

TEST_CASE("property: count equals the number of refined roots") {
  Eigen::MatrixXd l(2, 2);
  l << -1.0, 0.3, 0.3, -3.0;
  const Problem p(yamaguchi(l, {1.0, 1.0}, {0.0, 1.0}), build_grid(100, 1.0));
  struct Case { const char* sheet; SearchRegion region; };
  for (const Case& c : {Case{"1,0", rect(0.5, 0.9, -0.2, -0.001, 10)},
                        Case{"1,1", rect(-5.0, -2.0, -1.0, 1.0, 12)},
                        Case{"0,1", rect(-3.0, -0.5, -1.0, -0.2, 10)}}) {
    const FindResult f = find_resonances(p, c.region, SheetIndex::parse(c.sheet));
    CHECK(f.count == static_cast<int>(f.roots.size()));
    CHECK(f.warning.empty());
    for (const auto& r : f.roots) CHECK(r.residual < 1e-10);
  }
}

TEST_CASE("bound states through the Fredholm determinant") {
  const Problem p(single(-2.0), build_grid(100, 1.0));
  const FindResult f = find_resonances(p, rect(-1.0, -0.01, -0.3, 0.3, 8), SheetIndex::parse("0"),
                                       RootTarget::FredholmDeterminant);
  REQUIRE(f.roots.size() == 1);
  CHECK(f.roots[0].kind == ResonanceKind::BoundState);
  CHECK(std::abs(f.roots[0].z_star + std::pow(std::sqrt(std::numbers::pi / 2.0) - 1.0, 2.0)) < 1e-10);
  CHECK(f.roots[0].null_vector.norm() == 0.0);
}
