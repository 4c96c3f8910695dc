#include "resonax/roots.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <vector>

#include "resonax/errors.hpp"

namespace resonax {

cplx SearchRegion::cell(int i, int j) const {
  return {re_min + (i + 0.5) * cell_width(), im_min + (j + 0.5) * cell_height()};
}

SearchRegion parse_region(const std::string& text) {
  std::vector<double> v;
  std::stringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) {
    try {
      std::size_t used = 0;
      v.push_back(std::stod(item, &used));
      if (used != item.size()) throw InvalidRegion("bad number '" + item + "'");
    } catch (const std::logic_error&) {
      throw InvalidRegion("bad number '" + item + "'");
    }
  }
  if (v.size() != 4) throw InvalidRegion("expected re_min,re_max,im_min,im_max");
  SearchRegion r;
  r.re_min = v[0];
  r.re_max = v[1];
  r.im_min = v[2];
  r.im_max = v[3];
  if (!(r.re_min < r.re_max) || !(r.im_min < r.im_max)) {
    throw InvalidRegion("degenerate rectangle " + text);
  }
  return r;
}

MullerResult muller(const ComplexFunction& f, cplx z0, double spread,
                    const MullerOptions& options) {
  cplx x0 = z0 - spread, x1 = z0 + cplx(0.0, spread), x2 = z0;
  cplx f0 = f(x0), f1 = f(x1), f2 = f(x2);

  MullerResult r;
  r.z = x2;
  r.value = f2;
  int polish = -1;
  double last_step = HUGE_VAL;

  for (int it = 1; it <= options.max_iterations; ++it) {
    r.iterations = it;
    const cplx h1 = x1 - x0, h2 = x2 - x1;
    const cplx d1 = (f1 - f0) / h1, d2 = (f2 - f1) / h2;
    const cplx a = (d2 - d1) / (h2 + h1);
    const cplx b = a * h2 + d2;
    const cplx disc = std::sqrt(b * b - 4.0 * a * f2);
    const cplx den = std::abs(b + disc) >= std::abs(b - disc) ? b + disc : b - disc;
    cplx dx;
    if (std::abs(den) == 0.0) {
      dx = std::max(1.0, std::abs(x2)) * 1e-3;  // flat spot, nudge
    } else {
      dx = -2.0 * f2 / den;
    }
    const cplx x3 = x2 + dx;
    const cplx f3 = f(x3);
    if (!std::isfinite(std::abs(f3))) return r;

    x0 = x1; f0 = f1;
    x1 = x2; f1 = f2;
    x2 = x3; f2 = f3;
    if (std::abs(f2) <= std::abs(r.value) || polish < 0) {
      r.z = x2;
      r.value = f2;
    }

    const double step = std::abs(dx);
    if (step < options.step_tol * std::max(1.0, std::abs(x2))) {
      r.converged = true;
      return r;
    }
    if (std::abs(r.value) < options.f_tol) {
      if (polish < 0) polish = 0;
      if (++polish > options.polish_steps || step >= last_step) {
        r.converged = true;
        return r;
      }
    }
    last_step = step;
  }
  r.converged = std::abs(r.value) < options.f_tol;
  return r;
}

}  // namespace resonax
