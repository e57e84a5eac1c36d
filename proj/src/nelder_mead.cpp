#include "quditsim/nelder_mead.hpp"

#include "quditsim/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace quditsim {

namespace {

constexpr double kReflect = 1.0;
constexpr double kExpand = 2.0;
constexpr double kContract = 0.5;
constexpr double kShrink = 0.5;

using Point = std::vector<double>;

Point affine(const Point& a, const Point& b, double t) {
  Point out(a.size());
  for (size_t i = 0; i < a.size(); ++i) out[i] = a[i] + t * (b[i] - a[i]);
  return out;
}

}  // namespace

NelderMeadResult nelder_mead(const Objective& f, const std::vector<double>& x0, const NelderMeadOptions& opts) {
  if (x0.empty()) throw ConfigError("nelder_mead: empty parameter vector");
  if (!(opts.f_tolerance > 0.0) || !(opts.x_tolerance > 0.0)) {
    throw ConfigError("nelder_mead: tolerances must be positive");
  }
  const size_t n = x0.size();
  NelderMeadResult res;
  auto eval = [&](const Point& x) {
    ++res.evaluations;
    return f(x);
  };

  std::vector<Point> simplex(n + 1, x0);
  std::vector<double> values(n + 1);
  for (size_t i = 0; i < n; ++i) simplex[i + 1][i] += opts.initial_step;
  for (size_t i = 0; i <= n; ++i) values[i] = eval(simplex[i]);

  std::vector<size_t> order(n + 1);
  while (true) {
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](size_t a, size_t b) { return values[a] < values[b]; });
    const size_t best = order.front();
    const size_t worst = order.back();
    const size_t second = order[n - 1];

    double diameter = 0.0;
    for (size_t i = 0; i <= n; ++i) {
      double d = 0.0;
      for (size_t k = 0; k < n; ++k) d = std::max(d, std::abs(simplex[i][k] - simplex[best][k]));
      diameter = std::max(diameter, d);
    }
    if (values[worst] - values[best] <= opts.f_tolerance && diameter <= opts.x_tolerance) {
      res.converged = true;
      break;
    }
    if (res.evaluations >= opts.max_evaluations) break;

    Point centroid(n, 0.0);
    for (size_t i = 0; i <= n; ++i) {
      if (i == worst) continue;
      for (size_t k = 0; k < n; ++k) centroid[k] += simplex[i][k] / static_cast<double>(n);
    }

    const Point xr = affine(centroid, simplex[worst], -kReflect);
    const double fr = eval(xr);
    if (fr < values[best]) {
      const Point xe = affine(centroid, simplex[worst], -kExpand);
      const double fe = eval(xe);
      if (fe < fr) {
        simplex[worst] = xe;
        values[worst] = fe;
      } else {
        simplex[worst] = xr;
        values[worst] = fr;
      }
    } else if (fr < values[second]) {
      simplex[worst] = xr;
      values[worst] = fr;
    } else {
      bool shrink = false;
      if (fr < values[worst]) {
        const Point xc = affine(centroid, xr, kContract);
        const double fc = eval(xc);
        if (fc <= fr) {
          simplex[worst] = xc;
          values[worst] = fc;
        } else {
          shrink = true;
        }
      } else {
        const Point xc = affine(centroid, simplex[worst], kContract);
        const double fc = eval(xc);
        if (fc < values[worst]) {
          simplex[worst] = xc;
          values[worst] = fc;
        } else {
          shrink = true;
        }
      }
      if (shrink) {
        for (size_t i = 0; i <= n; ++i) {
          if (i == best) continue;
          simplex[i] = affine(simplex[best], simplex[i], kShrink);
          values[i] = eval(simplex[i]);
        }
      }
    }
    ++res.iterations;
    const double current = *std::min_element(values.begin(), values.end());
    res.trace.push_back(res.trace.empty() ? current : std::min(res.trace.back(), current));
  }

  const size_t best = static_cast<size_t>(std::min_element(values.begin(), values.end()) - values.begin());
  res.x = simplex[best];
  res.value = values[best];
  if (res.trace.empty()) res.trace.push_back(res.value);
  return res;
}

}  // namespace quditsim
