#pragma once

// Pearson correlation with the Student-t significance test.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "icmetrics/error.hpp"
#include "icmetrics/model.hpp"

namespace icm {

struct CorrelationResult {
  Metric metric;
  double r;             // NaN when undefined
  double p_two_tailed;  // 1.0 whenever r is NaN
  std::size_t n;

  friend bool operator==(const CorrelationResult& a, const CorrelationResult& b) {
    auto same = [](double x, double y) { return (std::isnan(x) && std::isnan(y)) || x == y; };
    return a.metric == b.metric && same(a.r, b.r) && same(a.p_two_tailed, b.p_two_tailed) && a.n == b.n;
  }
};

namespace stats_detail {

inline constexpr double kBetaTolerance = 1e-14;
inline constexpr int kBetaMaxIterations = 300;

inline double log_gamma(double x) {
#if defined(__GLIBC__)
  int sign;
  return ::lgamma_r(x, &sign);  // reentrant, unlike std::lgamma's signgam
#else
  return std::lgamma(x);
#endif
}

// Modified Lentz evaluation of the incomplete-beta continued fraction.
inline double beta_continued_fraction(double a, double b, double x) {
  constexpr double tiny = 1e-300;
  const double qab = a + b, qap = a + 1.0, qam = a - 1.0;
  double c = 1.0;
  double d = 1.0 - qab * x / qap;
  if (std::fabs(d) < tiny) d = tiny;
  d = 1.0 / d;
  double h = d;
  for (int m = 1; m <= kBetaMaxIterations; ++m) {
    const int m2 = 2 * m;
    double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
    d = 1.0 + aa * d;
    if (std::fabs(d) < tiny) d = tiny;
    c = 1.0 + aa / c;
    if (std::fabs(c) < tiny) c = tiny;
    d = 1.0 / d;
    h *= d * c;
    aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
    d = 1.0 + aa * d;
    if (std::fabs(d) < tiny) d = tiny;
    c = 1.0 + aa / c;
    if (std::fabs(c) < tiny) c = tiny;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::fabs(del - 1.0) < kBetaTolerance) return h;
  }
  throw Error("internal: incomplete beta continued fraction did not converge (a=" + std::to_string(a) +
              ", b=" + std::to_string(b) + ", x=" + std::to_string(x) + ")");
}

// I_x(a, b) given both x and y = 1 - x, so callers can supply whichever
// complement they know exactly.
inline double incomplete_beta(double a, double b, double x, double y) {
  if (x <= 0.0) return 0.0;
  if (y <= 0.0) return 1.0;
  const double log_front =
      log_gamma(a + b) - log_gamma(a) - log_gamma(b) + a * std::log(x) + b * std::log(y);
  const double front = std::exp(log_front);
  if (x < (a + 1.0) / (a + b + 2.0)) return front * beta_continued_fraction(a, b, x) / a;
  return 1.0 - front * beta_continued_fraction(b, a, y) / b;
}

}  // namespace stats_detail

// Regularized incomplete beta function I_x(a, b), a, b > 0, x in [0, 1].
inline double regularized_incomplete_beta(double a, double b, double x) {
  if (!(a > 0.0) || !(b > 0.0)) throw PreconditionError("incomplete beta requires a, b > 0");
  if (!(x >= 0.0 && x <= 1.0)) throw PreconditionError("incomplete beta requires 0 <= x <= 1");
  return stats_detail::incomplete_beta(a, b, x, 1.0 - x);
}

// P(T >= |t|) + P(T <= -|t|) for Student's t with df degrees of freedom.
inline double student_t_two_tailed(double t, double df) {
  if (std::isnan(t)) return 1.0;
  if (std::isinf(t)) return 0.0;
  const double t2 = t * t;
  return stats_detail::incomplete_beta(df / 2.0, 0.5, df / (df + t2), t2 / (df + t2));
}

inline double student_t_cdf(double t, double df) {
  if (std::isnan(t)) return std::numeric_limits<double>::quiet_NaN();
  const double tail = 0.5 * student_t_two_tailed(t, df);
  return t > 0.0 ? 1.0 - tail : tail;
}

// Sample Pearson correlation; NaN when n < 3 or either series is constant.
inline double pearson_r(std::span<const double> xs, std::span<const double> ys) {
  if (xs.size() != ys.size())
    throw PreconditionError("pearson_r: series lengths differ (" + std::to_string(xs.size()) + " vs " +
                            std::to_string(ys.size()) + ")");
  constexpr double nan = std::numeric_limits<double>::quiet_NaN();
  const std::size_t n = xs.size();
  if (n < 3) return nan;
  auto constant = [](std::span<const double> v) {
    return std::all_of(v.begin(), v.end(), [&](double x) { return x == v.front(); });
  };
  if (constant(xs) || constant(ys)) return nan;

  double mx = 0, my = 0;
  for (std::size_t i = 0; i < n; ++i) {
    mx += xs[i];
    my += ys[i];
  }
  mx /= static_cast<double>(n);
  my /= static_cast<double>(n);
  double sxy = 0, sxx = 0, syy = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const double dx = xs[i] - mx, dy = ys[i] - my;
    sxy += dx * dy;
    sxx += dx * dx;
    syy += dy * dy;
  }
  if (sxx == 0.0 || syy == 0.0) return nan;
  return std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
}

// t = r sqrt((n-2) / (1-r^2)), df = n-2.
inline double p_two_tailed(double r, std::size_t n) {
  if (std::isnan(r) || n < 3) return 1.0;
  const double ar = std::fabs(r);
  if (ar >= 1.0) return 0.0;
  const double df = static_cast<double>(n - 2);
  const double t = ar * std::sqrt(df / ((1.0 - ar) * (1.0 + ar)));
  return std::clamp(student_t_two_tailed(t, df), 0.0, 1.0);
}

inline CorrelationResult correlate(Metric metric, std::span<const double> xs, std::span<const double> ys) {
  const double r = pearson_r(xs, ys);
  return {metric, r, p_two_tailed(r, xs.size()), xs.size()};
}

inline double median(std::vector<double> values) {
  if (values.empty()) throw PreconditionError("median of an empty series");
  const auto mid = values.size() / 2;
  std::nth_element(values.begin(), values.begin() + static_cast<std::ptrdiff_t>(mid), values.end());
  const double upper = values[mid];
  if (values.size() % 2 == 1) return upper;
  const double lower = *std::max_element(values.begin(), values.begin() + static_cast<std::ptrdiff_t>(mid));
  return (lower + upper) / 2.0;
}

inline double activity_ratio(std::uint64_t n_releases, std::uint64_t n_bugs) {
  if (n_bugs == 0) throw PreconditionError("activity_ratio: project has no fixed bugs");
  return static_cast<double>(n_releases) / static_cast<double>(n_bugs);
}

}  // namespace icm
