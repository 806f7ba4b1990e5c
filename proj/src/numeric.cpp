#include "logmeasure/numeric.hpp"

#include <algorithm>

#include "logmeasure/error.hpp"

namespace logmeasure {

double logplus_kernel(double s) {
  if (!(s > 0.0)) throw Error(ErrorCode::NonpositiveDistance, "kernel distance must be positive");
  return s >= 1.0 ? 0.0 : -std::log(s);
}

double compensated_sum(std::span<const double> values) {
  CompensatedSum acc;
  for (double v : values) acc.add(v);
  return acc.value();
}

double ordered_sum(std::vector<double> values) {
  std::sort(values.begin(), values.end(), [](double a, double b) { return std::fabs(a) > std::fabs(b); });
  return compensated_sum(values);
}

double log_sum_exp(std::span<const double> log_values) {
  if (log_values.empty()) return -kInf;
  double top = *std::max_element(log_values.begin(), log_values.end());
  if (!std::isfinite(top)) return top;
  CompensatedSum acc;
  for (double v : log_values) acc.add(std::exp(v - top));
  return top + std::log(acc.value());
}

LineFit fit_line(std::span<const double> x, std::span<const double> y) {
  const std::size_t n = std::min(x.size(), y.size());
  LineFit fit;
  if (n < 2) return fit;
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= static_cast<double>(n);
  my /= static_cast<double>(n);
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  fit.slope = sxx > 0.0 ? sxy / sxx : 0.0;
  fit.intercept = my - fit.slope * mx;
  for (std::size_t i = 0; i < n; ++i)
    fit.max_residual = std::max(fit.max_residual, std::fabs(y[i] - fit.intercept - fit.slope * x[i]));
  return fit;
}

bool series_diverges(std::span<const double> log_terms, std::size_t window) {
  if (log_terms.size() < 3) return false;
  const std::size_t w = std::min(std::max<std::size_t>(window, 3), log_terms.size());
  auto tail = log_terms.subspan(log_terms.size() - w);
  std::vector<double> idx(w);
  for (std::size_t i = 0; i < w; ++i) idx[i] = static_cast<double>(i);
  // Terms that are -inf (exact zeros) make the series trivially convergent.
  for (double v : tail)
    if (v == -kInf) return false;
  const LineFit fit = fit_line(idx, tail);
  double scale = 0.0;
  for (double v : tail) scale = std::max(scale, std::fabs(v));
  return fit.slope >= -1e-9 * std::max(1.0, scale);
}

}  // namespace logmeasure
