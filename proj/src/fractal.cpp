#include "logmeasure/fractal.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <ostream>

#include "logmeasure/error.hpp"
#include "logmeasure/numeric.hpp"

namespace logmeasure {

namespace {

// Smallest positive normal double; ratios below it are treated as zero.
const double kMinNormalLog = std::log(std::numeric_limits<double>::min());

double general_width_log(double beta, std::size_t n) {
  return n == 0 ? 0.0 : -std::pow(2.0, static_cast<double>(n) / beta);
}

}  // namespace

CantorSpec::CantorSpec(CantorFamily family, double K, double beta, std::size_t depth)
    : family_(family), K_(K), beta_(beta) {
  ratio_logs_.resize(depth);
  if (family_ == CantorFamily::StandardK) {
    std::fill(ratio_logs_.begin(), ratio_logs_.end(), -std::log(K_));
    return;
  }
  // Levels up to n* share one ratio so that every c_k < 1/2; from n* on the
  // widths follow ln d_n = -2^{n/β} exactly.
  const std::size_t horizon = std::max<std::size_t>(depth, 64);
  std::size_t split = 1;
  for (; split < horizon; ++split) {
    const double shared = general_width_log(beta_, split) / static_cast<double>(split);
    if (shared >= -std::numbers::ln2) continue;
    bool tail_ok = true;
    for (std::size_t m = split + 1; m <= horizon && tail_ok; ++m)
      tail_ok = general_width_log(beta_, m) - general_width_log(beta_, m - 1) < -std::numbers::ln2;
    if (tail_ok) break;
  }
  const double shared = general_width_log(beta_, split) / static_cast<double>(split);
  for (std::size_t n = 1; n <= depth; ++n)
    ratio_logs_[n - 1] =
        n <= split ? shared : general_width_log(beta_, n) - general_width_log(beta_, n - 1);
}

CantorSpec CantorSpec::standard(double K, std::size_t depth) {
  if (!(K > 2.0)) throw Error(ErrorCode::BadParams, "standard Cantor family needs K > 2");
  return CantorSpec(CantorFamily::StandardK, K, 0.0, depth);
}

CantorSpec CantorSpec::general(double beta, std::size_t depth) {
  if (!(beta > 1.0)) throw Error(ErrorCode::BadParams, "general Cantor family needs beta > 1");
  return CantorSpec(CantorFamily::GeneralRatio, 0.0, beta, depth);
}

CantorSpec CantorSpec::with_depth(std::size_t depth) const {
  return CantorSpec(family_, K_, beta_, depth);
}

double CantorSpec::width_log(std::size_t n) const {
  if (n > depth()) throw Error(ErrorCode::DepthExceeded, "width requested beyond construction depth");
  if (family_ == CantorFamily::StandardK) return -static_cast<double>(n) * std::log(K_);
  // Exact formula wherever the shared early ratio is not in use.
  double acc = 0.0;
  for (std::size_t k = 0; k < n; ++k) acc += ratio_logs_[k];
  const double exact = general_width_log(beta_, n);
  return std::fabs(acc - exact) <= 1e-9 * std::max(1.0, std::fabs(exact)) ? exact : acc;
}

double CantorSpec::ratio(std::size_t n) const {
  const double l = ratio_logs_.at(n - 1);
  return l < kMinNormalLog ? 0.0 : std::exp(l);
}

double gamma_level(const CantorSpec& spec, double x, std::size_t n) {
  if (n > spec.depth()) throw Error(ErrorCode::DepthExceeded, "level exceeds construction depth");
  if (!(x > 0.0)) return 0.0;
  if (x >= 1.0) return 1.0;
  constexpr double kSnap = 4.0 * std::numeric_limits<double>::epsilon();
  double acc = 0.0;
  double scale = 1.0;
  const bool standard = spec.family() == CantorFamily::StandardK;
  const double K = spec.K();
  for (std::size_t k = 1; k <= n; ++k) {
    if (standard) {
      const double y = x * K;
      if (y < 1.0) {
        x = y;
      } else if (y <= K - 1.0) {
        return acc + 0.5 * scale;
      } else {
        acc += 0.5 * scale;
        x = y - (K - 1.0);
      }
    } else {
      const double c = spec.ratio(k);
      if (c == 0.0) return acc + 0.5 * scale;  // gap plateau below representable scale
      if (x < c) {
        x /= c;
      } else if (x <= 1.0 - c) {
        return acc + 0.5 * scale;
      } else {
        acc += 0.5 * scale;
        x = (x - (1.0 - c)) / c;
      }
    }
    scale *= 0.5;
    if (x >= 1.0 - kSnap) return acc + scale;
    if (!(x > 0.0)) return acc;
  }
  return acc + scale * x;
}

MonotoneCDF cantor_cdf(const CantorSpec& spec) {
  if (spec.depth() < 1) throw Error(ErrorCode::BadParams, "Cantor CDF needs depth >= 1");
  MonotoneCDF::Traits t;
  t.kind = CdfKind::CantorIterate;
  t.support_lo = 0.0;
  t.support_hi = 1.0;
  t.total_mass = 1.0;
  t.continuous = true;
  nlohmann::ordered_json params;
  if (spec.family() == CantorFamily::StandardK) {
    params["family"] = "standardK";
    params["K"] = spec.K();
  } else {
    params["family"] = "general";
    params["beta"] = spec.beta();
  }
  params["depth"] = spec.depth();
  nlohmann::ordered_json src = {{"kind", "cantor"}, {"params", params}};
  t.source = std::move(src);
  const std::size_t depth = spec.depth();
  return MonotoneCDF(std::move(t), [spec, depth](double x) { return gamma_level(spec, x, depth); });
}

IntervalList cantor_intervals(const CantorSpec& spec, std::size_t n, std::size_t budget_level) {
  if (n > spec.depth()) throw Error(ErrorCode::DepthExceeded, "interval level exceeds construction depth");
  if (n > budget_level) throw Error(ErrorCode::BudgetExceeded, "2^n intervals exceed the memory budget");
  IntervalList list;
  list.level = n;
  std::vector<double> lo{0.0};
  for (std::size_t k = 1; k <= n; ++k) {
    const double offset = std::exp(spec.width_log(k - 1)) - std::exp(spec.width_log(k));
    std::vector<double> next;
    next.reserve(lo.size() * 2);
    for (double l : lo) {
      next.push_back(l);
      next.push_back(l + offset);
    }
    lo = std::move(next);
  }
  const double w = spec.width_log(n);
  list.intervals.reserve(lo.size());
  for (double l : lo) list.intervals.push_back({l, w});
  return list;
}

void write_intervals_csv(std::ostream& out, const IntervalList& list) {
  out << "level,index,lo,width_log\n";
  char buf[128];
  for (std::size_t i = 0; i < list.intervals.size(); ++i) {
    std::snprintf(buf, sizeof buf, "%zu,%zu,%.17g,%.17g\n", list.level, i, list.intervals[i].lo,
                  list.intervals[i].width_log);
    out << buf;
  }
}

LogModulusReport log_modulus_certificate(const CantorSpec& spec, double beta, std::size_t samples) {
  if (spec.family() != CantorFamily::GeneralRatio || std::fabs(spec.beta() - beta) > 1e-12)
    throw Error(ErrorCode::BadParams, "log-modulus certificate needs the general family with matching beta");
  const double eps_log = -(beta + 1.0);
  std::vector<double> ys;
  for (int j = static_cast<int>(std::ceil(-eps_log / std::numbers::ln2)); j <= 60; ++j) ys.push_back(std::ldexp(1.0, -j));
  for (std::size_t n = 1; n <= spec.depth(); ++n) {
    const double l = spec.width_log(n);
    if (l <= eps_log && l > kMinNormalLog) ys.push_back(std::exp(l));
  }
  const std::size_t nx = std::max<std::size_t>(2, samples / ys.size());
  // Half the x-grid on left endpoints of Cantor intervals, where increments
  // are largest, half uniform on [0, 1].
  std::vector<double> xs{0.0};
  std::size_t level = 0;
  while ((std::size_t{2} << level) <= nx / 2 && level + 1 <= spec.depth()) ++level;
  for (const auto& iv : cantor_intervals(spec, level).intervals) xs.push_back(iv.lo);
  const std::size_t nu = nx > xs.size() ? nx - xs.size() : 1;
  for (std::size_t i = 0; i < nu; ++i) xs.push_back((static_cast<double>(i) + 0.5) / static_cast<double>(nu));

  const MonotoneCDF F = cantor_cdf(spec);
  LogModulusReport report;
  for (double y : ys) {
    const double weight = std::pow(std::fabs(std::log(y)), beta);
    for (double x : xs) {
      const double inc = F(x + y) - F(x);
      report.worst_ratio = std::max(report.worst_ratio, inc * weight);
      ++report.pairs_checked;
    }
  }
  report.holds = report.worst_ratio <= 1.0 + 1e-9;
  return report;
}

DimensionEstimate box_counting_dimension(const CantorSpec& spec, std::size_t n_min, std::size_t n_max) {
  if (!(n_min < n_max) || n_max > spec.depth())
    throw Error(ErrorCode::BadParams, "box counting needs n_min < n_max <= depth");
  DimensionEstimate est;
  for (std::size_t n = std::max<std::size_t>(n_min, 1); n <= n_max; ++n) {
    const double scale = -spec.width_log(n);
    const double count = static_cast<double>(n) * std::numbers::ln2;
    est.scales_log.push_back(scale);
    est.counts_log.push_back(count);
    est.pointwise.push_back(count / scale);
  }
  const LineFit fit = fit_line(est.scales_log, est.counts_log);
  est.slope = std::clamp(fit.slope, 0.0, 2.0);
  est.residual = fit.max_residual;
  return est;
}

}  // namespace logmeasure
