#include "logmeasure/measures.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "logmeasure/defaults.hpp"
#include "logmeasure/error.hpp"
#include "logmeasure/numeric.hpp"

namespace logmeasure {

std::string_view to_string(CdfKind kind) {
  switch (kind) {
    case CdfKind::PiecewiseLinear: return "PiecewiseLinear";
    case CdfKind::PowerLaw: return "PowerLaw";
    case CdfKind::CantorIterate: return "CantorIterate";
    case CdfKind::StepIntegral: return "StepIntegral";
    case CdfKind::ArcsinProfile: return "ArcsinProfile";
    case CdfKind::TableSampled: return "TableSampled";
  }
  return "Unknown";
}

MonotoneCDF::MonotoneCDF(Traits traits, Evaluator evaluator)
    : traits_(std::make_shared<const Traits>(std::move(traits))),
      eval_(std::make_shared<const Evaluator>(std::move(evaluator))) {
  if (!(traits_->support_lo <= traits_->support_hi))
    throw Error(ErrorCode::BadParams, "support_lo must not exceed support_hi");
  if (!(traits_->total_mass >= 0.0) || !std::isfinite(traits_->total_mass))
    throw Error(ErrorCode::BadParams, "total mass must be finite and nonnegative");
}

double MonotoneCDF::operator()(double x) const {
  const Traits& t = *traits_;
  if (x < t.support_lo) return 0.0;
  if (x >= t.support_hi) return t.total_mass;
  return std::clamp((*eval_)(x), 0.0, t.total_mass);
}

MonotoneCDF MonotoneCDF::uniform(double lo, double hi, double mass) {
  if (!(lo < hi) || !(mass >= 0.0)) throw Error(ErrorCode::BadParams, "uniform needs lo < hi and mass >= 0");
  Traits t;
  t.kind = CdfKind::PiecewiseLinear;
  t.support_lo = lo;
  t.support_hi = hi;
  t.total_mass = mass;
  t.strictly_increasing = mass > 0.0;
  const double width = hi - lo;
  t.inverse = [lo, width, mass](double m) { return lo + width * (m / mass); };
  t.source = {{"kind", "uniform"}, {"params", {{"lo", lo}, {"hi", hi}, {"mass", mass}}}};
  return MonotoneCDF(std::move(t), [lo, width, mass](double x) { return mass * ((x - lo) / width); });
}

MonotoneCDF MonotoneCDF::power_law(double c, double alpha, double R) {
  if (!(c > 0.0) || !(alpha > 0.0) || !(R > 0.0))
    throw Error(ErrorCode::BadParams, "power law needs c, alpha, R > 0");
  Traits t;
  t.kind = CdfKind::PowerLaw;
  t.support_lo = 0.0;
  t.support_hi = R;
  t.total_mass = c * std::pow(R, alpha);
  t.strictly_increasing = true;
  t.inverse = [c, alpha](double m) { return std::pow(m / c, 1.0 / alpha); };
  t.source = {{"kind", "power_law"}, {"params", {{"c", c}, {"alpha", alpha}, {"R", R}}}};
  return MonotoneCDF(std::move(t), [c, alpha](double x) { return c * std::pow(x, alpha); });
}

MonotoneCDF MonotoneCDF::table(std::vector<std::pair<double, double>> points) {
  if (points.empty()) throw Error(ErrorCode::BadParams, "table needs at least one point");
  for (std::size_t i = 0; i < points.size(); ++i) {
    const auto [x, f] = points[i];
    if (!std::isfinite(x) || !std::isfinite(f) || f < 0.0)
      throw Error(ErrorCode::BadParams, "table entries must be finite with F >= 0");
    if (i > 0 && (x < points[i - 1].first || f < points[i - 1].second))
      throw Error(ErrorCode::BadParams, "table must be sorted and nondecreasing");
  }
  Traits t;
  t.kind = CdfKind::TableSampled;
  t.support_lo = points.front().first;
  t.support_hi = points.back().first;
  t.total_mass = points.back().second;
  if (points.front().second > 0.0) t.atoms.push_back({points.front().first, points.front().second});
  for (std::size_t i = 1; i < points.size(); ++i)
    if (points[i].first == points[i - 1].first && points[i].second > points[i - 1].second)
      t.atoms.push_back({points[i].first, points[i].second - points[i - 1].second});
  t.continuous = t.atoms.empty();
  nlohmann::ordered_json pts = nlohmann::ordered_json::array();
  for (const auto& [x, f] : points) pts.push_back({x, f});
  t.source = {{"kind", "table"}, {"params", {{"points", pts}}}};
  auto shared = std::make_shared<const std::vector<std::pair<double, double>>>(std::move(points));
  return MonotoneCDF(std::move(t), [shared](double x) {
    const auto& p = *shared;
    auto it = std::upper_bound(p.begin(), p.end(), x, [](double v, const auto& e) { return v < e.first; });
    if (it == p.begin()) return 0.0;
    const auto& left = *(it - 1);
    if (it == p.end()) return left.second;
    const auto& right = *it;
    const double frac = (x - left.first) / (right.first - left.first);
    return left.second + frac * (right.second - left.second);
  });
}

MonotoneCDF MonotoneCDF::point_mass(double x, double mass) {
  if (!(mass > 0.0)) throw Error(ErrorCode::BadParams, "point mass must be positive");
  return table({{x, mass}});
}

MonotoneCDF MonotoneCDF::arcsin_profile() {
  Traits t;
  t.kind = CdfKind::ArcsinProfile;
  t.support_lo = 0.0;
  t.support_hi = 2.0;
  t.total_mass = 1.0;
  t.strictly_increasing = true;
  t.inverse = [](double m) { return 2.0 * std::sin(m * std::numbers::pi / 2.0); };
  t.source = {{"kind", "arcsin"}, {"params", nlohmann::ordered_json::object()}};
  return MonotoneCDF(std::move(t), [](double r) { return (2.0 / std::numbers::pi) * std::asin(r / 2.0); });
}

MonotoneCDF MonotoneCDF::scaled(double c) const {
  if (!(c > 0.0)) throw Error(ErrorCode::BadParams, "scale factor must be positive");
  Traits t = *traits_;
  t.total_mass *= c;
  for (auto& a : t.atoms) a.mass *= c;
  if (t.inverse) t.inverse = [inv = t.inverse, c](double m) { return inv(m / c); };
  if (!t.source.is_null()) t.source["scale"] = t.source.value("scale", 1.0) * c;
  auto inner = eval_;
  return MonotoneCDF(std::move(t), [inner, c](double x) { return c * (*inner)(x); });
}

MonotoneCDF MonotoneCDF::shifted(double shift) const {
  Traits t = *traits_;
  t.support_lo += shift;
  t.support_hi += shift;
  for (auto& a : t.atoms) a.x += shift;
  if (t.inverse) t.inverse = [inv = t.inverse, shift](double m) { return inv(m) + shift; };
  if (!t.source.is_null()) t.source["shift"] = t.source.value("shift", 0.0) + shift;
  auto inner = eval_;
  return MonotoneCDF(std::move(t), [inner, shift](double x) { return (*inner)(x - shift); });
}

double eval_cdf(const MonotoneCDF& F, double x) { return F(x); }

double interval_mass(const MonotoneCDF& F, double lo, double hi) {
  if (lo > hi) throw Error(ErrorCode::MalformedInterval, "lo > hi");
  return std::max(0.0, F(hi) - F(lo));
}

double inverse_tolerance(const MonotoneCDF& F) {
  const double width = F.support_hi() - F.support_lo();
  return std::max(width * std::ldexp(1.0, -52), defaults::kInverseTolFloor);
}

namespace {

void check_mass_range(const MonotoneCDF& F, double m) {
  if (m < 0.0 || m > F.total_mass() || std::isnan(m))
    throw Error(ErrorCode::OutOfRange, "mass outside [0, total_mass]");
}

}  // namespace

double generalized_inverse(const MonotoneCDF& F, double m) {
  check_mass_range(F, m);
  const auto& t = F.traits();
  if (m <= 0.0 || F(t.support_lo) >= m) return t.support_lo;
  if (t.strictly_increasing && t.inverse) return std::clamp(t.inverse(m), t.support_lo, t.support_hi);
  const double tol = inverse_tolerance(F);
  double lo = t.support_lo, hi = t.support_hi;
  while (hi - lo > tol) {
    const double mid = lo + 0.5 * (hi - lo);
    if (mid <= lo || mid >= hi) break;
    if (F(mid) >= m)
      hi = mid;
    else
      lo = mid;
  }
  return hi;
}

double upper_inverse(const MonotoneCDF& F, double m) {
  check_mass_range(F, m);
  const auto& t = F.traits();
  if (m >= t.total_mass) return t.support_hi;
  if (F(t.support_lo) > m) return t.support_lo;
  if (t.strictly_increasing && t.inverse) return std::clamp(t.inverse(m), t.support_lo, t.support_hi);
  const double tol = inverse_tolerance(F);
  double lo = t.support_lo, hi = t.support_hi;
  while (hi - lo > tol) {
    const double mid = lo + 0.5 * (hi - lo);
    if (mid <= lo || mid >= hi) break;
    if (F(mid) <= m)
      lo = mid;
    else
      hi = mid;
  }
  return lo;
}

std::vector<MassInterval> mass_uniform_partition(const MonotoneCDF& F, std::size_t n) {
  if (n == 0) throw Error(ErrorCode::BadParams, "partition needs n >= 1");
  const double M = F.total_mass();
  if (!(M > 0.0)) throw Error(ErrorCode::ZeroMass, "cannot partition a zero measure");
  std::vector<double> edges(n + 1);
  edges.front() = F.support_lo();
  edges.back() = F.support_hi();
  for (std::size_t k = 1; k < n; ++k)
    edges[k] = generalized_inverse(F, M * (static_cast<double>(k) / static_cast<double>(n)));
  std::vector<MassInterval> cells(n);
  double previous = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    const double upper = (k + 1 == n) ? M : F(edges[k + 1]);
    cells[k].lo = edges[k];
    cells[k].hi = edges[k + 1];
    cells[k].mass = std::max(0.0, upper - previous);
    cells[k].width_log = edges[k + 1] > edges[k] ? std::log(edges[k + 1] - edges[k]) : -kInf;
    previous = upper;
  }
  return cells;
}

double Block::width() const { return std::exp(d_log); }
double Block::mass() const { return std::exp(mass_log); }

StepDensity StepDensity::l1_counterexample(std::size_t n_max) {
  StepDensity f;
  f.blocks.reserve(n_max);
  for (std::size_t n = 1; n <= n_max; ++n) {
    const int ni = static_cast<int>(n);
    Block b;
    b.a = 1.0 - std::ldexp(1.0, 1 - ni);
    b.d_log = -std::ldexp(1.0, 2 * ni);
    b.mass_log = -static_cast<double>(n) * std::numbers::ln2;
    f.blocks.push_back(b);
  }
  return f;
}

void validate(const StepDensity& f) {
  for (std::size_t i = 0; i < f.blocks.size(); ++i) {
    const Block& b = f.blocks[i];
    if (!std::isfinite(b.a) || !std::isfinite(b.d_log) || !std::isfinite(b.mass_log))
      throw Error(ErrorCode::BadParams, "block parameters must be finite");
    if (b.d_log > 0.0) throw Error(ErrorCode::BadParams, "block width must satisfy d <= 1");
    if (b.h_log() < 0.0) throw Error(ErrorCode::BadParams, "block height must satisfy h >= 1");
    if (i + 1 < f.blocks.size() && b.a + b.width() > f.blocks[i + 1].a)
      throw Error(ErrorCode::OverlapError, "blocks must be disjoint and ordered");
  }
}

MonotoneCDF cdf_from_step_density(const StepDensity& f) {
  validate(f);
  struct Piece {
    double a, width, mass, prefix;
  };
  std::vector<Piece> pieces;
  pieces.reserve(f.blocks.size());
  CompensatedSum total;
  MonotoneCDF::Traits t;
  t.kind = CdfKind::StepIntegral;
  for (const Block& b : f.blocks) {
    const double w = b.width();
    const double m = b.mass();
    pieces.push_back({b.a, w, m, total.value()});
    total.add(m);
    if (w == 0.0 && m > 0.0) t.atoms.push_back({b.a, m});
  }
  t.continuous = t.atoms.empty();
  if (pieces.empty()) {
    t.support_lo = t.support_hi = 0.0;
    t.total_mass = 0.0;
  } else {
    t.support_lo = pieces.front().a;
    t.support_hi = pieces.back().a + pieces.back().width;
    t.total_mass = total.value();
  }
  nlohmann::ordered_json blocks = nlohmann::ordered_json::array();
  for (const Block& b : f.blocks)
    blocks.push_back({{"a", b.a}, {"log_d", b.d_log}, {"log_mass", b.mass_log}});
  t.source = {{"kind", "step_density"}, {"params", {{"blocks", blocks}}}};
  auto shared = std::make_shared<const std::vector<Piece>>(std::move(pieces));
  return MonotoneCDF(std::move(t), [shared](double x) {
    const auto& p = *shared;
    auto it = std::upper_bound(p.begin(), p.end(), x, [](double v, const Piece& e) { return v < e.a; });
    if (it == p.begin()) return 0.0;
    const Piece& b = *(it - 1);
    if (x >= b.a + b.width) return b.prefix + b.mass;
    return b.prefix + b.mass * ((x - b.a) / b.width);
  });
}

QuadratureConfig::QuadratureConfig()
    : divergence_budget(defaults::kDivergenceBudget), agreement_tol(defaults::kAgreementTol) {
  for (std::size_t e = defaults::kScheduleMinExp; e <= defaults::kScheduleMaxExp; ++e)
    depth_schedule.push_back(std::size_t{1} << e);
}

QuadratureConfig QuadratureConfig::with_schedule(std::size_t min_exp, std::size_t max_exp, double tol) {
  QuadratureConfig cfg;
  cfg.depth_schedule.clear();
  for (std::size_t e = min_exp; e <= max_exp; ++e) cfg.depth_schedule.push_back(std::size_t{1} << e);
  cfg.agreement_tol = tol;
  cfg.validate();
  return cfg;
}

void QuadratureConfig::validate() const {
  if (depth_schedule.empty()) throw Error(ErrorCode::BadParams, "empty depth schedule");
  for (std::size_t i = 0; i < depth_schedule.size(); ++i) {
    const std::size_t n = depth_schedule[i];
    if (n == 0 || (n & (n - 1)) != 0) throw Error(ErrorCode::BadParams, "schedule entries must be powers of two");
    if (i > 0 && n <= depth_schedule[i - 1]) throw Error(ErrorCode::BadParams, "schedule must be strictly increasing");
  }
  if (!(agreement_tol > 0.0) || !(divergence_budget > 0.0))
    throw Error(ErrorCode::BadParams, "tolerances must be positive");
}

}  // namespace logmeasure
