#include <algorithm>
#include <cmath>
#include <string>

#include "qatn/anneal_sim.hpp"

namespace qatn {

double Schedule::at(double t) const {
  if (knots.empty()) throw InvalidArgument("schedule has no knots");
  if (t <= knots.front().first) return knots.front().second;
  if (t >= knots.back().first) return knots.back().second;
  const auto it = std::upper_bound(knots.begin(), knots.end(), t,
                                   [](double x, const std::pair<double, double>& k) { return x < k.first; });
  const auto& [t1, s1] = *it;
  const auto& [t0, s0] = *(it - 1);
  return s0 + (s1 - s0) * (t - t0) / (t1 - t0);
}

namespace {

std::vector<double> unit_grid(std::size_t points) {
  std::vector<double> t(points);
  for (std::size_t i = 0; i < points; ++i) t[i] = static_cast<double>(i) / static_cast<double>(points - 1);
  t.back() = 1.0;
  return t;
}

}  // namespace

Schedule linear_schedule(std::size_t points) {
  if (points < 2) throw InvalidArgument("a schedule needs at least 2 knots");
  Schedule out;
  for (double t : unit_grid(points)) out.knots.emplace_back(t, t);
  return out;
}

Schedule build_schedule(const GapScanResult& gaps, std::optional<double> epsilon, std::size_t degree) {
  const std::size_t pts = gaps.gaps.size();
  if (pts < 2 || gaps.s_grid.size() != pts) throw InsufficientDataError("schedule synthesis needs at least 2 gap points");
  const auto [lo, hi] = std::minmax_element(gaps.gaps.begin(), gaps.gaps.end());
  const double g_min = *lo;
  const double range = *hi - g_min;
  const double eps = epsilon.value_or(std::max(0.01 * range, 1e-9));
  if (!(eps > 0.0)) throw InvalidArgument("epsilon must be positive");

  Schedule out;
  out.type = ScheduleType::gap_derived;
  out.epsilon = eps;
  out.degree = degree;
  const auto grid = unit_grid(kScheduleGridPoints);
  if (!(range > 0.0)) {
    for (double t : grid) out.knots.emplace_back(t, t);
    return out;
  }

  const auto d = static_cast<Eigen::Index>(std::min(degree, pts - 1));
  Eigen::MatrixXd a(static_cast<Eigen::Index>(pts), d + 1);
  Eigen::VectorXd b(static_cast<Eigen::Index>(pts));
  for (std::size_t i = 0; i < pts; ++i) {
    const auto r = static_cast<Eigen::Index>(i);
    double p = 1.0;
    for (Eigen::Index c = 0; c <= d; ++c, p *= gaps.s_grid[i]) a(r, c) = p;
    b(r) = (gaps.gaps[i] - g_min + eps) / range;
  }
  const Eigen::VectorXd coef = a.colPivHouseholderQr().solve(b);

  const double floor = eps / range;
  std::vector<double> v(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    double acc = 0.0;
    for (Eigen::Index c = d; c >= 0; --c) acc = acc * grid[i] + coef(c);
    v[i] = std::max(acc, floor);
  }
  std::vector<double> cum(grid.size(), 0.0);
  for (std::size_t i = 1; i < grid.size(); ++i) cum[i] = cum[i - 1] + 0.5 * (v[i] + v[i - 1]) * (grid[i] - grid[i - 1]);
  for (std::size_t i = 0; i < grid.size(); ++i) out.knots.emplace_back(grid[i], cum[i] / cum.back());
  out.knots.front().second = 0.0;
  out.knots.back().second = 1.0;
  return out;
}

nlohmann::json to_json(const Schedule& s) {
  nlohmann::json knots = nlohmann::json::array();
  for (const auto& [t, v] : s.knots) knots.push_back({t, v});
  return {{"type", s.type == ScheduleType::linear ? "linear" : "gap-derived"},
          {"epsilon", s.epsilon},
          {"degree", s.degree},
          {"knots", std::move(knots)}};
}

Schedule schedule_from_json(const nlohmann::json& j) {
  Schedule s;
  if (!j.is_object()) throw ParseError("schedule must be a JSON object");
  if (!j.contains("type") || !j.at("type").is_string()) throw ParseError("field 'type' must be a string");
  const auto type = j.at("type").get<std::string>();
  if (type == "linear") {
    s.type = ScheduleType::linear;
  } else if (type == "gap-derived") {
    s.type = ScheduleType::gap_derived;
  } else {
    throw ParseError("field 'type' must be 'linear' or 'gap-derived'");
  }
  if (j.contains("epsilon")) {
    if (!j.at("epsilon").is_number()) throw ParseError("field 'epsilon' must be a number");
    s.epsilon = j.at("epsilon").get<double>();
  }
  if (j.contains("degree")) {
    if (!j.at("degree").is_number_unsigned()) throw ParseError("field 'degree' must be a non-negative integer");
    s.degree = j.at("degree").get<std::size_t>();
  }
  if (!j.contains("knots") || !j.at("knots").is_array()) throw ParseError("field 'knots' must be an array");
  std::size_t i = 0;
  for (const auto& k : j.at("knots")) {
    if (!k.is_array() || k.size() != 2 || !k[0].is_number() || !k[1].is_number()) {
      throw ParseError("field 'knots[" + std::to_string(i) + "]' must be a [t, s] pair");
    }
    s.knots.emplace_back(k[0].get<double>(), k[1].get<double>());
    ++i;
  }
  if (s.knots.size() < 2) throw ParseError("field 'knots' needs at least 2 entries");
  for (std::size_t k = 1; k < s.knots.size(); ++k) {
    if (!(s.knots[k].first > s.knots[k - 1].first)) throw ParseError("field 'knots' must have increasing t");
  }
  return s;
}

}  // namespace qatn
