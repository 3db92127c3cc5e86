#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "qatn/encoding.hpp"

namespace qatn {

QkpInstance gen_instance(std::size_t n, std::int64_t capacity, std::int64_t value_max, std::int64_t weight_max,
                         double pair_density, std::uint64_t seed);

struct SolveReport {
  std::string solver;
  std::vector<int> bits;
  std::int64_t value = 0;
  std::int64_t weight = 0;
  bool feasible = true;
  double wall_time = 0.0;  // seconds
  std::uint64_t instance = 0;  // fingerprint of the solved instance
  nlohmann::json extras = nlohmann::json::object();
};

/// Fills value, weight and feasibility from the instance.
SolveReport make_report(const QkpInstance& inst, std::string solver, std::vector<int> bits, double wall_time);

nlohmann::json to_json(const SolveReport& r);
SolveReport report_from_json(const nlohmann::json& j);

inline constexpr std::size_t kBruteForceCap = 25;

/// Exact optimum by enumerating all subsets in Gray-code order. Among equal
/// values the lexicographically smallest bitstring wins.
SolveReport brute_force(const QkpInstance& inst);

/// Best value V(r) and item set S(r) for every residual capacity r = 0..W.
struct DpState {
  std::vector<std::int64_t> v;
  std::vector<std::vector<std::size_t>> s;
};

/// Runs the table recursion. With `verify`, every set is checked against its
/// capacity and recorded value after each item pass (throws Error on failure).
DpState dp_table(const QkpInstance& inst, bool verify = false);

/// Exact for plain knapsack instances, a heuristic once pair bonuses appear.
SolveReport dp_solve(const QkpInstance& inst, bool verify = false);

struct ComparisonRow {
  std::string solver;
  std::int64_t value = 0;
  std::int64_t weight = 0;
  bool feasible = true;
  double wall_time = 0.0;
  std::optional<double> ratio;  // value / reference value
};

struct ComparisonTable {
  std::vector<ComparisonRow> rows;
  std::optional<std::string> reference;

  std::string to_text() const;
  std::string to_csv() const;
};

ComparisonTable compare(const std::vector<SolveReport>& reports,
                        const std::optional<SolveReport>& reference = std::nullopt);

}  // namespace qatn
