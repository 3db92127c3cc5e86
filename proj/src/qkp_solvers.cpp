#include "qatn/qkp_solvers.hpp"

#include <algorithm>
#include <bit>
#include <chrono>
#include <fmt/format.h>
#include <limits>
#include <random>

#include "qatn/errors.hpp"

namespace qatn {

QkpInstance gen_instance(std::size_t n, std::int64_t capacity, std::int64_t value_max, std::int64_t weight_max,
                         double pair_density, std::uint64_t seed) {
  if (n == 0) throw InvalidArgument("n must be at least 1");
  if (capacity < 1 || value_max < 1 || weight_max < 1) throw InvalidArgument("capacity and ranges must be >= 1");
  if (!(pair_density >= 0.0 && pair_density <= 1.0)) throw InvalidArgument("pair_density must lie in [0, 1]");
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<std::int64_t> value(1, value_max), weight(1, weight_max);
  std::bernoulli_distribution pair(pair_density);
  QkpInstance inst;
  inst.n = n;
  inst.capacity = capacity;
  inst.weights.resize(n);
  inst.values.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    inst.weights[i] = weight(rng);
    inst.values[i].assign(i + 1, 0);
    for (std::size_t j = 0; j < i; ++j) {
      if (pair(rng)) inst.values[i][j] = value(rng);
    }
    inst.values[i][i] = value(rng);
  }
  return inst;
}

SolveReport make_report(const QkpInstance& inst, std::string solver, std::vector<int> bits, double wall_time) {
  const auto eval = evaluate_qkp(inst, bits);
  SolveReport r;
  r.solver = std::move(solver);
  r.bits = std::move(bits);
  r.value = eval.value;
  r.weight = eval.weight;
  r.feasible = eval.feasible;
  r.wall_time = wall_time;
  r.instance = fingerprint(inst);
  return r;
}

nlohmann::json to_json(const SolveReport& r) {
  return {{"solver", r.solver},   {"bits", r.bits},         {"value", r.value},
          {"weight", r.weight},   {"feasible", r.feasible}, {"wall_time", r.wall_time},
          {"instance", fmt::format("{:016x}", r.instance)}, {"extras", r.extras}};
}

SolveReport report_from_json(const nlohmann::json& j) {
  auto need = [&](const char* key) -> const nlohmann::json& {
    if (!j.contains(key)) throw ParseError(fmt::format("field '{}' is missing", key));
    return j.at(key);
  };
  SolveReport r;
  try {
    if (!j.is_object()) throw ParseError("report must be a JSON object");
    if (!need("solver").is_string()) throw ParseError("field 'solver' must be a string");
    r.solver = j.at("solver").get<std::string>();
    if (!need("bits").is_array()) throw ParseError("field 'bits' must be an array");
    for (const auto& b : j.at("bits")) {
      if (!b.is_number_integer() || (b.get<int>() != 0 && b.get<int>() != 1)) {
        throw ParseError("field 'bits' must contain only 0 and 1");
      }
      r.bits.push_back(b.get<int>());
    }
    if (!need("value").is_number_integer()) throw ParseError("field 'value' must be an integer");
    r.value = j.at("value").get<std::int64_t>();
    if (!need("weight").is_number_integer()) throw ParseError("field 'weight' must be an integer");
    r.weight = j.at("weight").get<std::int64_t>();
    if (!need("feasible").is_boolean()) throw ParseError("field 'feasible' must be a boolean");
    r.feasible = j.at("feasible").get<bool>();
    if (!need("wall_time").is_number()) throw ParseError("field 'wall_time' must be a number");
    r.wall_time = j.at("wall_time").get<double>();
    if (!need("instance").is_string()) throw ParseError("field 'instance' must be a hex string");
    r.instance = std::stoull(j.at("instance").get<std::string>(), nullptr, 16);
    if (j.contains("extras")) r.extras = j.at("extras");
  } catch (const std::invalid_argument&) {
    throw ParseError("field 'instance' must be a hex string");
  } catch (const std::out_of_range&) {
    throw ParseError("field 'instance' must be a hex string");
  }
  return r;
}

namespace {

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

}  // namespace

SolveReport brute_force(const QkpInstance& inst) {
  validate(inst);
  const std::size_t n = inst.n;
  if (n > kBruteForceCap) throw SizeError(fmt::format("brute force on {} items exceeds cap {}", n, kBruteForceCap));
  const auto t0 = std::chrono::steady_clock::now();

  // Mask bit (n-1-i) holds item i, so numeric order equals lexicographic order of bits.
  auto item_of = [n](unsigned pos) { return n - 1 - pos; };
  std::uint64_t mask = 0;
  std::int64_t value = 0, weight = 0;
  std::int64_t best_value = 0;  // the empty set is always feasible
  std::uint64_t best_mask = 0;
  const std::uint64_t total = std::uint64_t{1} << n;
  for (std::uint64_t step = 1; step < total; ++step) {
    const auto pos = static_cast<unsigned>(std::countr_zero(step));
    const std::size_t k = item_of(pos);
    const std::uint64_t bit = std::uint64_t{1} << pos;
    std::int64_t delta = inst.values[k][k];
    for (std::uint64_t rest = mask & ~bit; rest; rest &= rest - 1) {
      delta += inst.value(k, item_of(static_cast<unsigned>(std::countr_zero(rest))));
    }
    if (mask & bit) {
      value -= delta;
      weight -= inst.weights[k];
    } else {
      value += delta;
      weight += inst.weights[k];
    }
    mask ^= bit;
    if (weight <= inst.capacity && (value > best_value || (value == best_value && mask < best_mask))) {
      best_value = value;
      best_mask = mask;
    }
  }
  std::vector<int> bits(n);
  for (std::size_t i = 0; i < n; ++i) bits[i] = static_cast<int>((best_mask >> (n - 1 - i)) & 1U);
  return make_report(inst, "bf", std::move(bits), seconds_since(t0));
}

DpState dp_table(const QkpInstance& inst, bool verify) {
  validate(inst);
  const auto cap = static_cast<std::size_t>(inst.capacity);
  DpState st;
  st.v.assign(cap + 1, 0);
  st.s.assign(cap + 1, {});
  for (std::size_t k = 0; k < inst.n; ++k) {
    const auto wk = static_cast<std::size_t>(inst.weights[k]);
    // Descending r keeps S(r - w_k) from the previous item pass, so no item is used twice.
    for (std::size_t r = cap + 1; r-- > 0;) {
      if (wk > r) continue;
      const auto& base = st.s[r - wk];
      std::int64_t cand = st.v[r - wk] + inst.values[k][k];
      for (std::size_t i : base) cand += inst.value(i, k);
      if (st.v[r] < cand) {
        st.v[r] = cand;
        auto next = base;
        next.push_back(k);
        st.s[r] = std::move(next);
      }
    }
    if (verify) {
      for (std::size_t r = 0; r <= cap; ++r) {
        std::vector<int> bits(inst.n, 0);
        for (std::size_t i : st.s[r]) bits[i] = 1;
        const auto eval = evaluate_qkp(inst, bits);
        if (eval.weight > static_cast<std::int64_t>(r) || eval.value != st.v[r]) {
          throw Error(fmt::format("DP table inconsistent at item {} capacity {}", k, r));
        }
      }
    }
  }
  return st;
}

SolveReport dp_solve(const QkpInstance& inst, bool verify) {
  const auto t0 = std::chrono::steady_clock::now();
  const DpState st = dp_table(inst, verify);
  std::vector<int> bits(inst.n, 0);
  for (std::size_t i : st.s.back()) bits[i] = 1;
  return make_report(inst, "dp", std::move(bits), seconds_since(t0));
}

ComparisonTable compare(const std::vector<SolveReport>& reports, const std::optional<SolveReport>& reference) {
  if (reports.empty()) throw InvalidArgument("nothing to compare");
  const std::uint64_t id = reference ? reference->instance : reports.front().instance;
  for (const auto& r : reports) {
    if (r.instance != id) {
      throw MismatchError(fmt::format("report '{}' is for instance {:016x}, expected {:016x}", r.solver, r.instance, id));
    }
  }
  ComparisonTable t;
  if (reference) t.reference = reference->solver;
  for (const auto& r : reports) {
    ComparisonRow row{r.solver, r.value, r.weight, r.feasible, r.wall_time, std::nullopt};
    if (reference) {
      const auto ref = static_cast<double>(reference->value);
      if (ref != 0.0) {
        row.ratio = static_cast<double>(r.value) / ref;
      } else {
        row.ratio = r.value == 0 ? 1.0 : std::numeric_limits<double>::infinity();
      }
    }
    t.rows.push_back(std::move(row));
  }
  return t;
}

std::string ComparisonTable::to_text() const {
  std::size_t width = 6;
  for (const auto& r : rows) width = std::max(width, r.solver.size());
  std::string out = fmt::format("{:<{}}  {:>12}  {:>12}  {:>8}  {:>12}  {:>8}\n", "solver", width, "value", "weight",
                                "feasible", "time_s", "ratio");
  for (const auto& r : rows) {
    out += fmt::format("{:<{}}  {:>12}  {:>12}  {:>8}  {:>12.6f}  {:>8}\n", r.solver, width, r.value, r.weight,
                       r.feasible ? "yes" : "NO", r.wall_time, r.ratio ? fmt::format("{:.6f}", *r.ratio) : "-");
  }
  return out;
}

std::string ComparisonTable::to_csv() const {
  std::string out = "solver,value,weight,feasible,wall_time,ratio\n";
  for (const auto& r : rows) {
    out += fmt::format("{},{},{},{},{:.9g},{}\n", r.solver, r.value, r.weight, r.feasible ? 1 : 0, r.wall_time,
                       r.ratio ? fmt::format("{:.12g}", *r.ratio) : "");
  }
  return out;
}

}  // namespace qatn
