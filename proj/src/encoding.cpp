#include "qatn/encoding.hpp"

#include <cmath>

#include "qatn/errors.hpp"

namespace qatn {

void validate(const QkpInstance& inst) {
  if (inst.weights.size() != inst.n) throw InvalidArgument("weights length must equal n");
  if (inst.values.size() != inst.n) throw InvalidArgument("values must have n rows");
  if (inst.capacity < 0) throw InvalidArgument("capacity must be non-negative");
  for (std::size_t i = 0; i < inst.weights.size(); ++i) {
    if (inst.weights[i] < 0) throw InvalidArgument("weight " + std::to_string(i) + " is negative");
  }
  for (std::size_t i = 0; i < inst.n; ++i) {
    if (inst.values[i].size() != i + 1) {
      throw InvalidArgument("values row " + std::to_string(i) + " must have " + std::to_string(i + 1) +
                            " entries");
    }
    for (std::size_t j = 0; j <= i; ++j) {
      if (inst.values[i][j] < 0) {
        throw InvalidArgument("value (" + std::to_string(i) + ", " + std::to_string(j) + ") is negative");
      }
    }
  }
}

double QuboProblem::energy(std::span<const int> bits) const {
  if (bits.size() != n()) throw ShapeError("bitstring length does not match QUBO size");
  double e = offset;
  for (Eigen::Index i = 0; i < q.rows(); ++i) {
    if (!bits[i]) continue;
    for (Eigen::Index k = 0; k <= i; ++k) {
      if (bits[k]) e += q(i, k);
    }
  }
  return e;
}

double IsingModel::coupling(std::size_t a, std::size_t b) const {
  if (a > b) std::swap(a, b);
  auto it = j.find({a, b});
  return it == j.end() ? 0.0 : it->second;
}

double IsingModel::energy(std::span<const int> spins) const {
  if (spins.size() != n) throw ShapeError("spin vector length does not match model size");
  double e = offset;
  for (std::size_t i = 0; i < n; ++i) e += h[i] * spins[i];
  for (const auto& [key, c] : j) e += c * spins[key.first] * spins[key.second];
  return e;
}

std::string to_string(SpinConvention c) {
  return c == SpinConvention::MinusHalf ? "minus-half" : "plus-half";
}

SpinConvention spin_convention_from_string(const std::string& s) {
  if (s == "minus-half") return SpinConvention::MinusHalf;
  if (s == "plus-half") return SpinConvention::PlusHalf;
  throw ParseError("unknown spin convention '" + s + "' (expected minus-half or plus-half)");
}

double penalty_g(double h_val) { return kPenaltyLinear * h_val + kPenaltyQuadratic * h_val * h_val; }

QuboProblem qkp_to_qubo(const QkpInstance& inst, double lambda) {
  validate(inst);
  if (!(lambda > 0.0)) throw InvalidArgument("lambda must be positive");
  const auto n = static_cast<Eigen::Index>(inst.n);
  const double cap = static_cast<double>(inst.capacity);
  QuboProblem out;
  out.q = Eigen::MatrixXd::Zero(n, n);
  // h = W - S with S = sum w_i x_i; expand lambda * (a h + b h^2) using x_i^2 = x_i.
  for (Eigen::Index i = 0; i < n; ++i) {
    const double wi = static_cast<double>(inst.weights[i]);
    out.q(i, i) = -static_cast<double>(inst.values[i][i]) +
                  lambda * (-kPenaltyLinear * wi - 2.0 * kPenaltyQuadratic * cap * wi +
                            kPenaltyQuadratic * wi * wi);
    for (Eigen::Index k = 0; k < i; ++k) {
      const double wk = static_cast<double>(inst.weights[k]);
      out.q(i, k) = -static_cast<double>(inst.values[i][k]) + lambda * 2.0 * kPenaltyQuadratic * wi * wk;
    }
  }
  out.offset = lambda * penalty_g(cap);
  return out;
}

double qkp_cost(const QkpInstance& inst, std::span<const int> bits, double lambda) {
  const auto ev = evaluate_qkp(inst, bits);
  const double slack = static_cast<double>(inst.capacity - ev.weight);
  return -static_cast<double>(ev.value) + lambda * penalty_g(slack);
}

IsingModel qubo_to_ising(const QuboProblem& q, SpinConvention conv) {
  // x = (1 + sign * s) / 2
  const double sign = conv == SpinConvention::MinusHalf ? -1.0 : 1.0;
  IsingModel m;
  m.n = q.n();
  m.h.assign(m.n, 0.0);
  m.offset = q.offset;
  for (std::size_t i = 0; i < m.n; ++i) {
    const double lin = q.q(i, i);
    m.offset += lin / 2.0;
    m.h[i] += sign * lin / 2.0;
    for (std::size_t k = 0; k < i; ++k) {
      const double c = q.q(i, k);
      if (c == 0.0) continue;
      // (1 + sign s_i)(1 + sign s_k) / 4
      m.offset += c / 4.0;
      m.h[i] += sign * c / 4.0;
      m.h[k] += sign * c / 4.0;
      m.j[{k, i}] += c / 4.0;
    }
  }
  return m;
}

std::vector<int> decode_spins(std::span<const int> spins, SpinConvention conv) {
  std::vector<int> bits;
  bits.reserve(spins.size());
  for (int s : spins) {
    if (s != 1 && s != -1) throw InvalidArgument("spin values must be +1 or -1");
    bits.push_back(conv == SpinConvention::MinusHalf ? (1 - s) / 2 : (1 + s) / 2);
  }
  return bits;
}

std::vector<int> encode_bits(std::span<const int> bits, SpinConvention conv) {
  std::vector<int> spins;
  spins.reserve(bits.size());
  for (int b : bits) {
    if (b != 0 && b != 1) throw InvalidArgument("bit values must be 0 or 1");
    spins.push_back(conv == SpinConvention::MinusHalf ? 1 - 2 * b : 2 * b - 1);
  }
  return spins;
}

std::vector<int> qubit_spins(std::span<const int> qubits) {
  return encode_bits(qubits, SpinConvention::MinusHalf);
}

QkpEvaluation evaluate_qkp(const QkpInstance& inst, std::span<const int> bits) {
  if (bits.size() != inst.n) throw ShapeError("bitstring length does not match instance size");
  QkpEvaluation ev;
  for (std::size_t i = 0; i < inst.n; ++i) {
    if (!bits[i]) continue;
    ev.weight += inst.weights[i];
    for (std::size_t k = 0; k <= i; ++k) {
      if (bits[k]) ev.value += inst.values[i][k];
    }
  }
  ev.feasible = ev.weight <= inst.capacity;
  return ev;
}

std::uint64_t fingerprint(const QkpInstance& inst) {
  // FNV-1a over the integer fields
  std::uint64_t h = 1469598103934665603ULL;
  auto mix = [&](std::int64_t v) {
    auto u = static_cast<std::uint64_t>(v);
    for (int b = 0; b < 8; ++b) {
      h ^= (u >> (8 * b)) & 0xffU;
      h *= 1099511628211ULL;
    }
  };
  mix(static_cast<std::int64_t>(inst.n));
  mix(inst.capacity);
  for (auto w : inst.weights) mix(w);
  for (const auto& row : inst.values)
    for (auto v : row) mix(v);
  return h;
}

nlohmann::json to_json(const QkpInstance& inst) {
  return {{"n", inst.n}, {"capacity", inst.capacity}, {"weights", inst.weights}, {"values", inst.values}};
}

namespace {

template <class T>
T field(const nlohmann::json& j, const char* name) {
  if (!j.contains(name)) throw ParseError(std::string("missing field '") + name + "'");
  try {
    return j.at(name).get<T>();
  } catch (const nlohmann::json::exception&) {
    throw ParseError(std::string("field '") + name + "' has the wrong type");
  }
}

}  // namespace

QkpInstance qkp_from_json(const nlohmann::json& j) {
  QkpInstance inst;
  inst.n = field<std::size_t>(j, "n");
  inst.capacity = field<std::int64_t>(j, "capacity");
  inst.weights = field<std::vector<std::int64_t>>(j, "weights");
  inst.values = field<std::vector<std::vector<std::int64_t>>>(j, "values");
  if (inst.weights.size() != inst.n) throw ParseError("field 'weights' must have n entries");
  if (inst.values.size() != inst.n) throw ParseError("field 'values' must have n rows");
  for (std::size_t i = 0; i < inst.n; ++i) {
    if (inst.values[i].size() != i + 1) {
      throw ParseError("field 'values' row " + std::to_string(i) + " must have " + std::to_string(i + 1) +
                       " entries");
    }
    if (inst.weights[i] < 1) throw ParseError("field 'weights' entries must be >= 1");
  }
  if (inst.capacity < 0) throw ParseError("field 'capacity' must be non-negative");
  return inst;
}

nlohmann::json to_json(const QuboProblem& q, SpinConvention conv) {
  nlohmann::json rows = nlohmann::json::array();
  for (Eigen::Index i = 0; i < q.q.rows(); ++i) {
    std::vector<double> row;
    for (Eigen::Index k = 0; k <= i; ++k) row.push_back(q.q(i, k));
    rows.push_back(row);
  }
  return {{"type", "qubo"}, {"convention", to_string(conv)}, {"q", rows}, {"offset", q.offset}};
}

nlohmann::json to_json(const IsingModel& m, SpinConvention conv) {
  nlohmann::json couplings = nlohmann::json::array();
  for (const auto& [key, c] : m.j) couplings.push_back({key.first, key.second, c});
  return {{"type", "ising"}, {"convention", to_string(conv)}, {"n", m.n},
          {"h", m.h},        {"j", couplings},                {"offset", m.offset}};
}

IsingModel ising_from_json(const nlohmann::json& j) {
  IsingModel m;
  m.n = field<std::size_t>(j, "n");
  m.h = field<std::vector<double>>(j, "h");
  m.offset = j.value("offset", 0.0);
  if (m.h.size() != m.n) throw ParseError("field 'h' must have n entries");
  for (const auto& c : field<nlohmann::json>(j, "j")) {
    if (!c.is_array() || c.size() != 3) throw ParseError("field 'j' entries must be [i, k, value]");
    auto a = c[0].get<std::size_t>();
    auto b = c[1].get<std::size_t>();
    if (a == b || a >= m.n || b >= m.n) throw ParseError("field 'j' has an invalid index pair");
    if (a > b) std::swap(a, b);
    m.j[{a, b}] += c[2].get<double>();
  }
  return m;
}

}  // namespace qatn
