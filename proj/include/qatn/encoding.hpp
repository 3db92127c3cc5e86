#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>
#include <nlohmann/json.hpp>

namespace qatn {

/// Quadratic knapsack instance. `values[i]` holds row i of the lower-triangular
/// profit matrix (length i+1): values[i][i] is the item value and values[i][j],
/// j < i, the bonus for carrying both items.
struct QkpInstance {
  std::size_t n = 0;
  std::int64_t capacity = 0;
  std::vector<std::int64_t> weights;
  std::vector<std::vector<std::int64_t>> values;

  /// v_ij for any ordering of i and j.
  std::int64_t value(std::size_t i, std::size_t j) const {
    return i >= j ? values[i][j] : values[j][i];
  }
};

/// Throws InvalidArgument if the instance is malformed.
void validate(const QkpInstance& inst);

/// Binary cost x^T Q x + offset with Q lower-triangular (q_ii linear terms).
struct QuboProblem {
  Eigen::MatrixXd q;
  double offset = 0.0;

  std::size_t n() const { return static_cast<std::size_t>(q.rows()); }
  double energy(std::span<const int> bits) const;
};

/// H_p = sum h_i s_i + sum_{i<j} J_ij s_i s_j + offset over spins s_i = +-1.
struct IsingModel {
  std::size_t n = 0;
  std::vector<double> h;
  std::map<std::pair<std::size_t, std::size_t>, double> j;
  double offset = 0.0;

  double coupling(std::size_t a, std::size_t b) const;
  double energy(std::span<const int> spins) const;
};

/// MinusHalf: x = (1 - s) / 2, so bit 1 is spin -1 and matches the qubit |1>.
/// PlusHalf:  x = (1 + s) / 2, the other common convention.
enum class SpinConvention { MinusHalf, PlusHalf };

std::string to_string(SpinConvention c);
SpinConvention spin_convention_from_string(const std::string& s);

inline constexpr double kPenaltyLinear = -0.9603;
inline constexpr double kPenaltyQuadratic = 0.0371;
inline constexpr double kDefaultLambda = 5.0;

/// Unbalanced-penalization surrogate: -0.9603 h + 0.0371 h^2.
double penalty_g(double h_val);

/// Cost -V(x) + lambda * penalty_g(W - sum w_i x_i) as a triangular QUBO.
QuboProblem qkp_to_qubo(const QkpInstance& inst, double lambda = kDefaultLambda);
/// Direct evaluation of the same cost, without expanding it.
double qkp_cost(const QkpInstance& inst, std::span<const int> bits, double lambda = kDefaultLambda);

IsingModel qubo_to_ising(const QuboProblem& q, SpinConvention conv = SpinConvention::MinusHalf);

std::vector<int> decode_spins(std::span<const int> spins, SpinConvention conv);
std::vector<int> encode_bits(std::span<const int> bits, SpinConvention conv);

/// Spin values (Z eigenvalues, +1 for |0>, -1 for |1>) of a qubit basis state.
std::vector<int> qubit_spins(std::span<const int> qubits);

struct QkpEvaluation {
  std::int64_t value = 0;
  std::int64_t weight = 0;
  bool feasible = true;
};

QkpEvaluation evaluate_qkp(const QkpInstance& inst, std::span<const int> bits);

/// Stable 64-bit fingerprint of an instance, used to tell reports apart.
std::uint64_t fingerprint(const QkpInstance& inst);

nlohmann::json to_json(const QkpInstance& inst);
QkpInstance qkp_from_json(const nlohmann::json& j);
nlohmann::json to_json(const QuboProblem& q, SpinConvention conv);
nlohmann::json to_json(const IsingModel& m, SpinConvention conv);
IsingModel ising_from_json(const nlohmann::json& j);

}  // namespace qatn
