#pragma once

#include <map>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "qatn/encoding.hpp"
#include "qatn/mps.hpp"

namespace qatn {

/// One automaton transition: entry (left, right) of a site matrix holds
/// coeff * payload. Indices are 1-based and already resolved.
template <class Payload>
struct Rule {
  int left = 1;
  int right = 1;
  Payload payload;
  cplx coeff{1.0, 0.0};
};

/// Rule table for one site. `add` accepts -1 / -2 for the last / second-last
/// index and resolves them against the table dimensions immediately.
template <class Payload>
class BasicRuleTable {
 public:
  BasicRuleTable(int left_dim, int right_dim);

  BasicRuleTable& add(int left, int right, Payload payload, cplx coeff = 1.0);

  int left_dim() const { return left_dim_; }
  int right_dim() const { return right_dim_; }
  const std::vector<Rule<Payload>>& rules() const { return rules_; }

 private:
  int left_dim_;
  int right_dim_;
  std::vector<Rule<Payload>> rules_;
};

using RuleTable = BasicRuleTable<Eigen::Matrix2cd>;
using KetTable = BasicRuleTable<Eigen::Vector2cd>;

/// Named single-qubit operators: I, X, Y, Z are always present.
class OperatorAlphabet {
 public:
  OperatorAlphabet();
  void define(const std::string& name, const Eigen::Matrix2cd& op);
  const Eigen::Matrix2cd& at(const std::string& name) const;
  bool contains(const std::string& name) const { return ops_.count(name) != 0; }

 private:
  std::map<std::string, Eigen::Matrix2cd> ops_;
};

namespace pauli {
Eigen::Matrix2cd identity();
Eigen::Matrix2cd x();
Eigen::Matrix2cd y();
Eigen::Matrix2cd z();
}  // namespace pauli

Eigen::Vector2cd ket_down();  // |0>
Eigen::Vector2cd ket_up();    // |1>

/// Compiles per-site tables into an MPO. The first table contributes only its
/// first row and the last table only its last column.
Mpo mpo_from_tables(const std::vector<RuleTable>& tables);
Mps mps_from_tables(const std::vector<KetTable>& tables);

/// Per-site rule tables of -(1-s) sum X_i + s (sum h_i Z_i + sum J_ij Z_i Z_j)
/// for N >= 2. Site k (1-based) has left dimension min(k+2, N-k+3).
std::vector<RuleTable> annealing_tables(const IsingModel& ising, double s);

/// Annealing Hamiltonian MPO; the Ising offset is never included.
Mpo annealing_mpo(const IsingModel& ising, double s);

/// {sites: [{left_dim, right_dim, rules: [{left, right, op, coeff}]}]}.
/// `op` is an alphabet name or a 2x2 matrix of numbers / [re, im] pairs;
/// `coeff` is a number or [re, im].
std::vector<RuleTable> tables_from_json(const nlohmann::json& j,
                                        const OperatorAlphabet& alphabet = OperatorAlphabet());

}  // namespace qatn
