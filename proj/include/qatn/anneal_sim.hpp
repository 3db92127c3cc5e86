#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <utility>
#include <vector>

#include <Eigen/Dense>
#include <nlohmann/json.hpp>

#include "qatn/dmrg.hpp"
#include "qatn/encoding.hpp"
#include "qatn/mps.hpp"

namespace qatn {

// ---------------------------------------------------------------------------
// Dense exact tooling

/// -(1-s) sum X_i + s (sum h_i Z_i + sum J_ij Z_i Z_j), offset excluded.
/// Site 0 is the most significant bit of the basis index.
Eigen::MatrixXcd dense_hamiltonian(const IsingModel& ising, double s, std::size_t site_cap = kDenseSiteCap);

struct Spectrum {
  Eigen::VectorXd values;    // ascending
  Eigen::MatrixXcd vectors;  // column i pairs with values(i)
};

inline constexpr double kHermiticityTol = 1e-10;

/// The k lowest eigenpairs of a Hermitian matrix.
Spectrum exact_spectrum(const Eigen::MatrixXcd& h, std::size_t k);

// ---------------------------------------------------------------------------
// Schedules

enum class ScheduleType { linear, gap_derived };

/// s(t) sampled on knots over t in [0, 1]; evaluated by linear interpolation.
struct Schedule {
  std::vector<std::pair<double, double>> knots;
  ScheduleType type = ScheduleType::linear;
  double epsilon = 0.0;
  std::size_t degree = 0;

  double at(double t) const;
};

inline constexpr std::size_t kScheduleGridPoints = 1001;
inline constexpr std::size_t kDefaultScheduleDegree = 6;

Schedule linear_schedule(std::size_t points = kScheduleGridPoints);

/// Velocity (g - g_min + eps) / (g_max - g_min), fitted by a least-squares
/// polynomial, clamped below at eps / (g_max - g_min), integrated and rescaled
/// onto [0, 1]. `epsilon` defaults to 1% of the gap range (at least 1e-9).
Schedule build_schedule(const GapScanResult& gaps, std::optional<double> epsilon = std::nullopt,
                        std::size_t degree = kDefaultScheduleDegree);

nlohmann::json to_json(const Schedule& s);
Schedule schedule_from_json(const nlohmann::json& j);

// ---------------------------------------------------------------------------
// Time evolution

struct EvolutionTrace {
  std::vector<double> times;
  std::vector<double> s_values;
  std::vector<double> energies;  // <psi|H(s(t))|psi>, offset excluded
  std::vector<double> overlaps;  // weight of psi in the ground eigenspace of H(s(t))
  Eigen::VectorXcd final_state;

  double final_overlap() const { return overlaps.back(); }
};

inline constexpr std::size_t kEvolveSiteCap = 12;
inline constexpr std::size_t kDefaultEvolveSteps = 1000;

/// Evolves the uniform superposition under H(s(t/T)) with piecewise-constant
/// propagators exp(-i H(s(t_k)) dt); records steps + 1 points.
EvolutionTrace evolve(const IsingModel& ising, const Schedule& schedule, double total_time,
                      std::size_t steps = kDefaultEvolveSteps);

/// CSV with header `t,s,energy,overlap`.
void write_trace_csv(std::ostream& os, const EvolutionTrace& trace);

// ---------------------------------------------------------------------------
// Classical simulated annealing on QUBOs

struct SaParams {
  std::size_t reads = 50;
  std::size_t sweeps = 1000;
  double beta_min = 0.1;  // in units of 1 / (largest single-flip energy change)
  double beta_max = 10.0; // in units of 1 / (smallest nonzero coefficient)
  std::uint64_t seed = 0;
};

void validate(const SaParams& p);

struct SaResult {
  std::vector<int> bits;
  double energy = 0.0;  // exact x^T Q x + offset of `bits`
  std::size_t best_read = 0;
};

SaResult classical_sa(const QuboProblem& q, const SaParams& params);

}  // namespace qatn
