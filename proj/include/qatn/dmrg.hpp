#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <vector>

#include "qatn/encoding.hpp"
#include "qatn/errors.hpp"
#include "qatn/mps.hpp"

namespace qatn {

// ---------------------------------------------------------------------------
// Local eigensolver

using LinearMap = std::function<Eigen::VectorXcd(const Eigen::VectorXcd&)>;

struct LanczosResult {
  double value = 0.0;
  Eigen::VectorXcd vector;
  double residual = 0.0;  // estimate of ||H x - value x||
  std::size_t matvecs = 0;
  bool converged = false;
};

/// Lowest Ritz pair of a Hermitian map by restarted Lanczos with full
/// reorthogonalization. The Krylov space is min(dim, dim_cap); restarts from
/// the current Ritz vector until the residual drops below tol * spectral scale.
/// A start vector inside an invariant subspace stays there.
LanczosResult local_eigensolve(const LinearMap& apply_h, const Eigen::VectorXcd& start,
                               std::size_t dim_cap = 20, double tol = 1e-10,
                               std::size_t max_restarts = 200);

// ---------------------------------------------------------------------------
// Two-site DMRG

struct DmrgParams {
  std::size_t chi_max = 32;
  std::size_t max_sweeps = 20;
  double energy_tol = 1e-9;    // relative to max(1, |E|)
  double variance_tol = 1e-8;
  std::size_t lanczos_dim = 20;
  double lanczos_tol = 1e-10;
  std::uint64_t seed = 0;
  double svd_rel_tol = kDefaultSvdRelTol;
  double energy_offset = 0.0;  // added to reported energies only
  double start_noise = 1e-3;   // relative perturbation of each Lanczos start block
};

void validate(const DmrgParams& p);

/// Adds w |psi><psi| to the minimized functional.
struct Penalty {
  double weight = 0.0;
  Mps state;
};

struct DmrgOutcome {
  double energy = 0.0;  // <H> of the final state, plus params.energy_offset
  Mps state;            // normalized, mixed form with center 0
  double variance = 0.0;
  std::size_t sweeps_used = 0;
  bool converged = false;
  std::vector<double> sweep_energies;  // local objective at the end of each sweep
  double penalty_overlap = 0.0;        // |<psi|phi>| when a penalty was active
};

/// Minimizes <phi|H|phi> (+ w |<phi|psi>|^2) over MPS with bond dim <= chi_max.
/// Starts from `initial` when given, else from a seeded random MPS.
DmrgOutcome dmrg_ground(const Mpo& h, const DmrgParams& params,
                        const std::optional<Penalty>& penalty = std::nullopt,
                        const std::optional<Mps>& initial = std::nullopt);

/// First excited state: penalized run against `ground.state`, started from |0...0>.
DmrgOutcome excited_state(const Mpo& h, const DmrgOutcome& ground, double w, const DmrgParams& params);

/// How the penalty weight for the excited-state run is chosen.
struct WPolicy {
  std::optional<double> fixed;  // use this weight verbatim when set

  /// 2 * sqrt(variance) + 3 * |E0| with E0 measured without offset; never below 1.
  double weight(const DmrgOutcome& ground, double energy_offset) const;
};

// ---------------------------------------------------------------------------
// Gap scan

struct GapScanResult {
  std::vector<double> s_grid;
  std::vector<double> e0;
  std::vector<double> e1;
  std::vector<double> gaps;
  std::vector<bool> clamped;  // gap was slightly negative and reset to 0
  double g_min = 0.0;
  double argmin_s = 0.0;

  void finalize();  // recomputes g_min / argmin_s from gaps
};

class GapScanError : public Error {
 public:
  GapScanError(double s, const std::string& what);
  double s() const { return s_; }

 private:
  double s_;
};

inline constexpr double kGapClampTol = 1e-6;

/// Ground and first excited energies of the annealing Hamiltonian on an
/// equidistant grid of `steps` points over [0, 1]. Energies exclude the offset.
GapScanResult gap_scan(const IsingModel& ising, std::size_t steps, const DmrgParams& params,
                       const WPolicy& w_policy = {});

/// CSV with header `s,e0,e1,gap`, 12 significant digits.
void write_gap_csv(std::ostream& os, const GapScanResult& r);
/// Reads the CSV back; lines starting with '#' are skipped.
GapScanResult read_gap_csv(std::istream& is);

}  // namespace qatn
