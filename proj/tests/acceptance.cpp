// Acceptance gate: one PASS/FAIL line per criterion, non-zero exit on any FAIL.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <numeric>
#include <string>

#include <fmt/format.h>

#include "qatn/anneal_sim.hpp"
#include "qatn/automata_mpo.hpp"
#include "qatn/dmrg.hpp"
#include "qatn/parallel.hpp"
#include "qatn/qkp_solvers.hpp"
#include "support.hpp"

using namespace qatn;
namespace qt = qatn::testing;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

Eigen::VectorXd real_spectrum(const IsingModel& m, double s) {
  const Eigen::MatrixXd h = qt::pauli_sum_hamiltonian(m, s).real();
  return Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(h, Eigen::EigenvaluesOnly).eigenvalues();
}

DmrgParams full_bond(std::size_t n, std::uint64_t seed) {
  DmrgParams p;
  p.chi_max = std::size_t{1} << (n / 2);
  p.seed = seed;
  return p;
}

double qubo_optimum(const QuboProblem& q) {
  const std::size_t n = q.n();
  double best = std::numeric_limits<double>::infinity();
  std::vector<int> b(n);
  for (std::size_t idx = 0; idx < (std::size_t{1} << n); ++idx) {
    for (std::size_t i = 0; i < n; ++i) b[i] = static_cast<int>((idx >> i) & 1U);
    best = std::min(best, q.energy(b));
  }
  return best;
}

GapScanResult gaps_from(const std::vector<double>& g) {
  GapScanResult r;
  for (std::size_t i = 0; i < g.size(); ++i) {
    r.s_grid.push_back(double(i) / double(g.size() - 1));
    r.e0.push_back(0.0);
    r.e1.push_back(g[i]);
    r.gaps.push_back(g[i]);
    r.clamped.push_back(false);
  }
  r.finalize();
  return r;
}

// 1. Annealing MPO equals the dense Hamiltonian; bond dimensions follow min(k+2, N-k+3).
Outcome mpo_sweep() {
  std::mt19937_64 rng(101);
  double worst = 0.0;
  bool dims_ok = true;
  for (std::size_t n = 2; n <= 8; ++n) {
    for (int draw = 0; draw < 50; ++draw) {
      const auto m = qt::random_ising(n, rng);
      for (double s : {0.0, 0.3, 0.7, 1.0}) {
        const auto h = annealing_mpo(m, s);
        worst = std::max(worst, (mpo_to_dense(h) - dense_hamiltonian(m, s)).cwiseAbs().maxCoeff());
        if (h.sites.front().dim(0) != 1 || h.sites.back().dim(3) != 1) dims_ok = false;
        for (std::size_t k = 2; k <= n; ++k)
          if (h.sites[k - 1].dim(0) != std::min(k + 2, n - k + 3)) dims_ok = false;
      }
    }
  }
  return {worst <= 1e-11 && dims_ok, fmt::format("max |diff| {:.2e}, bond dims {}", worst, dims_ok ? "ok" : "WRONG")};
}

// 2. Ground energies and variances against exact diagonalization, 60 runs.
Outcome dmrg_vs_exact() {
  std::mt19937_64 rng(202);
  int good = 0, runs = 0, reseeded = 0;
  double worst = 0.0;
  for (int inst = 0; inst < 20; ++inst) {
    const std::size_t n = 2 + static_cast<std::size_t>(inst % 9);
    const auto m = qt::random_ising(n, rng);
    for (double s : {0.25, 0.5, 1.0}) {
      ++runs;
      const auto h = annealing_mpo(m, s);
      auto out = dmrg_ground(h, full_bond(n, 7 + inst));
      if (!out.converged || out.variance > 1e-8) {
        ++reseeded;
        out = dmrg_ground(h, full_bond(n, mix_seed(7 + inst)));
      }
      const double err = std::abs(out.energy - real_spectrum(m, s)(0));
      worst = std::max(worst, err);
      if (err <= 1e-7 && out.variance <= 1e-8) ++good;
    }
  }
  return {good >= 57, fmt::format("{}/{} runs within tolerance (worst |dE| {:.2e}, {} reseeded)", good, runs,
                                  worst, reseeded)};
}

// 3. Gap scan of an N=5 QKP Hamiltonian against dense gaps.
Outcome gap_scan_vs_dense() {
  const auto ising = qubo_to_ising(qkp_to_qubo(gen_instance(5, 100, 100, 100, 0.5, 303)));
  const auto r = gap_scan(ising, 21, full_bond(5, 3));
  double worst = 0.0;
  for (std::size_t i = 0; i < r.s_grid.size(); ++i) {
    const auto ev = real_spectrum(ising, r.s_grid[i]);
    worst = std::max(worst, std::abs(r.gaps[i] - (ev(1) - ev(0))));
  }
  const double endpoint = std::abs(r.gaps.front() - 2.0);
  return {worst <= 1e-4 && endpoint <= 1e-8,
          fmt::format("max |gap diff| {:.2e} over 21 points, |gap(0) - 2| {:.2e}", worst, endpoint)};
}

// 4. Single-qubit analytic minimum gap.
Outcome single_qubit_gap() {
  IsingModel m;
  m.n = 1;
  m.h = {1.0};
  const auto r = gap_scan(m, 101, full_bond(1, 4));
  const double dg = std::abs(r.g_min - std::sqrt(2.0));
  const double ds = std::abs(r.argmin_s - 0.5);
  return {dg <= 1e-9 && ds <= 1e-9, fmt::format("g_min {:.12f} at s {:.12f}", r.g_min, r.argmin_s)};
}

// 5. Roots of the penalty polynomial.
Outcome penalty_roots() {
  // roots of a h + b h^2 recovered from three evaluations, independent of the constants
  const double g1 = penalty_g(1.0), gm1 = penalty_g(-1.0);
  const double b = (g1 + gm1) / 2.0, a = (g1 - gm1) / 2.0;
  const double root = -a / b;
  const bool ok = penalty_g(0.0) == 0.0 && std::abs(root - 25.88) <= 0.01 && std::abs(penalty_g(root)) <= 1e-12;
  return {ok, fmt::format("roots 0 and {:.6f}", root)};
}

// 6. Adiabatic trend on small-coefficient QKP instances.
Outcome adiabatic_trend() {
  int high = 0;
  bool trend = true;
  double lowest = 1.0;
  for (std::uint64_t seed = 1000; seed < 1010; ++seed) {
    const auto ising = qubo_to_ising(qkp_to_qubo(gen_instance(6, 10, 10, 10, 0.5, seed)));
    const double slow = evolve(ising, linear_schedule(), 50.0, 1000).final_overlap();
    const double fast = evolve(ising, linear_schedule(), 1.0, 1000).final_overlap();
    lowest = std::min(lowest, slow);
    if (slow >= 0.8) ++high;
    if (slow < fast - 0.02) trend = false;
  }
  return {high >= 8 && trend,
          fmt::format("{}/10 overlaps >= 0.8 at T=50 (min {:.3f}), trend {}", high, lowest, trend ? "holds" : "BROKEN")};
}

// 7. Schedule boundary values, monotonicity and the constant-gap identity.
Outcome schedule_contract() {
  std::mt19937_64 rng(707);
  std::uniform_real_distribution<double> u(0.0, 3.0);
  bool ok = true;
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<double> g(2 + trial % 40);
    for (auto& x : g) x = u(rng);
    for (std::size_t degree : {1, 3, 6, 10}) {
      const auto s = build_schedule(gaps_from(g), std::nullopt, degree);
      if (s.knots.front().second != 0.0 || s.knots.back().second != 1.0) ok = false;
      for (std::size_t k = 1; k < s.knots.size(); ++k)
        if (s.knots[k].second < s.knots[k - 1].second) ok = false;
    }
  }
  double worst = 0.0;
  for (const auto& [t, v] : build_schedule(gaps_from(std::vector<double>(21, 1.3))).knots)
    worst = std::max(worst, std::abs(v - t));
  return {ok && worst <= 1e-12, fmt::format("200 schedules {}, constant-gap max |s - t| {:.1e}",
                                            ok ? "valid" : "INVALID", worst)};
}

// 8. DP against brute force.
Outcome dp_vs_brute_force() {
  int exact = 0, bounded = 0;
  double ratio_sum = 0.0, ratio_min = 1.0;
  for (int t = 0; t < 200; ++t) {
    const auto inst = gen_instance(1 + t % 15, 100, 100, 100, 0.0, 8000 + t);
    if (dp_solve(inst).value == brute_force(inst).value) ++exact;
  }
  for (int t = 0; t < 200; ++t) {
    const auto inst = gen_instance(1 + t % 15, 100, 100, 100, 0.5, 9000 + t);
    const auto dp = dp_solve(inst);
    const auto bf = brute_force(inst);
    if (dp.feasible && dp.value <= bf.value) ++bounded;
    const double ratio = bf.value ? double(dp.value) / double(bf.value) : 1.0;
    ratio_sum += ratio;
    ratio_min = std::min(ratio_min, ratio);
  }
  return {exact == 200 && bounded == 200,
          fmt::format("classical exact {}/200, QKP feasible lower bound {}/200, QKP dp/bf mean {:.4f} min {:.4f}",
                      exact, bounded, ratio_sum / 200.0, ratio_min)};
}

// 9. Simulated annealing finds the QUBO optimum.
Outcome sa_quality() {
  int hits = 0;
  for (int t = 0; t < 50; ++t) {
    const auto q = qkp_to_qubo(gen_instance(5 + t % 11, 100, 100, 100, 0.5, 900 + t));
    SaParams p;
    p.reads = 50;
    p.seed = static_cast<std::uint64_t>(t);
    const auto r = classical_sa(q, p);
    const double opt = qubo_optimum(q);
    if (std::abs(r.energy - opt) <= 1e-9 * std::max(1.0, std::abs(opt))) ++hits;
  }
  return {hits >= 40, fmt::format("optimum found on {}/50 instances", hits)};
}

// 10. Excited-state energies and orthogonality.
Outcome excited_accuracy() {
  std::mt19937_64 rng(1010);
  int good = 0, runs = 0, skipped = 0;
  double worst = 0.0;
  const double grid[] = {0.25, 0.5, 0.75, 1.0};
  for (int k = 0; runs < 40; ++k) {
    const std::size_t n = 2 + static_cast<std::size_t>(k % 7);
    const double s = grid[(k / 7) % 4];
    const auto m = qt::random_ising(n, rng);
    const auto ev = real_spectrum(m, s);
    if (ev(1) - ev(0) <= 1e-3) {
      ++skipped;
      continue;
    }
    ++runs;
    const auto h = annealing_mpo(m, s);
    const auto p = full_bond(n, 50 + k);
    const auto g = dmrg_ground(h, p);
    const auto e = excited_state(h, g, WPolicy{}.weight(g, 0.0), p);
    const double err = std::abs(e.energy - ev(1));
    worst = std::max(worst, err);
    if (err <= 1e-4 && std::abs(inner(g.state, e.state)) <= 1e-4) ++good;
  }
  return {good >= 36, fmt::format("{}/{} runs within tolerance (worst |dE1| {:.2e}, {} near-degenerate draws skipped)",
                                  good, runs, worst, skipped)};
}

// 11. Property spot checks.
Outcome property_suites() {
  std::mt19937_64 rng(1111);
  std::vector<std::string> failed;

  // truncated SVD error equals the discarded weight and beats random rank-3 approximations
  {
    const auto t = qt::random_tensor({8, 6}, rng);
    const auto svd = svd_truncated(t, 1, 3, 0.0);
    Eigen::MatrixXcd us = svd.u.as_matrix(1);
    for (Eigen::Index j = 0; j < us.cols(); ++j) us.col(j) *= svd.s[std::size_t(j)];
    const Eigen::MatrixXcd a = t.as_matrix(1);
    const double err = (a - us * Eigen::MatrixXcd(svd.v_dag.as_matrix(1))).norm();
    const Eigen::JacobiSVD<Eigen::MatrixXcd> ref(a);
    const double tail = ref.singularValues().tail(3).norm();
    bool ok = std::abs(err - tail) <= 1e-10;
    for (int k = 0; k < 20; ++k) {
      const Eigen::MatrixXcd x = qt::random_matrix(8, 3, rng), y = qt::random_matrix(3, 6, rng);
      const Eigen::MatrixXcd other = x * y;
      const cplx scale = other.conjugate().cwiseProduct(a).sum() / other.squaredNorm();  // best multiple of other
      if ((a - scale * other).norm() < err - 1e-12) ok = false;
    }
    if (!ok) failed.push_back("svd-optimality");
  }
  // gauge freedom
  {
    bool ok = true;
    for (int k = 0; k < 10; ++k) {
      auto m = random_mps(6, 4, 40 + k);
      const auto before = mps_to_dense(m);
      const std::size_t bond = 1 + static_cast<std::size_t>(k % 5);
      const auto d = m.bond_dim(bond);
      const Eigen::MatrixXcd x =
          qt::random_matrix(Eigen::Index(d), Eigen::Index(d), rng) + 3.0 * Eigen::MatrixXcd::Identity(d, d);
      m.sites[bond - 1] = contract(m.sites[bond - 1], Tensor::from_matrix(MatrixRM(x), {d, d}), {{2, 0}});
      m.sites[bond] = contract(Tensor::from_matrix(MatrixRM(x.inverse()), {d, d}), m.sites[bond], {{1, 0}});
      if ((mps_to_dense(m) - before).norm() > 1e-9) ok = false;
    }
    if (!ok) failed.push_back("gauge-freedom");
  }
  // Schmidt spectrum vs dense bipartition
  {
    bool ok = true;
    for (std::size_t n = 2; n <= 8; ++n) {
      const auto m = random_mps(n, 8, 60 + n);
      const auto v = mps_to_dense(m);
      for (std::size_t cut = 1; cut < n; ++cut) {
        const auto rows = Eigen::Index{1} << cut, cols = Eigen::Index{1} << (n - cut);
        Eigen::MatrixXcd mat(rows, cols);
        for (Eigen::Index r = 0; r < rows; ++r)
          for (Eigen::Index c = 0; c < cols; ++c) mat(r, c) = v(r * cols + c);
        const Eigen::JacobiSVD<Eigen::MatrixXcd> svd(mat);
        double s = 0.0;
        for (Eigen::Index i = 0; i < svd.singularValues().size(); ++i) {
          const double p = std::pow(svd.singularValues()(i), 2);
          if (p > 1e-300) s -= p * std::log(p);
        }
        if (std::abs(entanglement_entropy(m, cut) - s) > 1e-9) ok = false;
      }
    }
    if (!ok) failed.push_back("schmidt-entropy");
  }
  // QUBO and Ising energies agree on every bitstring
  {
    bool ok = true;
    for (int t = 0; t < 100; ++t) {
      const std::size_t n = 1 + static_cast<std::size_t>(t % 10);
      const auto q = qkp_to_qubo(gen_instance(n, 50, 30, 30, 0.5, 1200 + t));
      for (auto conv : {SpinConvention::MinusHalf, SpinConvention::PlusHalf}) {
        const auto m = qubo_to_ising(q, conv);
        for (std::size_t idx = 0; idx < (std::size_t{1} << n); ++idx) {
          std::vector<int> b(n);
          for (std::size_t i = 0; i < n; ++i) b[i] = static_cast<int>((idx >> i) & 1U);
          if (std::abs(q.energy(b) - m.energy(encode_bits(b, conv))) > 1e-9) ok = false;
        }
      }
    }
    if (!ok) failed.push_back("ising-qubo-equivalence");
  }
  // variational upper bound, including truncated bonds
  {
    bool ok = true;
    for (std::size_t n = 2; n <= 10; ++n) {
      const auto m = qt::random_ising(n, rng);
      const double e0 = real_spectrum(m, 0.5)(0);
      for (std::size_t chi : {std::size_t{2}, std::size_t{1} << (n / 2)}) {
        DmrgParams p;
        p.chi_max = chi;
        p.seed = n;
        if (dmrg_ground(annealing_mpo(m, 0.5), p).energy < e0 - 1e-9) ok = false;
      }
    }
    if (!ok) failed.push_back("variational-bound");
  }
  std::string detail = "svd-optimality, gauge-freedom, schmidt-entropy, ising-qubo-equivalence, variational-bound";
  if (!failed.empty()) {
    detail = "failed:";
    for (const auto& f : failed) detail += " " + f;
  }
  return {failed.empty(), detail};
}

}  // namespace

int main() {
  struct Criterion {
    int id;
    const char* name;
    double limit_s;  // runtime budget; 0 = none stated
    std::function<Outcome()> check;
  };
  const std::vector<Criterion> criteria = {
      {1, "MPO correctness sweep", 60.0, mpo_sweep},
      {2, "DMRG vs exact diagonalization", 300.0, dmrg_vs_exact},
      {3, "Gap scan vs dense gaps", 120.0, gap_scan_vs_dense},
      {4, "Single-qubit analytic gap", 0.0, single_qubit_gap},
      {5, "Penalty polynomial roots", 0.0, penalty_roots},
      {6, "Adiabatic trend", 300.0, adiabatic_trend},
      {7, "Schedule contract", 0.0, schedule_contract},
      {8, "DP vs brute force", 120.0, dp_vs_brute_force},
      {9, "Simulated annealing quality", 0.0, sa_quality},
      {10, "Excited-state accuracy", 0.0, excited_accuracy},
      {11, "Property suites", 0.0, property_suites},
  };
  int failures = 0;
  for (const auto& c : criteria) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.check();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (c.limit_s > 0.0 && secs > c.limit_s) {
      o.pass = false;
      o.detail += fmt::format("; runtime over {:.0f} s budget", c.limit_s);
    }
    if (!o.pass) ++failures;
    std::printf("%s criterion %2d: %s -- %s [%.2f s]\n", o.pass ? "PASS" : "FAIL", c.id, c.name, o.detail.c_str(),
                secs);
    std::fflush(stdout);
  }
  std::printf("%d/%zu criteria passed\n", int(criteria.size()) - failures, criteria.size());
  return failures == 0 ? 0 : 1;
}
