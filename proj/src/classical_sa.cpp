#include <cmath>
#include <limits>
#include <random>

#include "qatn/anneal_sim.hpp"
#include "qatn/parallel.hpp"

namespace qatn {

void validate(const SaParams& p) {
  if (p.reads == 0) throw InvalidArgument("SA needs at least one read");
  if (p.sweeps == 0) throw InvalidArgument("SA needs at least one sweep");
  if (!(p.beta_min > 0.0) || !(p.beta_min < p.beta_max)) throw InvalidArgument("SA requires 0 < beta_min < beta_max");
}

namespace {

struct Anneal {
  Eigen::MatrixXd sym;  // symmetric couplings, zero diagonal
  Eigen::VectorXd lin;  // q_ii
  double beta0 = 1.0, beta1 = 1.0;
};

Anneal prepare(const QuboProblem& q, const SaParams& p) {
  const auto n = q.q.rows();
  Anneal a;
  a.lin = q.q.diagonal();
  a.sym = Eigen::MatrixXd::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index k = 0; k < i; ++k) a.sym(i, k) = a.sym(k, i) = q.q(i, k);

  double delta_max = 0.0;
  double delta_min = std::numeric_limits<double>::infinity();
  for (Eigen::Index i = 0; i < n; ++i) {
    delta_max = std::max(delta_max, std::abs(a.lin(i)) + a.sym.row(i).cwiseAbs().sum());
    for (Eigen::Index k = 0; k <= i; ++k) {
      const double v = std::abs(q.q(i, k));
      if (v > 0.0) delta_min = std::min(delta_min, v);
    }
  }
  if (!(delta_max > 0.0)) delta_max = 1.0;
  if (!std::isfinite(delta_min)) delta_min = 1.0;
  a.beta0 = p.beta_min / delta_max;
  a.beta1 = std::max(p.beta_max / delta_min, a.beta0);
  return a;
}

std::vector<int> one_read(const Anneal& a, std::size_t sweeps, std::uint64_t seed, const QuboProblem& q) {
  const auto n = a.lin.size();
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  Eigen::VectorXd x(n);
  for (Eigen::Index i = 0; i < n; ++i) x(i) = (rng() & 1U) ? 1.0 : 0.0;
  Eigen::VectorXd field = a.sym * x;  // sum_k sym_ik x_k
  std::vector<int> bits(static_cast<std::size_t>(n));
  for (Eigen::Index i = 0; i < n; ++i) bits[static_cast<std::size_t>(i)] = static_cast<int>(x(i));
  double energy = q.energy(bits);
  double best = energy;
  std::vector<int> best_bits = bits;

  const double ratio = a.beta1 / a.beta0;
  for (std::size_t sweep = 0; sweep < sweeps; ++sweep) {
    const double frac = sweeps == 1 ? 1.0 : static_cast<double>(sweep) / static_cast<double>(sweeps - 1);
    const double beta = a.beta0 * std::pow(ratio, frac);
    for (Eigen::Index i = 0; i < n; ++i) {
      const double delta = (1.0 - 2.0 * x(i)) * (a.lin(i) + field(i));
      if (delta <= 0.0 || unit(rng) < std::exp(-beta * delta)) {
        const double step = 1.0 - 2.0 * x(i);
        x(i) += step;
        field += step * a.sym.col(i);
        energy += delta;
        bits[static_cast<std::size_t>(i)] = static_cast<int>(x(i));
        if (energy < best) {
          best = energy;
          best_bits = bits;
        }
      }
    }
  }
  return best_bits;
}

}  // namespace

SaResult classical_sa(const QuboProblem& q, const SaParams& params) {
  validate(params);
  if (q.n() == 0) throw InvalidArgument("QUBO has no variables");
  const Anneal a = prepare(q, params);
  std::vector<std::vector<int>> samples(params.reads);
  std::vector<double> energies(params.reads);
  parallel_for(params.reads, [&](std::size_t r) {
    samples[r] = one_read(a, params.sweeps, mix_seed(params.seed + r), q);
    energies[r] = q.energy(samples[r]);
  });
  SaResult out;
  out.energy = energies[0];
  for (std::size_t r = 1; r < params.reads; ++r) {
    if (energies[r] < out.energy) {
      out.energy = energies[r];
      out.best_read = r;
    }
  }
  out.bits = samples[out.best_read];
  return out;
}

}  // namespace qatn
