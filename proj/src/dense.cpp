#include <cmath>
#include <complex>
#include <fmt/format.h>
#include <ostream>

#include "qatn/anneal_sim.hpp"

namespace qatn {

namespace {

// Z eigenvalue of site `site` in basis state `idx`; site 0 is the top bit.
inline double z_value(std::size_t idx, std::size_t site, std::size_t n) {
  return ((idx >> (n - 1 - site)) & 1U) ? -1.0 : 1.0;
}

Eigen::MatrixXd dense_real(const IsingModel& ising, double s, std::size_t site_cap) {
  const std::size_t n = ising.n;
  if (n == 0) throw InvalidArgument("Ising model has no spins");
  if (n > site_cap) throw SizeError(fmt::format("dense Hamiltonian on {} sites exceeds cap {}", n, site_cap));
  if (ising.h.size() != n) throw ShapeError("Ising field vector length does not match n");
  if (s < 0.0 || s > 1.0) throw InvalidArgument("annealing parameter s must lie in [0, 1]");
  const std::size_t dim = std::size_t{1} << n;
  Eigen::MatrixXd h = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim));
  for (std::size_t idx = 0; idx < dim; ++idx) {
    double diag = 0.0;
    for (std::size_t i = 0; i < n; ++i) diag += ising.h[i] * z_value(idx, i, n);
    for (const auto& [key, v] : ising.j) diag += v * z_value(idx, key.first, n) * z_value(idx, key.second, n);
    const auto r = static_cast<Eigen::Index>(idx);
    h(r, r) = s * diag;
    for (std::size_t i = 0; i < n; ++i) {
      const auto c = static_cast<Eigen::Index>(idx ^ (std::size_t{1} << (n - 1 - i)));
      h(r, c) -= 1.0 - s;
    }
  }
  return h;
}

}  // namespace

Eigen::MatrixXcd dense_hamiltonian(const IsingModel& ising, double s, std::size_t site_cap) {
  return dense_real(ising, s, site_cap).cast<cplx>();
}

Spectrum exact_spectrum(const Eigen::MatrixXcd& h, std::size_t k) {
  if (h.rows() != h.cols()) throw ShapeError("spectrum input must be square");
  if (k == 0 || k > static_cast<std::size_t>(h.rows())) throw InvalidArgument("k must lie in 1..dim");
  const double dev = (h - h.adjoint()).cwiseAbs().maxCoeff();
  if (dev > kHermiticityTol) throw HermiticityError(fmt::format("matrix deviates from Hermitian by {:.3e}", dev));
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> eig(h);
  if (eig.info() != Eigen::Success) throw Error("eigensolver failed");
  const auto kk = static_cast<Eigen::Index>(k);
  return {eig.eigenvalues().head(kk), eig.eigenvectors().leftCols(kk)};
}

EvolutionTrace evolve(const IsingModel& ising, const Schedule& schedule, double total_time, std::size_t steps) {
  if (ising.n > kEvolveSiteCap) {
    throw SizeError(fmt::format("evolution on {} sites exceeds cap {}", ising.n, kEvolveSiteCap));
  }
  if (steps == 0) throw InvalidArgument("evolution needs at least one step");
  if (!(total_time >= 0.0)) throw InvalidArgument("total time must be non-negative");
  if (schedule.knots.empty()) throw InvalidArgument("schedule has no knots");

  const std::size_t dim = std::size_t{1} << ising.n;
  const double dt = total_time / static_cast<double>(steps);
  Eigen::VectorXcd psi = Eigen::VectorXcd::Constant(static_cast<Eigen::Index>(dim), 1.0 / std::sqrt(double(dim)));

  EvolutionTrace trace;
  // H is real symmetric here, so the real eigensolver suffices.
  auto record = [&](double t, double s, const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>& eig) {
    const Eigen::VectorXd& lam = eig.eigenvalues();
    const Eigen::MatrixXd& vec = eig.eigenvectors();
    const Eigen::VectorXcd coeff = vec.transpose().cast<cplx>() * psi;
    const double energy = (coeff.cwiseAbs2().array() * lam.array()).sum();
    const double degeneracy_tol = 1e-9 * std::max(1.0, std::abs(lam(0)));
    double overlap = 0.0;
    for (Eigen::Index i = 0; i < lam.size() && lam(i) - lam(0) <= degeneracy_tol; ++i) overlap += std::norm(coeff(i));
    trace.times.push_back(t);
    trace.s_values.push_back(s);
    trace.energies.push_back(energy);
    trace.overlaps.push_back(overlap);
    return coeff;
  };

  for (std::size_t k = 0; k <= steps; ++k) {
    const double t = dt * static_cast<double>(k);
    const double frac = static_cast<double>(k) / static_cast<double>(steps);
    const double s = schedule.at(frac);
    const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(dense_real(ising, s, kEvolveSiteCap));
    const Eigen::VectorXcd coeff = record(t, s, eig);
    if (k == steps) break;
    Eigen::VectorXcd phased(coeff.size());
    for (Eigen::Index i = 0; i < coeff.size(); ++i) {
      phased(i) = coeff(i) * std::exp(cplx(0.0, -eig.eigenvalues()(i) * dt));
    }
    psi = eig.eigenvectors().cast<cplx>() * phased;
  }
  trace.final_state = std::move(psi);
  return trace;
}

void write_trace_csv(std::ostream& os, const EvolutionTrace& trace) {
  os << "t,s,energy,overlap\n";
  for (std::size_t i = 0; i < trace.times.size(); ++i) {
    os << fmt::format("{:.12g},{:.12g},{:.12g},{:.12g}\n", trace.times[i], trace.s_values[i], trace.energies[i],
                      trace.overlaps[i]);
  }
}

}  // namespace qatn
