#include <algorithm>
#include <cmath>
#include <random>

#include "qatn/dmrg.hpp"
#include "qatn/environment.hpp"

namespace qatn {

void validate(const DmrgParams& p) {
  if (p.chi_max == 0) throw InvalidArgument("chi_max must be positive");
  if (p.max_sweeps == 0) throw InvalidArgument("max_sweeps must be positive");
  if (p.lanczos_dim == 0) throw InvalidArgument("lanczos_dim must be positive");
  if (!(p.energy_tol > 0.0) || !(p.variance_tol > 0.0) || !(p.lanczos_tol > 0.0)) {
    throw InvalidArgument("DMRG tolerances must be positive");
  }
  if (!(p.start_noise >= 0.0)) throw InvalidArgument("start_noise must be non-negative");
}

namespace {

Eigen::VectorXcd flat(const Tensor& t) {
  return Eigen::Map<const Eigen::VectorXcd>(t.data().data(), static_cast<Eigen::Index>(t.size()));
}

Tensor unflat(const Eigen::VectorXcd& v, const std::vector<std::size_t>& dims) {
  return Tensor(dims, std::vector<cplx>(v.data(), v.data() + v.size()));
}

// Scales the singular values so the two-site block stays normalized after truncation.
void renormalize(std::vector<double>& s) {
  double n2 = 0.0;
  for (double x : s) n2 += x * x;
  const double n = std::sqrt(n2);
  if (n > 0.0)
    for (double& x : s) x /= n;
}

Tensor scale_rows(const Tensor& v_dag, const std::vector<double>& s) {
  Tensor out = v_dag;
  auto m = out.as_matrix(1);
  for (Eigen::Index i = 0; i < m.rows(); ++i) m.row(i) *= s[static_cast<std::size_t>(i)];
  return out;
}

Tensor scale_cols(const Tensor& u, const std::vector<double>& s) {
  Tensor out = u;
  auto m = out.as_matrix(out.rank() - 1);
  for (Eigen::Index j = 0; j < m.cols(); ++j) m.col(j) *= s[static_cast<std::size_t>(j)];
  return out;
}

class Sweeper {
 public:
  Sweeper(const Mpo& h, const DmrgParams& p, const std::optional<Penalty>& penalty, Mps phi)
      : h_(h), p_(p), penalty_(penalty), phi_(std::move(phi)), rng_(mix_rng_seed(p.seed)) {
    const std::size_t n = phi_.length();
    left_.assign(n, env::boundary());
    right_.assign(n, env::boundary());
    if (penalty_) {
      lp_.assign(n, env::overlap_boundary());
      rp_.assign(n, env::overlap_boundary());
    }
    phi_ = canonicalize(phi_, OrthoForm::right, p_.chi_max, p_.svd_rel_tol);
    for (std::size_t k = n - 1; k >= 1; --k) update_right(k);
  }

  // One left-to-right plus right-to-left pass; returns the last local objective.
  double sweep() {
    const std::size_t n = phi_.length();
    double value = 0.0;
    bonds_grew_ = false;
    for (std::size_t k = 0; k + 1 < n; ++k) value = optimize(k, true);
    for (std::size_t k = n - 1; k-- > 0;) value = optimize(k, false);
    return value;
  }

  bool bonds_grew() const { return bonds_grew_; }

  Mps take_state() {
    phi_.form = OrthoForm::mixed;
    phi_.center = 0;
    return std::move(phi_);
  }

 private:
  static std::uint64_t mix_rng_seed(std::uint64_t s) { return s ^ 0x5bd1e9955bd1e995ULL; }

  void update_left(std::size_t k) {
    left_[k + 1] = env::grow_left(left_[k], phi_.sites[k], h_.sites[k], phi_.sites[k]);
    if (penalty_) lp_[k + 1] = env::grow_left_overlap(lp_[k], penalty_->state.sites[k], phi_.sites[k]);
  }

  void update_right(std::size_t k) {
    right_[k - 1] = env::grow_right(right_[k], phi_.sites[k], h_.sites[k], phi_.sites[k]);
    if (penalty_) rp_[k - 1] = env::grow_right_overlap(rp_[k], penalty_->state.sites[k], phi_.sites[k]);
  }

  // Projection of the penalty state onto the current two-site variational space.
  Tensor penalty_vector(std::size_t k) const {
    const auto& psi = penalty_->state.sites;
    const Tensor block = contract(psi[k], psi[k + 1], {{2, 0}});
    return contract(contract(lp_[k].conj(), block, {{0, 0}}), rp_[k + 1].conj(), {{3, 0}});
  }

  double optimize(std::size_t k, bool to_right) {
    const Tensor theta = contract(phi_.sites[k], phi_.sites[k + 1], {{2, 0}});
    const auto dims = theta.dims();
    const Tensor& l = left_[k];
    const Tensor& r = right_[k + 1];
    const Tensor& w1 = h_.sites[k];
    const Tensor& w2 = h_.sites[k + 1];

    Eigen::VectorXcd u;
    if (penalty_) u = flat(penalty_vector(k));
    const double weight = penalty_ ? penalty_->weight : 0.0;

    LinearMap apply = [&](const Eigen::VectorXcd& v) {
      Eigen::VectorXcd y = flat(env::apply_two_site(l, w1, w2, r, unflat(v, dims)));
      if (penalty_) y += weight * u * u.dot(v);
      return y;
    };

    auto objective = [&](const Eigen::VectorXcd& v) { return v.dot(apply(v)).real() / v.squaredNorm(); };
    const double current = objective(flat(theta));

    Eigen::VectorXcd start = flat(theta);
    if (p_.start_noise > 0.0) {
      // Breaks exact invariance of the start block so Lanczos can leave
      // eigenvectors of the local map that are not its ground state.
      std::normal_distribution<double> gauss;
      Eigen::VectorXcd noise(start.size());
      for (auto& z : noise) z = cplx(gauss(rng_), gauss(rng_));
      start += p_.start_noise * std::max(start.norm(), 1.0) / noise.norm() * noise;
    }
    const auto res = local_eigensolve(apply, start, p_.lanczos_dim, p_.lanczos_tol);

    auto svd = split(unflat(res.vector, dims));
    double value = objective(flat(contract(scale_cols(svd.u, svd.s), svd.v_dag, {{2, 0}})));
    if (value > current) {
      // Truncation undid the local gain; the previous block has bond <= chi_max
      // and is reproduced exactly, so the objective never rises within a sweep.
      svd = split(theta);
      value = current;
    }
    const std::size_t old_bond = phi_.sites[k].dim(2);
    if (svd.kept > old_bond) bonds_grew_ = true;
    if (to_right) {
      phi_.sites[k] = std::move(svd.u);
      phi_.sites[k + 1] = scale_rows(svd.v_dag, svd.s);
      update_left(k);
    } else {
      phi_.sites[k] = scale_cols(svd.u, svd.s);
      phi_.sites[k + 1] = std::move(svd.v_dag);
      update_right(k + 1);
    }
    return value;
  }

  // Keep the full bond basis up to chi_max, zeroing weights below the relative
  // cutoff. Zero-weight vectors leave the state unchanged but widen the
  // variational space seen by later local problems.
  SvdResult split(const Tensor& block) const {
    auto svd = svd_truncated(block, 2, p_.chi_max, 0.0);
    for (double& x : svd.s)
      if (x < p_.svd_rel_tol * svd.s.front()) x = 0.0;
    renormalize(svd.s);
    return svd;
  }

  const Mpo& h_;
  const DmrgParams& p_;
  const std::optional<Penalty>& penalty_;
  Mps phi_;
  std::mt19937_64 rng_;
  std::vector<Tensor> left_, right_;  // left_[k]: sites < k; right_[k]: sites > k
  std::vector<Tensor> lp_, rp_;
  bool bonds_grew_ = false;
};

// Exact solve of a one-site problem; the whole state is a single vector.
DmrgOutcome solve_single_site(const Mpo& h, const DmrgParams& p, const std::optional<Penalty>& penalty,
                              const Mps& phi) {
  const Tensor& w = h.sites[0];
  const auto dims = phi.sites[0].dims();
  Eigen::VectorXcd u;
  if (penalty) u = flat(penalty->state.sites[0]);
  LinearMap apply = [&](const Eigen::VectorXcd& v) {
    Eigen::VectorXcd y =
        flat(env::apply_one_site(env::boundary(), w, env::boundary(), unflat(v, dims)));
    if (penalty) y += penalty->weight * u * u.dot(v);
    return y;
  };
  Eigen::VectorXcd start = flat(phi.sites[0]);
  start += 1e-3 * Eigen::VectorXcd::Ones(start.size());
  const auto res = local_eigensolve(apply, start, p.lanczos_dim, p.lanczos_tol);
  DmrgOutcome out;
  out.state.sites.push_back(unflat(res.vector.normalized(), dims));
  out.state.form = OrthoForm::mixed;
  out.sweep_energies.push_back(res.value);
  out.sweeps_used = 1;
  out.converged = res.converged;
  return out;
}

}  // namespace

DmrgOutcome dmrg_ground(const Mpo& h, const DmrgParams& params, const std::optional<Penalty>& penalty,
                        const std::optional<Mps>& initial) {
  validate(params);
  validate(h);
  const std::size_t n = h.length();
  for (std::size_t k = 0; k < n; ++k) {
    if (h.sites[k].dim(1) != 2 || h.sites[k].dim(2) != 2) throw ShapeError("DMRG expects qubit MPOs");
  }
  Mps phi = initial ? *initial : random_mps(n, params.chi_max, params.seed);
  validate(phi);
  if (phi.length() != n) throw ShapeError("initial state length does not match the MPO");
  std::optional<Penalty> pen;
  if (penalty) {
    validate(penalty->state);
    if (penalty->state.length() != n) throw ShapeError("penalty state length does not match the MPO");
    if (!(penalty->weight >= 0.0)) throw InvalidArgument("penalty weight must be non-negative");
    const double nrm = norm(penalty->state);
    if (!(nrm > 0.0)) throw NormalizationError("penalty state has zero norm");
    pen = Penalty{penalty->weight, penalty->state};
    pen->state.sites[0] *= cplx(1.0 / nrm);
  }

  DmrgOutcome out;
  if (n == 1) {
    out = solve_single_site(h, params, pen, phi);
  } else {
    Sweeper sweeper(h, params, pen, std::move(phi));
    double previous = 0.0;
    for (std::size_t sweep = 1; sweep <= params.max_sweeps; ++sweep) {
      const double value = sweeper.sweep();
      out.sweep_energies.push_back(value);
      out.sweeps_used = sweep;
      if (sweep >= 2 && !sweeper.bonds_grew() && std::abs(value - previous) <= params.energy_tol * std::max(1.0, std::abs(value))) {
        out.converged = true;
        break;
      }
      previous = value;
    }
    out.state = sweeper.take_state();
  }

  const double e = expectation(out.state, h);
  out.variance = std::max(0.0, energy_variance(out.state, h));
  if (!pen && out.variance <= params.variance_tol) out.converged = true;
  out.energy = e + params.energy_offset;
  if (pen) out.penalty_overlap = std::abs(inner(pen->state, out.state));
  return out;
}

DmrgOutcome excited_state(const Mpo& h, const DmrgOutcome& ground, double w, const DmrgParams& params) {
  const std::vector<int> zeros(h.length(), 0);
  return dmrg_ground(h, params, Penalty{w, ground.state}, product_mps(zeros));
}

double WPolicy::weight(const DmrgOutcome& ground, double energy_offset) const {
  if (fixed) {
    if (!(*fixed > 0.0)) throw InvalidArgument("fixed penalty weight must be positive");
    return *fixed;
  }
  const double e0 = ground.energy - energy_offset;
  return std::max(1.0, 2.0 * std::sqrt(std::max(ground.variance, 0.0)) + 3.0 * std::abs(e0));
}

}  // namespace qatn
