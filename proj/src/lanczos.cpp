#include <algorithm>
#include <cmath>

#include "qatn/dmrg.hpp"

namespace qatn {

LanczosResult local_eigensolve(const LinearMap& apply_h, const Eigen::VectorXcd& start, std::size_t dim_cap,
                               double tol, std::size_t max_restarts) {
  const double start_norm = start.norm();
  if (!(start_norm > 0.0)) throw DegenerateStartError("Lanczos start block is zero");
  if (dim_cap == 0) throw InvalidArgument("Krylov dimension cap must be positive");

  const auto n = static_cast<std::size_t>(start.size());
  const std::size_t m = std::min(n, dim_cap);
  LanczosResult out;
  Eigen::VectorXcd x = start / start_norm;

  for (std::size_t restart = 0; restart <= max_restarts; ++restart) {
    std::vector<Eigen::VectorXcd> basis{x};
    std::vector<double> alpha, beta;
    bool invariant = false;
    double scale = 0.0;

    for (std::size_t j = 0; j < m; ++j) {
      Eigen::VectorXcd w = apply_h(basis[j]);
      ++out.matvecs;
      scale = std::max(scale, w.norm());
      alpha.push_back(basis[j].dot(w).real());
      // two passes of classical Gram-Schmidt against the whole basis
      for (int pass = 0; pass < 2; ++pass) {
        for (const auto& v : basis) w -= v * v.dot(w);
      }
      const double b = w.norm();
      beta.push_back(b);
      if (b <= 1e-13 * std::max(scale, 1e-300) || j + 1 == n) {
        invariant = true;
        break;
      }
      if (j + 1 < m) basis.push_back(w / b);
    }

    const auto k = static_cast<Eigen::Index>(alpha.size());
    Eigen::MatrixXd t = Eigen::MatrixXd::Zero(k, k);
    for (Eigen::Index i = 0; i < k; ++i) {
      t(i, i) = alpha[i];
      if (i + 1 < k) t(i, i + 1) = t(i + 1, i) = beta[i];
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(t);
    const Eigen::VectorXd y = eig.eigenvectors().col(0);
    out.value = eig.eigenvalues()(0);

    x.setZero();
    for (Eigen::Index i = 0; i < k; ++i) x += basis[i] * y(i);
    x /= x.norm();

    out.residual = invariant ? 0.0 : std::abs(beta.back() * y(k - 1));
    const double spectral = std::max(1.0, eig.eigenvalues().cwiseAbs().maxCoeff());
    if (invariant || out.residual <= tol * spectral) {
      out.converged = true;
      break;
    }
  }
  out.vector = std::move(x);
  return out;
}

}  // namespace qatn
