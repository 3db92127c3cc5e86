#pragma once

// Reference implementations used as independent oracles in tests. They are
// deliberately naive: Kronecker products instead of bit tricks, explicit index
// loops instead of GEMM.

#include <Eigen/Dense>
#include <algorithm>
#include <random>
#include <vector>

#include "qatn/encoding.hpp"
#include "qatn/mps.hpp"
#include "qatn/tensor.hpp"

namespace qatn::testing {

inline Eigen::Matrix2cd pauli_i() { return Eigen::Matrix2cd::Identity(); }
inline Eigen::Matrix2cd pauli_x() {
  Eigen::Matrix2cd m;
  m << 0, 1, 1, 0;
  return m;
}
inline Eigen::Matrix2cd pauli_z() {
  Eigen::Matrix2cd m;
  m << 1, 0, 0, -1;
  return m;
}

inline Eigen::MatrixXcd kron(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b) {
  Eigen::MatrixXcd out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j) out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

/// op placed on `site` of an n-site chain, identity elsewhere; site 0 leftmost.
inline Eigen::MatrixXcd embed(const Eigen::Matrix2cd& op, std::size_t site, std::size_t n) {
  Eigen::MatrixXcd out = Eigen::MatrixXcd::Identity(1, 1);
  for (std::size_t k = 0; k < n; ++k) out = kron(out, k == site ? Eigen::MatrixXcd(op) : Eigen::MatrixXcd(pauli_i()));
  return out;
}

/// a on site i and b on site j (i != j), identity elsewhere.
inline Eigen::MatrixXcd embed_pair(const Eigen::Matrix2cd& a, std::size_t i, const Eigen::Matrix2cd& b, std::size_t j,
                                   std::size_t n) {
  Eigen::MatrixXcd out = Eigen::MatrixXcd::Identity(1, 1);
  for (std::size_t k = 0; k < n; ++k) {
    const Eigen::Matrix2cd op = k == i ? a : k == j ? b : pauli_i();
    out = kron(out, Eigen::MatrixXcd(op));
  }
  return out;
}

/// -(1-s) sum X_i + s (sum h_i Z_i + sum J_ij Z_i Z_j) from Kronecker products.
inline Eigen::MatrixXcd pauli_sum_hamiltonian(const IsingModel& m, double s) {
  const std::size_t n = m.n;
  const Eigen::Index dim = Eigen::Index{1} << n;
  Eigen::MatrixXcd h = Eigen::MatrixXcd::Zero(dim, dim);
  for (std::size_t i = 0; i < n; ++i) {
    h -= (1.0 - s) * embed(pauli_x(), i, n);
    h += s * m.h[i] * embed(pauli_z(), i, n);
  }
  for (const auto& [key, v] : m.j) h += s * v * embed_pair(pauli_z(), key.first, pauli_z(), key.second, n);
  return h;
}

inline IsingModel random_ising(std::size_t n, std::mt19937_64& rng, double density = 1.0) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::bernoulli_distribution keep(density);
  IsingModel m;
  m.n = n;
  for (std::size_t i = 0; i < n; ++i) m.h.push_back(u(rng));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t k = i + 1; k < n; ++k)
      if (keep(rng)) m.j[{i, k}] = u(rng);
  return m;
}

inline Tensor random_tensor(std::vector<std::size_t> dims, std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  Tensor t(std::move(dims));
  for (auto& x : t.data()) x = cplx(g(rng), g(rng));
  return t;
}

inline Eigen::MatrixXcd random_matrix(Eigen::Index r, Eigen::Index c, std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  Eigen::MatrixXcd m(r, c);
  for (Eigen::Index i = 0; i < r; ++i)
    for (Eigen::Index j = 0; j < c; ++j) m(i, j) = cplx(g(rng), g(rng));
  return m;
}

/// Dense state by summing amplitude products over every basis string.
inline Eigen::VectorXcd naive_mps_dense(const Mps& m) {
  const std::size_t n = m.length();
  const std::size_t dim = std::size_t{1} << n;
  Eigen::VectorXcd out(static_cast<Eigen::Index>(dim));
  for (std::size_t idx = 0; idx < dim; ++idx) {
    Eigen::MatrixXcd acc = Eigen::MatrixXcd::Identity(1, 1);
    for (std::size_t k = 0; k < n; ++k) {
      const auto& t = m.sites[k];
      const std::size_t bit = (idx >> (n - 1 - k)) & 1U;
      Eigen::MatrixXcd a(t.dim(0), t.dim(2));
      for (std::size_t l = 0; l < t.dim(0); ++l)
        for (std::size_t r = 0; r < t.dim(2); ++r) a(l, r) = t({l, bit, r});
      acc = acc * a;
    }
    out(static_cast<Eigen::Index>(idx)) = acc(0, 0);
  }
  return out;
}

/// Lowest k eigenvalues from an independent dense diagonalization.
inline Eigen::VectorXd lowest_eigenvalues(const Eigen::MatrixXcd& h, Eigen::Index k) {
  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> ces(h);
  Eigen::VectorXd ev = ces.eigenvalues().real();
  std::sort(ev.data(), ev.data() + ev.size());
  return ev.head(k);
}

/// Overlap modulus |<a|b>| / (|a||b|), insensitive to phase and scale.
inline double fidelity(const Eigen::VectorXcd& a, const Eigen::VectorXcd& b) {
  return std::abs(a.dot(b)) / (a.norm() * b.norm());
}

}  // namespace qatn::testing
