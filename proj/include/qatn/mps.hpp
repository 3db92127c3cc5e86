#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include <nlohmann/json.hpp>

#include "qatn/tensor.hpp"

namespace qatn {

enum class OrthoForm { none, left, right, mixed };

/// Matrix product state. Site tensors have axes (left-bond, physical, right-bond).
///
/// `center` is meaningful only when `form == OrthoForm::mixed`: sites left of it
/// are left-orthogonal and sites right of it are right-orthogonal.
struct Mps {
  std::vector<Tensor> sites;
  OrthoForm form = OrthoForm::none;
  std::size_t center = 0;

  std::size_t length() const { return sites.size(); }
  std::size_t phys_dim(std::size_t k) const { return sites.at(k).dim(1); }
  /// Dimension of the bond between site k-1 and site k (k in 1..N-1).
  std::size_t bond_dim(std::size_t k) const { return sites.at(k).dim(0); }
  std::size_t max_bond_dim() const;
};

/// Matrix product operator. Site tensors have axes
/// (left-bond, physical-out, physical-in, right-bond).
struct Mpo {
  std::vector<Tensor> sites;

  std::size_t length() const { return sites.size(); }
  std::size_t left_bond_dim(std::size_t k) const { return sites.at(k).dim(0); }
};

/// Throws ShapeError unless bonds chain correctly and boundaries are 1.
void validate(const Mps& m);
void validate(const Mpo& h);

inline constexpr std::size_t kDenseSiteCap = 14;

Mps random_mps(std::size_t n, std::size_t chi, std::uint64_t seed);
Mps product_mps(std::span<const int> bits);

Mps canonicalize(const Mps& m, OrthoForm target, std::size_t chi_max = SIZE_MAX,
                 double rel_tol = kDefaultSvdRelTol, std::size_t center = 0);

/// Tests the orthogonality identities implied by `m.form` at tolerance `tol`.
bool satisfies_form(const Mps& m, double tol = 1e-10);

cplx inner(const Mps& a, const Mps& b);
double norm(const Mps& m);

/// <m|H|m> / <m|m>.
double expectation(const Mps& m, const Mpo& h);
/// <m|H^2|m> / <m|m>, contracted as an MPO-MPO sandwich.
double expectation_sq(const Mps& m, const Mpo& h);
/// Variance <H^2> - <H>^2 evaluated as <(H - E)^2> to avoid cancellation.
double energy_variance(const Mps& m, const Mpo& h);

/// Von Neumann entropy (natural log) across the bond after the first `cut` sites.
double entanglement_entropy(const Mps& m, std::size_t cut);
/// Squared Schmidt coefficients across the same bond.
std::vector<double> schmidt_spectrum(const Mps& m, std::size_t cut);

/// Basis ordering puts site 0 on the most significant bit.
Eigen::VectorXcd mps_to_dense(const Mps& m, std::size_t site_cap = kDenseSiteCap);
Eigen::MatrixXcd mpo_to_dense(const Mpo& h, std::size_t site_cap = kDenseSiteCap);

Mpo identity_mpo(std::size_t n);
Mpo single_site_mpo(const Eigen::Matrix2cd& op);
/// Operator a + b as a block-diagonal MPO (bond dimension adds).
Mpo mpo_sum(const Mpo& a, const Mpo& b);
Mpo scaled(Mpo h, cplx alpha);

/// Bit pattern of the basis state with the largest amplitude. Exact for
/// N <= site_cap; otherwise a greedy site-by-site marginal maximization.
std::vector<int> dominant_basis_state(const Mps& m, std::size_t site_cap = kDenseSiteCap);

inline constexpr const char* kMpsFormatTag = "qatn-mps/1";
inline constexpr const char* kMpoFormatTag = "qatn-mpo/1";

nlohmann::json to_json(const Mps& m);
nlohmann::json to_json(const Mpo& h);
Mps mps_from_json(const nlohmann::json& j);
Mpo mpo_from_json(const nlohmann::json& j);

}  // namespace qatn
