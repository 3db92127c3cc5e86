#include "qatn/mps.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <string>

#include "qatn/environment.hpp"
#include "qatn/errors.hpp"

namespace qatn {

std::size_t Mps::max_bond_dim() const {
  std::size_t chi = 1;
  for (const auto& s : sites) chi = std::max({chi, s.dim(0), s.dim(2)});
  return chi;
}

void validate(const Mps& m) {
  if (m.sites.empty()) throw ShapeError("MPS has no sites");
  for (std::size_t k = 0; k < m.length(); ++k) {
    if (m.sites[k].rank() != 3) throw ShapeError("MPS site " + std::to_string(k) + " is not rank 3");
    if (k + 1 < m.length() && m.sites[k].dim(2) != m.sites[k + 1].dim(0)) {
      throw ShapeError("MPS bond mismatch after site " + std::to_string(k));
    }
  }
  if (m.sites.front().dim(0) != 1 || m.sites.back().dim(2) != 1) {
    throw ShapeError("MPS boundary bonds must have dimension 1");
  }
}

void validate(const Mpo& h) {
  if (h.sites.empty()) throw ShapeError("MPO has no sites");
  for (std::size_t k = 0; k < h.length(); ++k) {
    const auto& w = h.sites[k];
    if (w.rank() != 4) throw ShapeError("MPO site " + std::to_string(k) + " is not rank 4");
    if (w.dim(1) != w.dim(2)) throw ShapeError("MPO site " + std::to_string(k) + " is not square");
    if (k + 1 < h.length() && w.dim(3) != h.sites[k + 1].dim(0)) {
      throw ShapeError("MPO bond mismatch after site " + std::to_string(k));
    }
  }
  if (h.sites.front().dim(0) != 1 || h.sites.back().dim(3) != 1) {
    throw ShapeError("MPO boundary bonds must have dimension 1");
  }
}

namespace {

void check_compatible(const Mps& a, const Mps& b) {
  if (a.length() != b.length()) throw ShapeError("MPS lengths differ");
  for (std::size_t k = 0; k < a.length(); ++k) {
    if (a.phys_dim(k) != b.phys_dim(k)) throw ShapeError("MPS physical dimensions differ");
  }
}

void check_compatible(const Mps& m, const Mpo& h) {
  if (m.length() != h.length()) throw ShapeError("MPS and MPO lengths differ");
  for (std::size_t k = 0; k < m.length(); ++k) {
    if (m.phys_dim(k) != h.sites[k].dim(2)) throw ShapeError("MPS and MPO physical dimensions differ");
  }
}

std::size_t capped_bond(std::size_t chi, std::size_t k, std::size_t n) {
  auto pow2 = [](std::size_t e) { return e >= 62 ? SIZE_MAX : (std::size_t{1} << e); };
  return std::min({chi, pow2(k), pow2(n - k)});
}

// Moves the gauge of site k into site k+1, leaving site k left-orthogonal.
void shift_right(Mps& m, std::size_t k, std::size_t chi_max, double rel_tol) {
  auto svd = svd_truncated(m.sites[k], 2, chi_max, rel_tol);
  Tensor carry = svd.v_dag;
  for (std::size_t r = 0; r < svd.kept; ++r) {
    for (std::size_t c = 0; c < carry.dim(1); ++c) carry({r, c}) *= svd.s[r];
  }
  m.sites[k] = std::move(svd.u);
  m.sites[k + 1] = contract(carry, m.sites[k + 1], {{1, 0}});
}

// Moves the gauge of site k into site k-1, leaving site k right-orthogonal.
void shift_left(Mps& m, std::size_t k, std::size_t chi_max, double rel_tol) {
  auto svd = svd_truncated(m.sites[k], 1, chi_max, rel_tol);
  Tensor carry = svd.u;
  for (std::size_t r = 0; r < carry.dim(0); ++r) {
    for (std::size_t c = 0; c < svd.kept; ++c) carry({r, c}) *= svd.s[c];
  }
  m.sites[k] = std::move(svd.v_dag);
  m.sites[k - 1] = contract(m.sites[k - 1], carry, {{2, 0}});
}

void sweep_left_form(Mps& m, std::size_t upto, std::size_t chi_max, double rel_tol) {
  for (std::size_t k = 0; k < upto; ++k) shift_right(m, k, chi_max, rel_tol);
}

void sweep_right_form(Mps& m, std::size_t downto, std::size_t chi_max, double rel_tol) {
  for (std::size_t k = m.length() - 1; k > downto; --k) shift_left(m, k, chi_max, rel_tol);
}

bool is_identity(const MatrixRM& g, double tol) {
  return (g - MatrixRM::Identity(g.rows(), g.cols())).cwiseAbs().maxCoeff() <= tol;
}

bool left_orthogonal(const Tensor& a, double tol) {
  auto mat = a.as_matrix(2);
  return is_identity(mat.adjoint() * mat, tol);
}

bool right_orthogonal(const Tensor& b, double tol) {
  auto mat = b.as_matrix(1);
  return is_identity(mat * mat.adjoint(), tol);
}

}  // namespace

Mps random_mps(std::size_t n, std::size_t chi, std::uint64_t seed) {
  if (n == 0) throw InvalidArgument("random_mps requires n >= 1");
  if (chi == 0) throw InvalidArgument("random_mps requires chi >= 1");
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  Mps m;
  for (std::size_t k = 0; k < n; ++k) {
    Tensor t({capped_bond(chi, k, n), 2, capped_bond(chi, k + 1, n)});
    for (auto& x : t.data()) {
      const double re = normal(rng);
      const double im = normal(rng);
      x = cplx{re, im};
    }
    m.sites.push_back(std::move(t));
  }
  m.sites.front() *= cplx{1.0 / norm(m), 0.0};
  return m;
}

Mps product_mps(std::span<const int> bits) {
  if (bits.empty()) throw InvalidArgument("product_mps requires at least one bit");
  Mps m;
  for (int b : bits) {
    if (b != 0 && b != 1) throw InvalidArgument("product_mps bits must be 0 or 1");
    Tensor t({1, 2, 1});
    t({0, static_cast<std::size_t>(b), 0}) = 1.0;
    m.sites.push_back(std::move(t));
  }
  // Bond dimension one: every site is trivially orthonormal on both sides.
  m.form = OrthoForm::mixed;
  m.center = 0;
  return m;
}

Mps canonicalize(const Mps& m, OrthoForm target, std::size_t chi_max, double rel_tol,
                 std::size_t center) {
  validate(m);
  Mps out = m;
  const std::size_t n = out.length();
  if (n == 1 || target == OrthoForm::none) {
    // A single site has no internal bonds, so every form holds trivially.
    out.form = target;
    out.center = 0;
    return out;
  }
  // Truncation is only optimal from a canonical state, so gauge the opposite
  // way first without discarding anything.
  switch (target) {
    case OrthoForm::left:
      sweep_right_form(out, 0, SIZE_MAX, 0.0);
      sweep_left_form(out, n - 1, chi_max, rel_tol);
      out.center = n - 1;
      break;
    case OrthoForm::right:
      sweep_left_form(out, n - 1, SIZE_MAX, 0.0);
      sweep_right_form(out, 0, chi_max, rel_tol);
      out.center = 0;
      break;
    case OrthoForm::mixed:
      if (center >= n) throw InvalidArgument("orthogonality center out of range");
      sweep_left_form(out, n - 1, SIZE_MAX, 0.0);
      sweep_right_form(out, 0, chi_max, rel_tol);
      sweep_left_form(out, center, chi_max, rel_tol);
      out.center = center;
      break;
    case OrthoForm::none:
      break;
  }
  out.form = target;
  return out;
}

bool satisfies_form(const Mps& m, double tol) {
  const std::size_t n = m.length();
  std::size_t left_upto = 0;   // sites [0, left_upto) must be left-orthogonal
  std::size_t right_from = n;  // sites [right_from, n) must be right-orthogonal
  switch (m.form) {
    case OrthoForm::none:
      return true;
    case OrthoForm::left:
      left_upto = n - 1;
      break;
    case OrthoForm::right:
      right_from = 1;
      break;
    case OrthoForm::mixed:
      left_upto = m.center;
      right_from = m.center + 1;
      break;
  }
  for (std::size_t k = 0; k < left_upto; ++k) {
    if (!left_orthogonal(m.sites[k], tol)) return false;
  }
  for (std::size_t k = right_from; k < n; ++k) {
    if (!right_orthogonal(m.sites[k], tol)) return false;
  }
  return true;
}

cplx inner(const Mps& a, const Mps& b) {
  check_compatible(a, b);
  Tensor e = env::overlap_boundary();
  for (std::size_t k = 0; k < a.length(); ++k) e = env::grow_left_overlap(e, a.sites[k], b.sites[k]);
  return e.data()[0];
}

double norm(const Mps& m) { return std::sqrt(std::max(0.0, inner(m, m).real())); }

double expectation(const Mps& m, const Mpo& h) {
  check_compatible(m, h);
  Tensor e = env::boundary();
  for (std::size_t k = 0; k < m.length(); ++k) e = env::grow_left(e, m.sites[k], h.sites[k], m.sites[k]);
  return e.data()[0].real() / inner(m, m).real();
}

double expectation_sq(const Mps& m, const Mpo& h) {
  check_compatible(m, h);
  Tensor e({1, 1, 1, 1}, {cplx{1.0, 0.0}});  // (bra, upper mpo, lower mpo, ket)
  for (std::size_t k = 0; k < m.length(); ++k) {
    const Tensor& a = m.sites[k];
    const Tensor& w = h.sites[k];
    Tensor t = contract(e, a, {{3, 0}});                  // (a', w1, w2, s, b)
    t = contract(t, w, {{2, 0}, {3, 2}});                  // (a', w1, b, s2, w2')
    t = contract(t, w, {{1, 0}, {3, 2}});                  // (a', b, w2', s1, w1')
    t = contract(a.conj(), t, {{0, 0}, {1, 3}});           // (b', b, w2', w1')
    e = permute(t, {0, 3, 2, 1});
  }
  return e.data()[0].real() / inner(m, m).real();
}

double energy_variance(const Mps& m, const Mpo& h) {
  const double e = expectation(m, h);
  const Mpo shifted = mpo_sum(h, scaled(identity_mpo(h.length()), cplx{-e, 0.0}));
  return expectation_sq(m, shifted);
}

std::vector<double> schmidt_spectrum(const Mps& m, std::size_t cut) {
  const std::size_t n = m.length();
  if (cut < 1 || cut >= n) throw InvalidArgument("entropy cut must satisfy 1 <= cut <= N-1");
  const double nrm2 = inner(m, m).real();
  if (std::abs(nrm2 - 1.0) > 1e-8) {
    throw NormalizationError("entanglement entropy needs a normalized state (norm^2 = " +
                             std::to_string(nrm2) + ")");
  }
  const Mps c = canonicalize(m, OrthoForm::mixed, SIZE_MAX, 0.0, cut - 1);
  const auto svd = svd_truncated(c.sites[cut - 1], 2, SIZE_MAX, 0.0);
  std::vector<double> p;
  double total = 0.0;
  for (double s : svd.s) total += s * s;
  for (double s : svd.s) p.push_back(total > 0.0 ? s * s / total : 0.0);
  return p;
}

double entanglement_entropy(const Mps& m, std::size_t cut) {
  double h = 0.0;
  for (double p : schmidt_spectrum(m, cut)) {
    if (p > 0.0) h -= p * std::log(p);
  }
  return std::max(0.0, h);
}

Eigen::VectorXcd mps_to_dense(const Mps& m, std::size_t site_cap) {
  validate(m);
  if (m.length() > site_cap) {
    throw SizeError("dense conversion of " + std::to_string(m.length()) + " sites exceeds cap " +
                    std::to_string(site_cap));
  }
  Tensor v({1, 1}, {cplx{1.0, 0.0}});  // (basis, bond)
  for (const auto& a : m.sites) {
    v = contract(v, a, {{1, 0}});
    v = reshape(v, {2, 1});
  }
  return v.as_matrix(1).col(0);
}

Eigen::MatrixXcd mpo_to_dense(const Mpo& h, std::size_t site_cap) {
  validate(h);
  if (h.length() > site_cap) {
    throw SizeError("dense conversion of " + std::to_string(h.length()) + " sites exceeds cap " +
                    std::to_string(site_cap));
  }
  Tensor acc({1, 1, 1}, {cplx{1.0, 0.0}});  // (out, in, bond)
  for (const auto& w : h.sites) {
    Tensor t = contract(acc, w, {{2, 0}});  // (out, in, s', s, bond)
    t = permute(t, {0, 2, 1, 3, 4});
    acc = reshape(t, {2, 2, 1});
  }
  const std::size_t dim = acc.dim(0);
  Eigen::MatrixXcd out(dim, dim);
  for (std::size_t r = 0; r < dim; ++r) {
    for (std::size_t c = 0; c < dim; ++c) out(r, c) = acc({r, c, 0});
  }
  return out;
}

Mpo identity_mpo(std::size_t n) {
  if (n == 0) throw InvalidArgument("identity_mpo requires n >= 1");
  Mpo h;
  for (std::size_t k = 0; k < n; ++k) {
    Tensor w({1, 2, 2, 1});
    w({0, 0, 0, 0}) = 1.0;
    w({0, 1, 1, 0}) = 1.0;
    h.sites.push_back(std::move(w));
  }
  return h;
}

Mpo single_site_mpo(const Eigen::Matrix2cd& op) {
  Tensor w({1, 2, 2, 1});
  for (std::size_t i = 0; i < 2; ++i) {
    for (std::size_t j = 0; j < 2; ++j) w({0, i, j, 0}) = op(i, j);
  }
  Mpo h;
  h.sites.push_back(std::move(w));
  return h;
}

Mpo mpo_sum(const Mpo& a, const Mpo& b) {
  validate(a);
  validate(b);
  if (a.length() != b.length()) throw ShapeError("MPO lengths differ");
  const std::size_t n = a.length();
  Mpo out;
  for (std::size_t k = 0; k < n; ++k) {
    const Tensor& x = a.sites[k];
    const Tensor& y = b.sites[k];
    const std::size_t d = x.dim(1);
    if (y.dim(1) != d) throw ShapeError("MPO physical dimensions differ");
    const bool first = k == 0;
    const bool last = k + 1 == n;
    const std::size_t l = first ? 1 : x.dim(0) + y.dim(0);
    const std::size_t r = last ? 1 : x.dim(3) + y.dim(3);
    const std::size_t yl = first ? 0 : x.dim(0);
    const std::size_t yr = last ? 0 : x.dim(3);
    Tensor w({l, d, d, r});
    for (std::size_t i = 0; i < x.dim(0); ++i)
      for (std::size_t s = 0; s < d; ++s)
        for (std::size_t t = 0; t < d; ++t)
          for (std::size_t j = 0; j < x.dim(3); ++j) w({i, s, t, j}) += x({i, s, t, j});
    for (std::size_t i = 0; i < y.dim(0); ++i)
      for (std::size_t s = 0; s < d; ++s)
        for (std::size_t t = 0; t < d; ++t)
          for (std::size_t j = 0; j < y.dim(3); ++j) w({yl + i, s, t, yr + j}) += y({i, s, t, j});
    out.sites.push_back(std::move(w));
  }
  return out;
}

Mpo scaled(Mpo h, cplx alpha) {
  if (!h.sites.empty()) h.sites.front() *= alpha;
  return h;
}

std::vector<int> dominant_basis_state(const Mps& m, std::size_t site_cap) {
  const std::size_t n = m.length();
  std::vector<int> bits(n, 0);
  if (n <= site_cap) {
    const Eigen::VectorXcd v = mps_to_dense(m, site_cap);
    Eigen::Index best = 0;
    v.cwiseAbs2().maxCoeff(&best);
    for (std::size_t k = 0; k < n; ++k) bits[k] = static_cast<int>((best >> (n - 1 - k)) & 1);
    return bits;
  }
  const Mps r = canonicalize(m, OrthoForm::right, SIZE_MAX, 0.0);
  Tensor left({1, 1}, {cplx{1.0, 0.0}});
  for (std::size_t k = 0; k < n; ++k) {
    const Tensor t = contract(left, r.sites[k], {{1, 0}});  // (1, s, b)
    double best_weight = -1.0;
    for (std::size_t s = 0; s < t.dim(1); ++s) {
      double w = 0.0;
      for (std::size_t b = 0; b < t.dim(2); ++b) w += std::norm(t({0, s, b}));
      if (w > best_weight) {
        best_weight = w;
        bits[k] = static_cast<int>(s);
      }
    }
    Tensor next({1, t.dim(2)});
    for (std::size_t b = 0; b < t.dim(2); ++b) next({0, b}) = t({0, static_cast<std::size_t>(bits[k]), b});
    left = std::move(next);
  }
  return bits;
}

namespace {

nlohmann::json tensor_json(const Tensor& t) {
  nlohmann::json re = nlohmann::json::array(), im = nlohmann::json::array();
  for (const auto& x : t.data()) {
    re.push_back(x.real());
    im.push_back(x.imag());
  }
  return {{"dims", t.dims()}, {"re", re}, {"im", im}};
}

Tensor tensor_from_json(const nlohmann::json& j) {
  try {
    auto dims = j.at("dims").get<std::vector<std::size_t>>();
    auto re = j.at("re").get<std::vector<double>>();
    auto im = j.at("im").get<std::vector<double>>();
    if (re.size() != im.size()) throw ParseError("tensor 're' and 'im' lengths differ");
    std::vector<cplx> data(re.size());
    for (std::size_t i = 0; i < re.size(); ++i) data[i] = {re[i], im[i]};
    return Tensor(std::move(dims), std::move(data));
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("malformed tensor: ") + e.what());
  }
}

const char* form_name(OrthoForm f) {
  switch (f) {
    case OrthoForm::left: return "left";
    case OrthoForm::right: return "right";
    case OrthoForm::mixed: return "mixed";
    case OrthoForm::none: break;
  }
  return "none";
}

OrthoForm form_from_name(const std::string& s) {
  if (s == "left") return OrthoForm::left;
  if (s == "right") return OrthoForm::right;
  if (s == "mixed") return OrthoForm::mixed;
  if (s == "none") return OrthoForm::none;
  throw ParseError("unknown orthogonality form '" + s + "'");
}

void expect_format(const nlohmann::json& j, const char* tag) {
  if (!j.contains("format") || j.at("format") != tag) {
    throw ParseError(std::string("field 'format' must be '") + tag + "'");
  }
}

}  // namespace

nlohmann::json to_json(const Mps& m) {
  nlohmann::json sites = nlohmann::json::array();
  for (const auto& t : m.sites) sites.push_back(tensor_json(t));
  return {{"format", kMpsFormatTag}, {"form", form_name(m.form)}, {"center", m.center}, {"sites", sites}};
}

nlohmann::json to_json(const Mpo& h) {
  nlohmann::json sites = nlohmann::json::array();
  for (const auto& t : h.sites) sites.push_back(tensor_json(t));
  return {{"format", kMpoFormatTag}, {"sites", sites}};
}

Mps mps_from_json(const nlohmann::json& j) {
  expect_format(j, kMpsFormatTag);
  Mps m;
  if (!j.contains("sites") || !j.at("sites").is_array()) throw ParseError("field 'sites' must be an array");
  for (const auto& s : j.at("sites")) m.sites.push_back(tensor_from_json(s));
  m.form = form_from_name(j.value("form", "none"));
  m.center = j.value("center", std::size_t{0});
  validate(m);
  return m;
}

Mpo mpo_from_json(const nlohmann::json& j) {
  expect_format(j, kMpoFormatTag);
  Mpo h;
  if (!j.contains("sites") || !j.at("sites").is_array()) throw ParseError("field 'sites' must be an array");
  for (const auto& s : j.at("sites")) h.sites.push_back(tensor_from_json(s));
  validate(h);
  return h;
}

}  // namespace qatn
