#include "qatn/tensor.hpp"

#include <algorithm>
#include <numeric>
#include <string>

#include "qatn/errors.hpp"

namespace qatn {

std::size_t product(std::span<const std::size_t> dims) {
  return std::accumulate(dims.begin(), dims.end(), std::size_t{1}, std::multiplies<>());
}

Tensor::Tensor() : data_(1, cplx{0.0, 0.0}) {}

Tensor::Tensor(std::vector<std::size_t> dims) : dims_(std::move(dims)) {
  for (auto d : dims_) {
    if (d == 0) throw InvalidArgument("tensor axis dimension must be >= 1");
  }
  data_.assign(product(dims_), cplx{0.0, 0.0});
}

Tensor::Tensor(std::vector<std::size_t> dims, std::vector<cplx> data)
    : dims_(std::move(dims)), data_(std::move(data)) {
  for (auto d : dims_) {
    if (d == 0) throw InvalidArgument("tensor axis dimension must be >= 1");
  }
  if (product(dims_) != data_.size()) {
    throw InvalidArgument("tensor data length " + std::to_string(data_.size()) +
                          " does not match dims product " + std::to_string(product(dims_)));
  }
}

std::size_t Tensor::offset(std::span<const std::size_t> index) const {
  if (index.size() != dims_.size()) throw ShapeError("index rank does not match tensor rank");
  std::size_t off = 0;
  for (std::size_t i = 0; i < dims_.size(); ++i) {
    if (index[i] >= dims_[i]) throw ShapeError("tensor index out of range");
    off = off * dims_[i] + index[i];
  }
  return off;
}

namespace {

std::pair<Eigen::Index, Eigen::Index> matrix_shape(const std::vector<std::size_t>& dims,
                                                   std::size_t split) {
  if (split > dims.size()) throw InvalidArgument("matrix split exceeds tensor rank");
  auto rows = product(std::span(dims).first(split));
  auto cols = product(std::span(dims).subspan(split));
  return {static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols)};
}

}  // namespace

Eigen::Map<const MatrixRM> Tensor::as_matrix(std::size_t split) const {
  auto [r, c] = matrix_shape(dims_, split);
  return {data_.data(), r, c};
}

Eigen::Map<MatrixRM> Tensor::as_matrix(std::size_t split) {
  auto [r, c] = matrix_shape(dims_, split);
  return {data_.data(), r, c};
}

Tensor Tensor::from_matrix(const Eigen::Ref<const MatrixRM>& m, std::vector<std::size_t> dims) {
  Tensor t(std::move(dims));
  if (static_cast<std::size_t>(m.size()) != t.size()) {
    throw ShapeError("matrix size does not match requested tensor dims");
  }
  Eigen::Map<MatrixRM>(t.data_.data(), m.rows(), m.cols()) = m;
  return t;
}

Tensor Tensor::conj() const {
  Tensor out = *this;
  for (auto& x : out.data_) x = std::conj(x);
  return out;
}

double Tensor::norm() const {
  double acc = 0.0;
  for (const auto& x : data_) acc += std::norm(x);
  return std::sqrt(acc);
}

Tensor& Tensor::operator*=(cplx alpha) {
  for (auto& x : data_) x *= alpha;
  return *this;
}

Tensor& Tensor::operator+=(const Tensor& other) {
  if (other.dims_ != dims_) throw ShapeError("tensor sum requires equal dims");
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += other.data_[i];
  return *this;
}

Tensor permute(const Tensor& t, std::span<const std::size_t> perm) {
  const std::size_t rank = t.rank();
  if (perm.size() != rank) throw InvalidPermutation("permutation length does not match rank");
  std::vector<bool> seen(rank, false);
  for (auto p : perm) {
    if (p >= rank || seen[p]) throw InvalidPermutation("permutation is not a bijection");
    seen[p] = true;
  }
  bool identity = true;
  for (std::size_t i = 0; i < rank; ++i) identity = identity && perm[i] == i;
  if (identity) return t;

  std::vector<std::size_t> in_strides(rank, 1);
  for (std::size_t i = rank; i-- > 1;) in_strides[i - 1] = in_strides[i] * t.dim(i);

  std::vector<std::size_t> out_dims(rank);
  std::vector<std::size_t> step(rank);
  for (std::size_t i = 0; i < rank; ++i) {
    out_dims[i] = t.dim(perm[i]);
    step[i] = in_strides[perm[i]];
  }

  Tensor out(out_dims);
  auto src = t.data();
  auto dst = out.data();
  std::vector<std::size_t> idx(rank, 0);
  std::size_t src_off = 0;
  for (std::size_t k = 0; k < dst.size(); ++k) {
    dst[k] = src[src_off];
    // odometer increment over output axes, last axis fastest
    for (std::size_t ax = rank; ax-- > 0;) {
      if (++idx[ax] < out_dims[ax]) {
        src_off += step[ax];
        break;
      }
      src_off -= step[ax] * (out_dims[ax] - 1);
      idx[ax] = 0;
    }
  }
  return out;
}

Tensor reshape(const Tensor& t, std::span<const std::size_t> groups) {
  std::size_t total = 0;
  std::vector<std::size_t> dims;
  dims.reserve(groups.size());
  for (auto g : groups) {
    if (g == 0) throw InvalidReshape("reshape group must contain at least one axis");
    if (total + g > t.rank()) throw InvalidReshape("reshape groups exceed tensor rank");
    dims.push_back(product(std::span(t.dims()).subspan(total, g)));
    total += g;
  }
  if (total != t.rank()) throw InvalidReshape("reshape groups do not cover every axis");
  return with_dims(t, std::move(dims));
}

Tensor with_dims(Tensor t, std::vector<std::size_t> dims) {
  if (product(dims) != t.size()) throw InvalidReshape("new dims do not preserve element count");
  auto data = t.data();
  return Tensor(std::move(dims), std::vector<cplx>(data.begin(), data.end()));
}

Tensor contract(const Tensor& a, const Tensor& b, const AxisPairs& pairs) {
  std::vector<bool> used_a(a.rank(), false), used_b(b.rank(), false);
  for (auto [ia, ib] : pairs) {
    if (ia >= a.rank() || ib >= b.rank()) throw ContractionMismatch("contraction axis out of range");
    if (used_a[ia] || used_b[ib]) throw ContractionMismatch("axis appears in more than one pair");
    if (a.dim(ia) != b.dim(ib)) {
      throw ContractionMismatch("paired axes differ in dimension: " + std::to_string(a.dim(ia)) +
                                " vs " + std::to_string(b.dim(ib)));
    }
    used_a[ia] = used_b[ib] = true;
  }

  std::vector<std::size_t> perm_a, perm_b, out_dims;
  for (std::size_t i = 0; i < a.rank(); ++i) {
    if (!used_a[i]) {
      perm_a.push_back(i);
      out_dims.push_back(a.dim(i));
    }
  }
  const std::size_t free_a = perm_a.size();
  for (auto [ia, ib] : pairs) {
    perm_a.push_back(ia);
    perm_b.push_back(ib);
  }
  for (std::size_t i = 0; i < b.rank(); ++i) {
    if (!used_b[i]) {
      perm_b.push_back(i);
      out_dims.push_back(b.dim(i));
    }
  }

  const Tensor pa = permute(a, perm_a);
  const Tensor pb = permute(b, perm_b);
  Tensor out(out_dims);
  out.as_matrix(free_a).noalias() = pa.as_matrix(free_a) * pb.as_matrix(pairs.size());
  return out;
}

SvdResult svd_truncated(const Tensor& t, std::size_t split, std::size_t chi_max, double rel_tol) {
  if (chi_max == 0) throw InvalidArgument("chi_max must be positive");
  if (split < 1 || split >= t.rank()) throw InvalidArgument("svd split must satisfy 1 <= split < rank");
  if (rel_tol < 0.0) throw InvalidArgument("rel_tol must be non-negative");

  const Eigen::MatrixXcd m = t.as_matrix(split);
  Eigen::BDCSVD<Eigen::MatrixXcd> svd(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const Eigen::VectorXd& sv = svd.singularValues();
  const auto full = static_cast<std::size_t>(sv.size());

  // Eigen returns values sorted descending; a stable sort keeps equal values in
  // the order the decomposition produced them.
  std::vector<std::size_t> order(full);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t x, std::size_t y) { return sv[x] > sv[y]; });

  std::size_t kept = 0;
  const double s1 = full > 0 ? sv[order[0]] : 0.0;
  if (s1 <= 0.0) {
    kept = 1;
  } else {
    for (auto i : order) {
      if (sv[i] >= rel_tol * s1) ++kept;
    }
    kept = std::min(kept, chi_max);
  }

  SvdResult r;
  r.kept = kept;
  double discarded = 0.0;
  for (std::size_t k = kept; k < full; ++k) discarded += sv[order[k]] * sv[order[k]];
  r.truncation_error = std::sqrt(discarded);

  const auto rows = m.rows();
  const auto cols = m.cols();
  MatrixRM u(rows, kept), vd(kept, cols);
  r.s.resize(kept);
  for (std::size_t k = 0; k < kept; ++k) {
    const auto src = static_cast<Eigen::Index>(order[k]);
    const auto dst = static_cast<Eigen::Index>(k);
    r.s[k] = s1 <= 0.0 ? 0.0 : sv[src];
    u.col(dst) = svd.matrixU().col(src);
    vd.row(dst) = svd.matrixV().col(src).adjoint();
  }

  std::vector<std::size_t> udims(t.dims().begin(), t.dims().begin() + split);
  udims.push_back(kept);
  std::vector<std::size_t> vdims{kept};
  vdims.insert(vdims.end(), t.dims().begin() + split, t.dims().end());
  r.u = Tensor::from_matrix(u, std::move(udims));
  r.v_dag = Tensor::from_matrix(vd, std::move(vdims));
  return r;
}

}  // namespace qatn
