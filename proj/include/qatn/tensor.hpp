#pragma once

#include <complex>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <utility>
#include <vector>

#include <Eigen/Dense>

namespace qatn {

using cplx = std::complex<double>;
using MatrixRM = Eigen::Matrix<cplx, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

/// Dense complex tensor stored row-major over its dimensions.
///
/// A rank-0 tensor holds exactly one element and is what a full contraction
/// produces.
class Tensor {
 public:
  Tensor();
  explicit Tensor(std::vector<std::size_t> dims);
  Tensor(std::vector<std::size_t> dims, std::vector<cplx> data);

  std::size_t rank() const { return dims_.size(); }
  const std::vector<std::size_t>& dims() const { return dims_; }
  std::size_t dim(std::size_t axis) const { return dims_.at(axis); }
  std::size_t size() const { return data_.size(); }

  std::span<const cplx> data() const { return data_; }
  std::span<cplx> data() { return data_; }

  cplx& operator()(std::initializer_list<std::size_t> index) { return data_[offset(index)]; }
  const cplx& operator()(std::initializer_list<std::size_t> index) const { return data_[offset(index)]; }

  cplx& at(std::span<const std::size_t> index) { return data_[offset(index)]; }
  const cplx& at(std::span<const std::size_t> index) const { return data_[offset(index)]; }

  /// Row-major matrix view grouping the first `split` axes into rows.
  Eigen::Map<const MatrixRM> as_matrix(std::size_t split) const;
  Eigen::Map<MatrixRM> as_matrix(std::size_t split);

  static Tensor from_matrix(const Eigen::Ref<const MatrixRM>& m, std::vector<std::size_t> dims);

  Tensor conj() const;
  double norm() const;
  Tensor& operator*=(cplx alpha);
  Tensor& operator+=(const Tensor& other);
  friend Tensor operator*(cplx alpha, Tensor t) { return t *= alpha; }
  friend Tensor operator+(Tensor a, const Tensor& b) { return a += b; }

 private:
  std::size_t offset(std::span<const std::size_t> index) const;
  std::size_t offset(std::initializer_list<std::size_t> index) const {
    return offset(std::span<const std::size_t>(index.begin(), index.size()));
  }

  std::vector<std::size_t> dims_;
  std::vector<cplx> data_;
};

std::size_t product(std::span<const std::size_t> dims);

/// Reorders axes: result axis i is input axis perm[i].
Tensor permute(const Tensor& t, std::span<const std::size_t> perm);
inline Tensor permute(const Tensor& t, std::initializer_list<std::size_t> perm) {
  return permute(t, std::span<const std::size_t>(perm.begin(), perm.size()));
}

/// Merges consecutive axes; `groups` lists how many axes go into each new axis.
/// The flat data is untouched.
Tensor reshape(const Tensor& t, std::span<const std::size_t> groups);
inline Tensor reshape(const Tensor& t, std::initializer_list<std::size_t> groups) {
  return reshape(t, std::span<const std::size_t>(groups.begin(), groups.size()));
}

/// Replaces the dimension list outright, keeping the flat data.
Tensor with_dims(Tensor t, std::vector<std::size_t> dims);

using AxisPairs = std::vector<std::pair<std::size_t, std::size_t>>;

/// Sums over each (axis-of-a, axis-of-b) pair. Result axes are the free axes of
/// `a` followed by the free axes of `b`, each in original order.
Tensor contract(const Tensor& a, const Tensor& b, const AxisPairs& pairs);

struct SvdResult {
  Tensor u;                  // (left dims..., kept)
  std::vector<double> s;     // non-increasing, non-negative
  Tensor v_dag;              // (kept, right dims...)
  double truncation_error = 0.0;
  std::size_t kept = 0;
};

inline constexpr double kDefaultSvdRelTol = 1e-12;

/// Truncated SVD of the matrix formed by grouping the first `split` axes as
/// rows. Keeps min(chi_max, #{s_i >= rel_tol * s_1}) values.
SvdResult svd_truncated(const Tensor& t, std::size_t split, std::size_t chi_max,
                        double rel_tol = kDefaultSvdRelTol);

}  // namespace qatn
