#pragma once

// Dense complex tensors with a fixed row-major linearization, general pairwise
// contraction, truncated SVD and the singular-value backward rule.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <functional>
#include <numeric>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/SVD>

namespace posit {

using cplx = std::complex<double>;
using RowMatrix = Eigen::Matrix<cplx, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

class DimensionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class NumericError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

using Shape = std::vector<std::size_t>;

inline std::size_t shape_volume(const Shape& shape) {
  return std::accumulate(shape.begin(), shape.end(), std::size_t{1}, std::multiplies<>{});
}

inline std::string shape_string(const Shape& shape) {
  std::string s = "[";
  for (std::size_t i = 0; i < shape.size(); ++i) {
    if (i) s += ",";
    s += std::to_string(shape[i]);
  }
  return s + "]";
}

class Tensor {
 public:
  Tensor() = default;

  explicit Tensor(Shape shape) : shape_(std::move(shape)), data_(shape_volume(shape_)) {
    check_extents();
  }

  Tensor(Shape shape, std::vector<cplx> data) : shape_(std::move(shape)), data_(std::move(data)) {
    check_extents();
    if (data_.size() != shape_volume(shape_)) {
      throw DimensionError("tensor data length " + std::to_string(data_.size()) +
                           " does not match shape " + shape_string(shape_));
    }
  }

  /// Row-major copy of a matrix as a rank-2 tensor.
  static Tensor from_matrix(const Eigen::Ref<const Eigen::MatrixXcd>& m) {
    Tensor t({static_cast<std::size_t>(m.rows()), static_cast<std::size_t>(m.cols())});
    Eigen::Map<RowMatrix>(t.data_.data(), m.rows(), m.cols()) = m;
    return t;
  }

  const Shape& shape() const noexcept { return shape_; }
  std::size_t rank() const noexcept { return shape_.size(); }
  std::size_t extent(std::size_t axis) const { return shape_.at(axis); }
  std::size_t size() const noexcept { return data_.size(); }

  std::span<const cplx> data() const noexcept { return data_; }
  std::span<cplx> data() noexcept { return data_; }

  cplx& operator[](std::size_t flat) { return data_[flat]; }
  const cplx& operator[](std::size_t flat) const { return data_[flat]; }

  std::size_t flat_index(std::span<const std::size_t> idx) const {
    if (idx.size() != shape_.size()) throw DimensionError("index rank mismatch");
    std::size_t flat = 0;
    for (std::size_t a = 0; a < idx.size(); ++a) {
      if (idx[a] >= shape_[a]) throw DimensionError("index out of range");
      flat = flat * shape_[a] + idx[a];
    }
    return flat;
  }

  cplx& at(std::initializer_list<std::size_t> idx) {
    return data_[flat_index(std::span<const std::size_t>(idx.begin(), idx.size()))];
  }
  const cplx& at(std::initializer_list<std::size_t> idx) const {
    return data_[flat_index(std::span<const std::size_t>(idx.begin(), idx.size()))];
  }

  Tensor reshape(Shape shape) const {
    if (shape_volume(shape) != data_.size()) {
      throw DimensionError("cannot reshape " + shape_string(shape_) + " into " + shape_string(shape));
    }
    return Tensor(std::move(shape), data_);
  }

  /// Result axis i is input axis `axes[i]`.
  Tensor permute(const std::vector<std::size_t>& axes) const {
    const std::size_t r = rank();
    if (axes.size() != r) throw DimensionError("permutation rank mismatch");
    std::vector<bool> seen(r, false);
    for (auto a : axes) {
      if (a >= r || seen[a]) throw DimensionError("invalid permutation");
      seen[a] = true;
    }
    Shape out_shape(r);
    for (std::size_t i = 0; i < r; ++i) out_shape[i] = shape_[axes[i]];
    if (std::is_sorted(axes.begin(), axes.end())) return Tensor(out_shape, data_);

    std::vector<std::size_t> in_strides(r, 1);
    for (std::size_t a = r; a-- > 1;) in_strides[a - 1] = in_strides[a] * shape_[a];
    std::vector<std::size_t> stride(r);
    for (std::size_t i = 0; i < r; ++i) stride[i] = in_strides[axes[i]];

    Tensor out(out_shape);
    std::vector<std::size_t> counter(r, 0);
    std::size_t src = 0;
    for (std::size_t dst = 0; dst < out.size(); ++dst) {
      out.data_[dst] = data_[src];
      for (std::size_t i = r; i-- > 0;) {
        if (++counter[i] < out_shape[i]) {
          src += stride[i];
          break;
        }
        src -= stride[i] * (out_shape[i] - 1);
        counter[i] = 0;
      }
    }
    return out;
  }

  /// View the leading `row_axes` axes as rows and the rest as columns.
  Eigen::MatrixXcd as_matrix(std::size_t row_axes) const {
    if (row_axes > rank()) throw DimensionError("row axis split exceeds rank");
    std::size_t rows = 1;
    for (std::size_t a = 0; a < row_axes; ++a) rows *= shape_[a];
    const std::size_t cols = rows == 0 ? 0 : data_.size() / rows;
    return Eigen::Map<const RowMatrix>(data_.data(), static_cast<Eigen::Index>(rows),
                                       static_cast<Eigen::Index>(cols));
  }

  double norm() const {
    double s = 0.0;
    for (const auto& v : data_) s += std::norm(v);
    return std::sqrt(s);
  }

  Tensor conj() const {
    Tensor out = *this;
    for (auto& v : out.data_) v = std::conj(v);
    return out;
  }

  Tensor& operator*=(cplx s) {
    for (auto& v : data_) v *= s;
    return *this;
  }

  bool all_finite() const {
    return std::all_of(data_.begin(), data_.end(),
                       [](const cplx& v) { return std::isfinite(v.real()) && std::isfinite(v.imag()); });
  }

  friend bool operator==(const Tensor&, const Tensor&) = default;

 private:
  void check_extents() const {
    for (auto e : shape_) {
      if (e == 0) throw DimensionError("tensor extents must be positive, got " + shape_string(shape_));
    }
  }

  Shape shape_;
  std::vector<cplx> data_;
};

using AxisPair = std::pair<std::size_t, std::size_t>;

/// Sum over each (axis of a, axis of b) pair. Result axes: free axes of `a`
/// in order, then free axes of `b` in order.
inline Tensor contract(const Tensor& a, const Tensor& b, const std::vector<AxisPair>& pairs) {
  std::vector<bool> a_paired(a.rank(), false), b_paired(b.rank(), false);
  for (const auto& [ia, ib] : pairs) {
    if (ia >= a.rank() || ib >= b.rank()) throw DimensionError("contraction axis out of range");
    if (a_paired[ia] || b_paired[ib]) throw DimensionError("axis paired twice");
    if (a.extent(ia) != b.extent(ib)) {
      throw DimensionError("contraction extent mismatch: " + std::to_string(a.extent(ia)) + " vs " +
                           std::to_string(b.extent(ib)));
    }
    a_paired[ia] = b_paired[ib] = true;
  }

  std::vector<std::size_t> a_order, b_order;
  Shape out_shape;
  for (std::size_t i = 0; i < a.rank(); ++i) {
    if (!a_paired[i]) {
      a_order.push_back(i);
      out_shape.push_back(a.extent(i));
    }
  }
  const std::size_t a_free = a_order.size();
  for (const auto& p : pairs) a_order.push_back(p.first);
  for (const auto& p : pairs) b_order.push_back(p.second);
  for (std::size_t i = 0; i < b.rank(); ++i) {
    if (!b_paired[i]) {
      b_order.push_back(i);
      out_shape.push_back(b.extent(i));
    }
  }

  const Eigen::MatrixXcd am = a.permute(a_order).as_matrix(a_free);
  const Eigen::MatrixXcd bm = b.permute(b_order).as_matrix(pairs.size());
  const Eigen::MatrixXcd cm = am * bm;
  if (out_shape.empty()) return Tensor(Shape{}, {cm(0, 0)});
  Tensor out = Tensor::from_matrix(cm);
  return out.reshape(out_shape);
}

struct SvdResult {
  Tensor left_isometry;                // row shape + [rank]
  std::vector<double> singular_values; // descending, non-negative
  Tensor right_isometry;               // [rank] + column shape, i.e. V^dagger
  double truncation_error = 0.0;       // discarded weight / total weight
  std::size_t row_axes = 0;
};

/// Singular values at or below this fraction of the largest one are treated as
/// exact zeros: always discarded, not counted as truncation.
inline constexpr double kSingularZeroTol = 1e-14;

/// Factor `a` across the split (leading `row_axes` axes vs the rest) and drop
/// the smallest singular values while the discarded relative weight stays at
/// or below `cutoff` and the kept rank is at most `max_rank`.
inline SvdResult svd_truncated(const Tensor& a, std::size_t row_axes, double cutoff,
                               std::size_t max_rank = static_cast<std::size_t>(-1)) {
  if (!(cutoff >= 0.0)) throw std::invalid_argument("svd cutoff must be non-negative");
  if (max_rank == 0) throw std::invalid_argument("max_rank must be positive");
  if (row_axes == 0 || row_axes >= a.rank()) throw DimensionError("svd split must leave axes on both sides");
  if (!a.all_finite()) throw NumericError("svd input contains non-finite values");

  const Eigen::MatrixXcd m = a.as_matrix(row_axes);
  Eigen::MatrixXcd u, v;
  Eigen::VectorXd s;
  if (std::min(m.rows(), m.cols()) <= 32) {
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
    u = svd.matrixU();
    v = svd.matrixV();
    s = svd.singularValues();
  } else {
    Eigen::BDCSVD<Eigen::MatrixXcd> svd(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
    u = svd.matrixU();
    v = svd.matrixV();
    s = svd.singularValues();
  }

  // Eigen returns descending values; enforce it with a stable sort so ties keep
  // their backend order.
  std::vector<Eigen::Index> order(static_cast<std::size_t>(s.size()));
  std::iota(order.begin(), order.end(), Eigen::Index{0});
  std::stable_sort(order.begin(), order.end(), [&](auto i, auto j) { return s(i) > s(j); });

  const std::size_t full = order.size();
  double total = 0.0;
  for (Eigen::Index i = 0; i < s.size(); ++i) total += s(i) * s(i);
  if (total == 0.0) throw NumericError("svd of a zero tensor");
  const double smax = s(order[0]);

  std::size_t keep = full;
  double discarded = 0.0;
  while (keep > 1) {
    const double sv = s(order[keep - 1]);
    const double w = sv * sv / total;
    const bool is_zero = sv <= kSingularZeroTol * smax;
    if (keep > max_rank || is_zero || discarded + w <= cutoff) {
      if (!is_zero) discarded += w;
      --keep;
    } else {
      break;
    }
  }

  Shape left_shape(a.shape().begin(), a.shape().begin() + static_cast<std::ptrdiff_t>(row_axes));
  Shape right_shape(a.shape().begin() + static_cast<std::ptrdiff_t>(row_axes), a.shape().end());

  Eigen::MatrixXcd uk(m.rows(), static_cast<Eigen::Index>(keep));
  Eigen::MatrixXcd vhk(static_cast<Eigen::Index>(keep), m.cols());
  SvdResult out;
  out.singular_values.resize(keep);
  for (std::size_t k = 0; k < keep; ++k) {
    uk.col(static_cast<Eigen::Index>(k)) = u.col(order[k]);
    vhk.row(static_cast<Eigen::Index>(k)) = v.col(order[k]).adjoint();
    out.singular_values[k] = s(order[k]);
  }
  left_shape.push_back(keep);
  right_shape.insert(right_shape.begin(), keep);
  out.left_isometry = Tensor::from_matrix(uk).reshape(left_shape);
  out.right_isometry = Tensor::from_matrix(vhk).reshape(right_shape);
  out.truncation_error = discarded;
  out.row_axes = row_axes;
  return out;
}

/// Backward rule for the kept singular values only: with dλ_i = Re[(U† dA V)_ii]
/// the gradient of a real loss is U·diag(upstream)·V†, shaped like the input.
/// Singular vectors are treated as constants.
inline Tensor singular_value_gradient(const SvdResult& result, std::span<const double> upstream) {
  const std::size_t r = result.singular_values.size();
  if (upstream.size() != r) {
    throw DimensionError("upstream length " + std::to_string(upstream.size()) + " != kept rank " +
                         std::to_string(r));
  }
  const Eigen::MatrixXcd u = result.left_isometry.as_matrix(result.left_isometry.rank() - 1);
  const Eigen::MatrixXcd vh = result.right_isometry.as_matrix(1);
  Eigen::VectorXcd g(static_cast<Eigen::Index>(r));
  for (std::size_t i = 0; i < r; ++i) g(static_cast<Eigen::Index>(i)) = upstream[i];
  const Eigen::MatrixXcd grad = u * g.asDiagonal() * vh;

  Shape shape(result.left_isometry.shape().begin(), result.left_isometry.shape().end() - 1);
  shape.insert(shape.end(), result.right_isometry.shape().begin() + 1, result.right_isometry.shape().end());
  return Tensor::from_matrix(grad).reshape(shape);
}

}  // namespace posit
