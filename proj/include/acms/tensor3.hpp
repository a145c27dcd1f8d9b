#pragma once

#include <Eigen/Dense>
#include <cassert>
#include <cmath>
#include <vector>

namespace acms {

using Mat = Eigen::MatrixXd;
using Vec = Eigen::VectorXd;

/// Dense order-3 tensor over R^N with entries T(i,j,k), stored flat.
/// Arithmetic is entrywise; metric-aware norms live in cv_space.
class Tensor3 {
public:
  Tensor3() = default;
  explicit Tensor3(int dim) : dim_(dim), v_(static_cast<size_t>(dim) * dim * dim, 0.0) {}

  int dim() const { return dim_; }
  size_t size() const { return v_.size(); }

  double& operator()(int i, int j, int k) { return v_[idx(i, j, k)]; }
  double operator()(int i, int j, int k) const { return v_[idx(i, j, k)]; }

  double* data() { return v_.data(); }
  const double* data() const { return v_.data(); }

  /// Flattened view in the fixed (i,j,k) row-major order used throughout.
  Eigen::Map<const Vec> flat() const {
    return Eigen::Map<const Vec>(v_.data(), static_cast<Eigen::Index>(v_.size()));
  }
  static Tensor3 from_flat(int dim, const Vec& f) {
    Tensor3 t(dim);
    assert(f.size() == static_cast<Eigen::Index>(t.size()));
    for (size_t p = 0; p < t.v_.size(); ++p) t.v_[p] = f[static_cast<Eigen::Index>(p)];
    return t;
  }

  Tensor3& operator+=(const Tensor3& o) {
    assert(dim_ == o.dim_);
    for (size_t p = 0; p < v_.size(); ++p) v_[p] += o.v_[p];
    return *this;
  }
  Tensor3& operator-=(const Tensor3& o) {
    assert(dim_ == o.dim_);
    for (size_t p = 0; p < v_.size(); ++p) v_[p] -= o.v_[p];
    return *this;
  }
  Tensor3& operator*=(double c) {
    for (double& x : v_) x *= c;
    return *this;
  }

  friend Tensor3 operator+(Tensor3 a, const Tensor3& b) { return a += b; }
  friend Tensor3 operator-(Tensor3 a, const Tensor3& b) { return a -= b; }
  friend Tensor3 operator*(double c, Tensor3 a) { return a *= c; }
  friend Tensor3 operator-(Tensor3 a) { return a *= -1.0; }

  /// Entrywise Euclidean norm; coincides with the invariant norm in
  /// g-orthonormal coordinates.
  double frobenius() const {
    double s = 0.0;
    for (double x : v_) s += x * x;
    return std::sqrt(s);
  }
  double max_abs() const {
    double m = 0.0;
    for (double x : v_) m = std::max(m, std::abs(x));
    return m;
  }

  /// Slice T(i,.,.) as an N x N matrix (j rows, k cols).
  Mat slice_first(int i) const {
    Mat m(dim_, dim_);
    for (int j = 0; j < dim_; ++j)
      for (int k = 0; k < dim_; ++k) m(j, k) = (*this)(i, j, k);
    return m;
  }
  void set_slice_first(int i, const Mat& m) {
    for (int j = 0; j < dim_; ++j)
      for (int k = 0; k < dim_; ++k) (*this)(i, j, k) = m(j, k);
  }

  /// Cyclic sum T(X,Y,Z) + T(Y,Z,X) + T(Z,X,Y).
  Tensor3 cyclic_sum() const {
    Tensor3 r(dim_);
    for (int i = 0; i < dim_; ++i)
      for (int j = 0; j < dim_; ++j)
        for (int k = 0; k < dim_; ++k)
          r(i, j, k) = (*this)(i, j, k) + (*this)(j, k, i) + (*this)(k, i, j);
    return r;
  }

  /// Pull all three slots back through the columns of B: (B*T)(a,b,c) = T(Be_a, Be_b, Be_c).
  Tensor3 pullback(const Mat& B) const {
    const int N = dim_;
    assert(B.rows() == N && B.cols() == N);
    // Contract one slot at a time to keep this O(N^4).
    Tensor3 t1(N), t2(N), t3(N);
    for (int a = 0; a < N; ++a)
      for (int j = 0; j < N; ++j)
        for (int k = 0; k < N; ++k) {
          double s = 0.0;
          for (int i = 0; i < N; ++i) s += B(i, a) * (*this)(i, j, k);
          t1(a, j, k) = s;
        }
    for (int a = 0; a < N; ++a)
      for (int b = 0; b < N; ++b)
        for (int k = 0; k < N; ++k) {
          double s = 0.0;
          for (int j = 0; j < N; ++j) s += B(j, b) * t1(a, j, k);
          t2(a, b, k) = s;
        }
    for (int a = 0; a < N; ++a)
      for (int b = 0; b < N; ++b)
        for (int c = 0; c < N; ++c) {
          double s = 0.0;
          for (int k = 0; k < N; ++k) s += B(k, c) * t2(a, b, k);
          t3(a, b, c) = s;
        }
    return t3;
  }

private:
  size_t idx(int i, int j, int k) const {
    assert(i >= 0 && i < dim_ && j >= 0 && j < dim_ && k >= 0 && k < dim_);
    return (static_cast<size_t>(i) * dim_ + j) * dim_ + k;
  }

  int dim_ = 0;
  std::vector<double> v_;
};

/// Dense order-4 tensor, used for curvature R(i,j,k,l).
class Tensor4 {
public:
  Tensor4() = default;
  explicit Tensor4(int dim)
      : dim_(dim), v_(static_cast<size_t>(dim) * dim * dim * dim, 0.0) {}

  int dim() const { return dim_; }
  double& operator()(int i, int j, int k, int l) { return v_[idx(i, j, k, l)]; }
  double operator()(int i, int j, int k, int l) const { return v_[idx(i, j, k, l)]; }
  double max_abs() const {
    double m = 0.0;
    for (double x : v_) m = std::max(m, std::abs(x));
    return m;
  }

private:
  size_t idx(int i, int j, int k, int l) const {
    assert(i >= 0 && i < dim_ && j >= 0 && j < dim_ && k >= 0 && k < dim_ && l >= 0 && l < dim_);
    return ((static_cast<size_t>(i) * dim_ + j) * dim_ + k) * dim_ + l;
  }
  int dim_ = 0;
  std::vector<double> v_;
};

}  // namespace acms
