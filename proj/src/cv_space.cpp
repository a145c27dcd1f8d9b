#include "acms/cv_space.hpp"

#include <Eigen/Dense>
#include <map>
#include <mutex>
#include <random>
#include <stdexcept>

namespace acms {

namespace {

constexpr double kRankThreshold = 1e-8;

/// Null-space basis (orthonormal columns) of M, singular values < thresh
/// counted as zero.
Mat null_space(const Mat& M, double thresh = kRankThreshold) {
  if (M.rows() == 0) return Mat::Identity(M.cols(), M.cols());
  Eigen::JacobiSVD<Mat> svd(M, Eigen::ComputeFullV);
  const auto& sv = svd.singularValues();
  const double scale = sv.size() > 0 ? sv[0] : 0.0;
  int rank = 0;
  for (Eigen::Index i = 0; i < sv.size(); ++i)
    if (sv[i] > thresh * std::max(1.0, scale)) ++rank;
  return svd.matrixV().rightCols(M.cols() - rank);
}

}  // namespace

int cv_dimension(int n) { return (2 * n + 1) * (n * n + n); }

Mat cv_constraint_matrix(int n) {
  const int N = 2 * n + 1;
  const int NE = N * N * N;
  const Mat phi = canonical_phi(n);
  auto flat = [N](int i, int j, int k) { return (i * N + j) * N + k; };
  const int xi = N - 1;

  Mat C = Mat::Zero(2 * NE, NE);
  int row = 0;
  // alpha(X,Y,Z) + alpha(X,Z,Y) = 0
  for (int i = 0; i < N; ++i)
    for (int j = 0; j < N; ++j)
      for (int k = 0; k < N; ++k) {
        C(row, flat(i, j, k)) += 1.0;
        C(row, flat(i, k, j)) += 1.0;
        ++row;
      }
  // alpha(X,Y,Z) + alpha(X,phiY,phiZ) - eta(Y) alpha(X,xi,Z) - eta(Z) alpha(X,Y,xi) = 0
  for (int i = 0; i < N; ++i)
    for (int j = 0; j < N; ++j)
      for (int k = 0; k < N; ++k) {
        C(row, flat(i, j, k)) += 1.0;
        for (int b = 0; b < N; ++b)
          for (int c = 0; c < N; ++c) {
            const double w = phi(b, j) * phi(c, k);
            if (w != 0.0) C(row, flat(i, b, c)) += w;
          }
        if (j == xi) C(row, flat(i, xi, k)) -= 1.0;
        if (k == xi) C(row, flat(i, j, xi)) -= 1.0;
        ++row;
      }
  return C;
}

int cv_dimension_numeric(int n) {
  return static_cast<int>(null_space(cv_constraint_matrix(n)).cols());
}

const Mat& cv_basis(int n) {
  static std::mutex mu;
  static std::map<int, Mat> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(n);
  if (it == cache.end()) it = cache.emplace(n, null_space(cv_constraint_matrix(n))).first;
  return it->second;
}

double cv_inner_product(const Tensor3& a, const Tensor3& b, const Structure& s) {
  const int N = s.N();
  if (a.dim() != N || b.dim() != N)
    throw std::invalid_argument("cv_inner_product: tensor/structure dimension mismatch");
  // Raise each slot of a with g^{-1}, then contract entrywise with b.
  const Mat& gi = s.g_inv();
  Tensor3 raised = a.pullback(gi);  // g^{-1} symmetric: contraction == pullback
  double acc = 0.0;
  const double* pa = raised.data();
  const double* pb = b.data();
  const size_t sz = raised.size();
  for (size_t p = 0; p < sz; ++p) acc += pa[p] * pb[p];
  return acc;
}

double cv_norm(const Tensor3& a, const Structure& s) {
  return std::sqrt(std::max(0.0, cv_inner_product(a, a, s)));
}

Tensor3 cv_project_symmetrize(const Tensor3& raw, const Structure& s) {
  const int N = s.N();
  if (raw.dim() != N)
    throw std::invalid_argument("cv_project_symmetrize: tensor/structure dimension mismatch");
  // Work in frame coordinates (canonical structure, Euclidean product).
  const Tensor3 f = s.to_frame(raw);
  const Mat phi0 = canonical_phi(s.n());
  Mat p0 = Mat::Identity(N, N);
  p0(N - 1, N - 1) = 0.0;  // horizontal projector in frame coordinates
  Tensor3 out(N);
  for (int i = 0; i < N; ++i) {
    const Mat sl = f.slice_first(i);
    const Mat skew = 0.5 * (sl - sl.transpose());
    // u(n) part of a 2-form: 1/2 (p w p + phi^T w phi); the m part is the rest.
    const Mat un = 0.5 * (p0 * skew * p0 + phi0.transpose() * skew * phi0);
    out.set_slice_first(i, skew - un);
  }
  return s.from_frame(out);
}

double cv_membership_residual(const Tensor3& alpha, const Structure& s) {
  const Tensor3 proj = cv_project_symmetrize(alpha, s);
  return cv_norm(alpha - proj, s) / (1.0 + cv_norm(alpha, s));
}

Tensor3 random_cv_tensor(const Structure& s, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> nd(0.0, 1.0);
  Tensor3 raw(s.N());
  for (int i = 0; i < s.N(); ++i)
    for (int j = 0; j < s.N(); ++j)
      for (int k = 0; k < s.N(); ++k) raw(i, j, k) = nd(rng);
  return cv_project_symmetrize(raw, s);
}

}  // namespace acms
