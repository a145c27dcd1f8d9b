#include "acms/structure.hpp"

#include <Eigen/Dense>
#include <cstdlib>
#include <random>
#include <stdexcept>

namespace acms {

namespace {

double rel(double num, double scale) { return num / (1.0 + scale); }

}  // namespace

double default_tolerance() {
  static const double tol = [] {
    if (const char* env = std::getenv("ACMS_TOLERANCE")) {
      char* end = nullptr;
      const double v = std::strtod(env, &end);
      if (end != env && v > 0.0) return v;
    }
    return 1e-9;
  }();
  return tol;
}

Structure::Structure(int n, Mat g, Mat phi, Vec xi)
    : n_(n), g_(std::move(g)), phi_(std::move(phi)), xi_(std::move(xi)) {
  eta_ = g_ * xi_;
  init();
}

Structure::Structure(int n, Mat g, Mat phi, Vec xi, Vec eta)
    : n_(n), g_(std::move(g)), phi_(std::move(phi)), xi_(std::move(xi)), eta_(std::move(eta)) {
  init();
}

void Structure::init() {
  const int N = 2 * n_ + 1;
  if (n_ < 1) throw std::invalid_argument("Structure: n must be >= 1");
  if (g_.rows() != N || g_.cols() != N || phi_.rows() != N || phi_.cols() != N ||
      xi_.size() != N || eta_.size() != N)
    throw std::invalid_argument("Structure: tensor dimensions do not match 2n+1");

  Eigen::FullPivLU<Mat> lu(g_);
  if (!lu.isInvertible()) throw std::invalid_argument("Structure: metric is singular");
  g_inv_ = lu.inverse();

  // Build the adapted unitary frame greedily: repeatedly take the standard
  // basis vector with the largest g-orthogonal residual against the span of
  // (chosen f's, their phi-images, xi), normalize, and append its phi-image.
  frame_ = Mat::Zero(N, N);
  frame_.col(N - 1) = xi_;
  std::vector<int> slots;  // columns of frame_ already filled
  slots.push_back(N - 1);
  auto g_dot = [&](const Vec& a, const Vec& b) { return a.dot(g_ * b); };
  bool ok = true;
  for (int pair = 0; pair < n_ && ok; ++pair) {
    Vec best;
    double best_norm = -1.0;
    for (int cand = 0; cand < N; ++cand) {
      Vec v = Vec::Zero(N);
      v[cand] = 1.0;
      for (int it = 0; it < 2; ++it)  // twice for numerical orthogonality
        for (int c : slots) v -= g_dot(frame_.col(c), v) * frame_.col(c);
      const double nv = std::sqrt(std::max(0.0, g_dot(v, v)));
      if (nv > best_norm) {
        best_norm = nv;
        best = v;
      }
    }
    if (best_norm < 1e-8) {
      ok = false;
      break;
    }
    best /= best_norm;
    frame_.col(pair) = best;
    frame_.col(n_ + pair) = phi_ * best;
    slots.push_back(pair);
    slots.push_back(n_ + pair);
  }
  if (ok) {
    // Accept the frame only if it is honestly unitary and phi-adapted.
    const Mat gram = frame_.transpose() * g_ * frame_;
    Eigen::FullPivLU<Mat> flu(frame_);
    if (flu.isInvertible()) {
      coframe_ = flu.inverse();
      const Mat phi_f = coframe_ * phi_ * frame_;
      const double r = (gram - Mat::Identity(N, N)).norm() + (phi_f - canonical_phi(n_)).norm();
      frame_ok_ = r < 1e-6;
    }
  }
}

const Mat& Structure::frame() const {
  if (!frame_ok_) throw std::runtime_error("Structure: no adapted frame (invalid structure)");
  return frame_;
}

const Mat& Structure::coframe() const {
  if (!frame_ok_) throw std::runtime_error("Structure: no adapted frame (invalid structure)");
  return coframe_;
}

Mat Structure::horizontal_projector() const {
  return Mat::Identity(N(), N()) - xi_ * eta_.transpose();
}

Tensor3 Structure::to_frame(const Tensor3& ambient) const { return ambient.pullback(frame()); }

Tensor3 Structure::from_frame(const Tensor3& framed) const {
  // Inverse of pullback by frame: pull back through the coframe transpose
  // acting on slots, i.e. pullback by coframe() as a basis change matrix.
  return framed.pullback(coframe());
}

Mat Structure::endo_to_frame(const Mat& endo) const { return coframe() * endo * frame(); }
Mat Structure::endo_from_frame(const Mat& endo) const { return frame() * endo * coframe(); }

ValidationReport validate_structure(const Structure& s, double tol) {
  ValidationReport rep;
  const int N = s.N();
  const Mat& g = s.g();
  const Mat& phi = s.phi();
  const Vec& xi = s.xi();
  const Vec& eta = s.eta();
  const Mat I = Mat::Identity(N, N);
  auto push = [&](const std::string& id, double r) {
    if (!(r <= tol)) rep.push_back({id, r});
  };

  push("g_symmetric", rel((g - g.transpose()).norm(), g.norm()));

  Eigen::SelfAdjointEigenSolver<Mat> es(0.5 * (g + g.transpose()));
  if (es.info() == Eigen::Success) {
    const double min_ev = es.eigenvalues().minCoeff();
    if (min_ev <= 0.0) rep.push_back({"g_positive_definite", -min_ev});
  } else {
    rep.push_back({"g_positive_definite", 1.0});
  }

  push("phi_squared", rel((phi * phi - (-I + xi * eta.transpose())).norm(), phi.norm() * phi.norm()));
  push("eta_of_xi", std::abs(eta.dot(xi) - 1.0));
  push("phi_xi", rel((phi * xi).norm(), phi.norm()));
  push("eta_after_phi", rel((eta.transpose() * phi).norm(), eta.norm() * phi.norm()));
  push("metric_compatibility",
       rel((phi.transpose() * g * phi - (g - eta * eta.transpose())).norm(), g.norm()));
  push("eta_is_g_dual_of_xi", rel((eta - g * xi).norm(), eta.norm()));
  push("xi_unit", std::abs(xi.dot(g * xi) - 1.0));
  return rep;
}

Mat canonical_phi(int n) {
  const int N = 2 * n + 1;
  Mat phi = Mat::Zero(N, N);
  for (int i = 0; i < n; ++i) {
    phi(n + i, i) = 1.0;   // phi e_i = e_{n+i}
    phi(i, n + i) = -1.0;  // phi e_{n+i} = -e_i
  }
  return phi;
}

Structure canonical_structure(int n) {
  const int N = 2 * n + 1;
  Vec xi = Vec::Zero(N);
  xi[N - 1] = 1.0;
  return Structure(n, Mat::Identity(N, N), canonical_phi(n), xi);
}

Structure random_structure(int n, std::uint64_t seed) {
  const int N = 2 * n + 1;
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> nd(0.0, 1.0);

  // Random phi-invariant positive map A on H (complex-linear block), identity
  // on xi: the metric g0 = A^T A stays compatible with the canonical phi.
  Mat X = Mat::Zero(n, n), Y = Mat::Zero(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      X(i, j) = nd(rng);
      Y(i, j) = 0.3 * nd(rng);
    }
  Mat A = Mat::Identity(N, N);
  A.block(0, 0, n, n) = Mat::Identity(n, n) + 0.3 * X;
  A.block(n, n, n, n) = Mat::Identity(n, n) + 0.3 * X;
  A.block(0, n, n, n) = -Y;
  A.block(n, 0, n, n) = Y;
  const Mat g0 = A.transpose() * A;

  // Push the whole structure through a random invertible L: an isomorphic
  // presentation in a skewed ambient basis.
  Mat L = Mat::Identity(N, N);
  for (int i = 0; i < N; ++i)
    for (int j = 0; j < N; ++j) L(i, j) += 0.25 * nd(rng);
  Eigen::FullPivLU<Mat> lu(L);
  if (!lu.isInvertible()) L = Mat::Identity(N, N), lu.compute(L);
  const Mat Linv = lu.inverse();

  const Mat phi0 = canonical_phi(n);
  Vec xi0 = Vec::Zero(N);
  xi0[N - 1] = 1.0;

  Mat phi = L * phi0 * Linv;
  Mat g = Linv.transpose() * g0 * Linv;
  Vec xi = L * xi0;
  return Structure(n, std::move(g), std::move(phi), std::move(xi));
}

Mat fundamental_form(const Structure& s) { return s.g() * s.phi(); }

bool structures_match(const Structure& a, const Structure& b, double tol) {
  if (a.n() != b.n()) return false;
  const double r = rel((a.g() - b.g()).norm(), a.g().norm()) +
                   rel((a.phi() - b.phi()).norm(), a.phi().norm()) +
                   rel((a.xi() - b.xi()).norm(), a.xi().norm());
  return r <= tol;
}

}  // namespace acms
