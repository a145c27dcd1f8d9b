#include "acms/connections.hpp"

#include <algorithm>
#include <cmath>

#include "acms/classify.hpp"
#include "acms/cv_space.hpp"
#include "acms/intrinsic.hpp"

namespace acms {

namespace {

/// Metric (raised) norm of a lowered 3-tensor.
double lowered_norm3(const Tensor3& T, const Structure& s) {
  const Tensor3 raised = T.pullback(s.g_inv());
  double v = 0.0;
  const int N = T.dim();
  for (int i = 0; i < N; ++i)
    for (int j = 0; j < N; ++j)
      for (int k = 0; k < N; ++k) v += T(i, j, k) * raised(i, j, k);
  return std::sqrt(std::max(0.0, v));
}

Tensor3 scaled(const Tensor3& T, double c) {
  Tensor3 out = T;
  for (int i = 0; i < T.dim(); ++i)
    for (int j = 0; j < T.dim(); ++j)
      for (int k = 0; k < T.dim(); ++k) out(i, j, k) = c * T(i, j, k);
  return out;
}

/// Full skew-symmetrization over the three slots.
Tensor3 total_skew(const Tensor3& T) {
  const int N = T.dim();
  Tensor3 out(N);
  for (int i = 0; i < N; ++i)
    for (int j = 0; j < N; ++j)
      for (int k = 0; k < N; ++k)
        out(i, j, k) = (T(i, j, k) + T(j, k, i) + T(k, i, j) - T(j, i, k) - T(i, k, j) -
                        T(k, j, i)) /
                       6.0;
  return out;
}

/// Endomorphism of the i-th slice of a lowered potential:
/// A(i,j,k) = g(A(e_i) e_j, e_k) => A(e_i) = g^{-1} M_i^T.
Mat slice_endo(const Tensor3& A, const Structure& s, int i) {
  const int N = A.dim();
  Mat M(N, N);
  for (int j = 0; j < N; ++j)
    for (int k = 0; k < N; ++k) M(j, k) = A(i, j, k);
  return s.g_inv() * M.transpose();
}

/// xi-contraction on the first slot, as a matrix.
Mat contract_first_xi(const Tensor3& T, const Vec& xi) {
  const int N = T.dim();
  Mat out = Mat::Zero(N, N);
  for (int j = 0; j < N; ++j)
    for (int k = 0; k < N; ++k) {
      double v = 0.0;
      for (int a = 0; a < N; ++a) v += xi[a] * T(a, j, k);
      out(j, k) = v;
    }
  return out;
}

/// T = eta ^ d eta + N - dPhi(phi., phi., phi.) - eta ^ (xi _| N). The sign
/// of the dPhi pullback is pinned by uniqueness of the adapted connection
/// with skew torsion: with Phi(X,Y) = g(X, phiY) and the standard exterior
/// differential, only this sign parallelizes phi on the horizontal classes
/// (pulling a 3-form back through phi vs. its horizontal inverse -phi flips
/// the sign, so conventions differ across the literature).
Tensor3 characteristic_torsion_from_parts(const Structure& s, const Mat& deta,
                                          const Tensor3& dPhi, const Tensor3& Nf) {
  const Vec& eta = s.eta();
  Tensor3 T = wedge_covector_two_form(eta, deta);
  T += Nf;
  T -= dPhi.pullback(s.phi());
  Tensor3 w = wedge_covector_two_form(eta, contract_first_xi(Nf, s.xi()));
  T -= w;
  return T;
}

}  // namespace

Tensor3 minimal_connection(const Tensor3& alpha, const Structure& s) {
  const int N = s.N();
  const Mat& phi = s.phi();
  const Vec& eta = s.eta();
  const Mat S = extract_S(alpha, s);
  const Mat gps = s.g() * (phi * S);
  Tensor3 A(N);
  for (int i = 0; i < N; ++i)
    for (int j = 0; j < N; ++j)
      for (int k = 0; k < N; ++k) {
        double v = 0.0;
        for (int c = 0; c < N; ++c) v -= phi(c, k) * alpha(i, j, c);
        v -= 2.0 * gps(j, i) * eta[k];
        v += eta[j] * gps(k, i);
        A(i, j, k) = 0.5 * v;
      }
  return A;
}

Tensor3 minimal_connection_h_parallel(const Mat& S, const Mat& P, const Structure& s) {
  const int N = s.N();
  const Vec& eta = s.eta();
  const Mat gphi = s.g() * s.phi();
  const Mat Pgphi = P.transpose() * gphi;  // (j,k) = g(P e_j, phi e_k)
  const Mat Sgphi = S.transpose() * gphi;  // (i,j) = g(S e_i, phi e_j)
  const Vec sxi_gphi = gphi.transpose() * (S * s.xi());  // [k] = g(S xi, phi e_k)
  Tensor3 A(N);
  for (int i = 0; i < N; ++i)
    for (int j = 0; j < N; ++j)
      for (int k = 0; k < N; ++k)
        A(i, j, k) = 0.5 * (-eta[i] * Pgphi(j, k) + eta[i] * eta[j] * sxi_gphi[k] +
                            2.0 * eta[k] * Sgphi(i, j) - 2.0 * eta[j] * Sgphi(i, k));
  return A;
}

double AdaptedReport::max_residual() const {
  return std::max(std::max(metric, phi), std::max(xi, minimality));
}

AdaptedReport verify_adapted(const Tensor3& A, const Tensor3& alpha, const Structure& s) {
  const int N = s.N();
  const Mat& phi = s.phi();
  const Mat p = s.horizontal_projector();
  const Mat S = extract_S(alpha, s);
  const Mat phiS = phi * S;
  AdaptedReport rep;
  for (int i = 0; i < N; ++i)
    for (int j = 0; j < N; ++j)
      for (int k = 0; k < N; ++k)
        rep.metric = std::max(rep.metric, std::abs(A(i, j, k) + A(i, k, j)));
  for (int i = 0; i < N; ++i) {
    const Mat Ei = slice_endo(A, s, i);
    // (nabla_i phi) as endomorphism from alpha: g(Y, F_i Z) = alpha(i, Y, Z).
    Mat Mi(N, N);
    for (int j = 0; j < N; ++j)
      for (int k = 0; k < N; ++k) Mi(j, k) = alpha(i, j, k);
    const Mat Fi = s.g_inv() * Mi;
    rep.phi = std::max(rep.phi, (Ei * phi - phi * Ei + Fi).norm());
    rep.xi = std::max(rep.xi, (Ei * s.xi() - phiS.col(i)).norm());
    // u(n)-part of the lowered 2-form of A(e_i).
    const Mat w = Mi;  // w(j,k) = g(A(e_i) e_j, e_k)
    const Mat upart = 0.5 * (p.transpose() * w * p + phi.transpose() * w * phi);
    rep.minimality = std::max(rep.minimality, upart.norm());
  }
  return rep;
}

AdaptedReport verify_adapted_model(const Tensor3& A, const LieAlgebraModel& m) {
  const Structure& s = m.s;
  const int N = s.N();
  const Tensor3 gamma0 = levi_civita(m);
  // Connection coefficients of nabla^g + A.
  Tensor3 gamma = gamma0;
  for (int i = 0; i < N; ++i) {
    const Mat Ei = slice_endo(A, s, i);
    for (int j = 0; j < N; ++j)
      for (int k = 0; k < N; ++k) gamma(i, j, k) += Ei(k, j);
  }
  AdaptedReport rep = verify_adapted(A, nabla_Phi(m), s);  // reuse minimality
  rep.metric = rep.phi = rep.xi = 0.0;
  const Mat& g = s.g();
  const Mat& phi = s.phi();
  for (int i = 0; i < N; ++i) {
    Mat nab_g = Mat::Zero(N, N), nab_phi = Mat::Zero(N, N);
    Vec nab_xi = Vec::Zero(N);
    for (int j = 0; j < N; ++j) {
      for (int k = 0; k < N; ++k) {
        double vg = 0.0;
        for (int l = 0; l < N; ++l)
          vg += gamma(i, j, l) * g(l, k) + g(j, l) * gamma(i, k, l);
        nab_g(j, k) = -vg;  // (nabla_i g)(e_j, e_k) for left-invariant fields
        double vp = 0.0;
        for (int b = 0; b < N; ++b) vp += phi(b, k) * gamma(i, b, j);
        for (int mm = 0; mm < N; ++mm) vp -= gamma(i, k, mm) * phi(j, mm);
        nab_phi(j, k) = vp;  // j-th coordinate of (nabla_i phi) e_k
      }
      double vx = 0.0;
      for (int b = 0; b < N; ++b) vx += s.xi()[b] * gamma(i, b, j);
      nab_xi[j] = vx;
    }
    rep.metric = std::max(rep.metric, nab_g.norm());
    rep.phi = std::max(rep.phi, nab_phi.norm());
    rep.xi = std::max(rep.xi, nab_xi.norm());
  }
  return rep;
}

Tensor3 torsion_from_potential(const Tensor3& A) {
  const int N = A.dim();
  Tensor3 T(N);
  for (int i = 0; i < N; ++i)
    for (int j = 0; j < N; ++j)
      for (int k = 0; k < N; ++k) T(i, j, k) = A(i, j, k) - A(j, i, k);
  return T;
}

Tensor3 potential_from_torsion(const Tensor3& T) {
  const int N = T.dim();
  Tensor3 A(N);
  for (int i = 0; i < N; ++i)
    for (int j = 0; j < N; ++j)
      for (int k = 0; k < N; ++k)
        A(i, j, k) = 0.5 * (T(i, j, k) - T(j, k, i) + T(k, i, j));
  return A;
}

TorsionTypes torsion_type_decompose(const Tensor3& A, const Structure& s) {
  const int N = A.dim();
  const Mat& g = s.g();
  const Mat& gi = s.g_inv();
  TorsionTypes out;
  out.A3 = Tensor3(N);
  for (int i = 0; i < N; ++i)
    for (int j = 0; j < N; ++j)
      for (int k = 0; k < N; ++k)
        out.A3(i, j, k) = (A(i, j, k) + A(j, k, i) + A(k, i, j)) / 3.0;
  out.theta = Vec::Zero(N);
  for (int k = 0; k < N; ++k) {
    double v = 0.0;
    for (int a = 0; a < N; ++a)
      for (int b = 0; b < N; ++b) v += gi(a, b) * A(a, b, k);
    out.theta[k] = v / (N - 1);
  }
  out.A1 = Tensor3(N);
  for (int i = 0; i < N; ++i)
    for (int j = 0; j < N; ++j)
      for (int k = 0; k < N; ++k)
        out.A1(i, j, k) = g(i, j) * out.theta[k] - g(i, k) * out.theta[j];
  out.A2 = A;
  out.A2 -= out.A1;
  out.A2 -= out.A3;
  out.n1 = lowered_norm3(out.A1, s);
  out.n2 = lowered_norm3(out.A2, s);
  out.n3 = lowered_norm3(out.A3, s);
  return out;
}

std::map<int, std::array<bool, 3>> minimal_torsion_types() {
  return {
      {5, {true, false, false}},  {6, {false, true, true}},  {7, {false, true, true}},
      {8, {false, true, false}},  {9, {false, true, false}}, {10, {false, true, true}},
      {11, {false, true, true}},  {12, {true, true, false}},
  };
}

namespace {

CharacteristicReport characteristic_core(const Tensor3& alpha, const Structure& s,
                                         double tol, const Mat* deta_direct,
                                         const Tensor3* N_direct, const Mat* lie_g,
                                         const Tensor3* dPhi_direct) {
  CharacteristicReport rep;
  const double scale = 1.0 + cv_norm(alpha, s);
  const HParallelSplit sp = split_cv_tensor(alpha, s);
  const Mat gps = s.g() * (s.phi() * sp.S);

  const Mat lg = lie_g != nullptr ? *lie_g : Mat((gps + gps.transpose()));
  rep.killing_residual = (lg.norm() + (sp.S * s.xi()).norm()) / scale;

  const Tensor3 Nf = N_direct != nullptr ? *N_direct : nijenhuis_from_alpha(alpha, s);
  Tensor3 nskew = Nf;
  nskew -= total_skew(Nf);
  rep.nijenhuis_skew_residual = nskew.frobenius() / scale;

  double cls = 0.0;
  for (int c : {2, 5, 8, 9, 12}) {
    const double v = component_norm(alpha, ClassId::irreducible(c), s);
    cls += v * v;
  }
  const double c11 = component_norm(alpha, ClassId::c_lambda_mu(1.0, 1.0), s);
  rep.class_residual = std::sqrt(cls + c11 * c11) / scale;

  rep.endo_h_parallel_residual =
      rep.killing_residual + (s.g() * (sp.P + sp.h)).norm() / scale;

  rep.exists = rep.killing_residual <= tol && rep.nijenhuis_skew_residual <= tol;
  rep.routes_agree = rep.exists == (rep.class_residual <= tol);

  const Mat deta = deta_direct != nullptr ? *deta_direct : d_eta_from_S(sp.S, s);
  const Tensor3 dPhi = dPhi_direct != nullptr ? *dPhi_direct : d_Phi_from_alpha(alpha, s);
  rep.T = characteristic_torsion_from_parts(s, deta, dPhi, Nf);
  Tensor3 tskew = rep.T;
  tskew -= total_skew(rep.T);
  rep.torsion_skew_residual = tskew.frobenius() / (1.0 + rep.T.frobenius());
  rep.adapted = verify_adapted(scaled(rep.T, 0.5), alpha, s);
  rep.adapted.minimality = 0.0;  // not a property of the characteristic connection
  return rep;
}

}  // namespace

CharacteristicReport characteristic_connection(const Tensor3& alpha, const Structure& s,
                                               double tol) {
  return characteristic_core(alpha, s, tol, nullptr, nullptr, nullptr, nullptr);
}

CharacteristicReport characteristic_connection_model(const LieAlgebraModel& m, double tol) {
  const Tensor3 alpha = nabla_Phi(m);
  const CharacteristicReport alpha_route =
      characteristic_core(alpha, m.s, tol, nullptr, nullptr, nullptr, nullptr);
  const Mat deta = d_eta_direct(m);
  const Tensor3 Nf = nijenhuis_direct(m);
  const Mat lg = lie_derivative_g(m);
  const Tensor3 dPhi = d_Phi_direct(m);
  CharacteristicReport rep = characteristic_core(alpha, m.s, tol, &deta, &Nf, &lg, &dPhi);
  Tensor3 dT = rep.T;
  dT -= alpha_route.T;
  const bool torsions_match = dT.frobenius() <= tol * (1.0 + alpha_route.T.frobenius());
  rep.routes_agree = rep.routes_agree && (rep.exists == alpha_route.exists) && torsions_match;
  return rep;
}

Tensor3 characteristic_torsion(const Tensor3& alpha, const Structure& s) {
  const Mat S = extract_S(alpha, s);
  return characteristic_torsion_from_parts(s, d_eta_from_S(S, s), d_Phi_from_alpha(alpha, s),
                                           nijenhuis_from_alpha(alpha, s));
}

Tensor3 characteristic_torsion_model(const LieAlgebraModel& m) {
  return characteristic_torsion_from_parts(m.s, d_eta_direct(m), d_Phi_direct(m),
                                           nijenhuis_direct(m));
}

ParallelTorsionReport parallel_torsion_check(const LieAlgebraModel& m) {
  const Structure& s = m.s;
  const int N = s.N();
  const Mat& g = s.g();
  const Vec& xi = s.xi();
  const Vec& eta = s.eta();
  ParallelTorsionReport rep;

  const Tensor3 T = characteristic_torsion_model(m);
  const Tensor3 gamma0 = levi_civita(m);
  Tensor3 gamma = gamma0;
  for (int i = 0; i < N; ++i)
    for (int j = 0; j < N; ++j)
      for (int k = 0; k < N; ++k) {
        double v = 0.0;
        for (int l = 0; l < N; ++l) v += s.g_inv()(k, l) * T(i, j, l);
        gamma(i, j, k) += 0.5 * v;
      }
  const double tscale = 1.0 + T.max_abs();
  for (int i = 0; i < N; ++i)
    for (int j = 0; j < N; ++j)
      for (int k = 0; k < N; ++k)
        for (int l = 0; l < N; ++l) {
          double v = 0.0;
          for (int mm = 0; mm < N; ++mm)
            v -= gamma(i, j, mm) * T(mm, k, l) + gamma(i, k, mm) * T(j, mm, l) +
                 gamma(i, l, mm) * T(j, k, mm);
          rep.res_i = std::max(rep.res_i, std::abs(v));
        }
  rep.res_i /= tscale;

  const Tensor3 alpha = nabla_Phi(m);
  const HParallelSplit sp = split_cv_tensor(alpha, s);
  rep.x_tilde = sp.S * sp.S - sp.h * sp.S;
  const Mat gXt = g * rep.x_tilde;
  const Tensor4 R = curvature(m);
  const double rscale = 1.0 + R.max_abs();
  for (int x = 0; x < N; ++x)
    for (int y = 0; y < N; ++y)
      for (int w = 0; w < N; ++w) {
        double lhs = 0.0;
        for (int a = 0; a < N; ++a) lhs += xi[a] * R(a, x, y, w);
        const double rhs = -eta[y] * gXt(w, x) + gXt(y, x) * eta[w];
        rep.res_ii = std::max(rep.res_ii, std::abs(lhs - rhs));
        double lhs3 = 0.0;
        for (int a = 0; a < N; ++a) lhs3 += xi[a] * R(x, y, a, w);
        const double rhs3 = eta[y] * gXt(w, x) - eta[x] * gXt(w, y);
        rep.res_iii = std::max(rep.res_iii, std::abs(lhs3 - rhs3));
      }
  rep.res_ii /= rscale;
  rep.res_iii /= rscale;
  return rep;
}

Tensor3 wedge_covector_two_form(const Vec& eta, const Mat& omega) {
  const int N = static_cast<int>(eta.size());
  Tensor3 out(N);
  for (int i = 0; i < N; ++i)
    for (int j = 0; j < N; ++j)
      for (int k = 0; k < N; ++k)
        out(i, j, k) = eta[i] * omega(j, k) + eta[j] * omega(k, i) + eta[k] * omega(i, j);
  return out;
}

}  // namespace acms
