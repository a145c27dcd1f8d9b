#include "acms/intrinsic.hpp"

#include <stdexcept>
#include <string>

namespace acms {

namespace {

/// Contract slot `slot` of alpha with the vector v.
Mat contract_slot(const Tensor3& alpha, int slot, const Vec& v) {
  const int N = alpha.dim();
  Mat m = Mat::Zero(N, N);
  for (int a = 0; a < N; ++a)
    for (int b = 0; b < N; ++b) {
      double s = 0.0;
      for (int c = 0; c < N; ++c)
        s += v[c] * (slot == 0 ? alpha(c, a, b) : slot == 1 ? alpha(a, c, b) : alpha(a, b, c));
      m(a, b) = s;
    }
  return m;
}

void require_cv(const Tensor3& alpha, const Structure& s, double tol, const char* who) {
  const double r = cv_membership_residual(alpha, s);
  if (!(r <= tol))
    throw std::invalid_argument(std::string(who) +
                                ": tensor violates the C(V) symmetries (residual " +
                                std::to_string(r) + ")");
}

}  // namespace

Mat extract_S(const Tensor3& alpha, const Structure& s, double tol) {
  require_cv(alpha, s, tol, "extract_S");
  // g(S e_i, e_k) = alpha(e_i, xi, e_k) = M(i,k); bilinear form M = S^T g.
  const Mat M = contract_slot(alpha, 1, s.xi());
  return s.g_inv() * M.transpose();
}

Mat extract_P(const Tensor3& alpha, const Structure& s, double tol) {
  require_cv(alpha, s, tol, "extract_P");
  const Mat M = contract_slot(alpha, 0, s.xi());
  return s.g_inv() * M.transpose();
}

Mat extract_h(const Mat& S, const Mat& P, const Structure& s) {
  return 0.5 * (S + s.phi() * S * s.phi() - P);
}

IntrinsicData extract_intrinsic(const Tensor3& alpha, const Structure& s, double tol) {
  IntrinsicData d;
  d.S = extract_S(alpha, s, tol);
  d.P = extract_P(alpha, s, tol);
  d.h = extract_h(d.S, d.P, s);
  return d;
}

Tensor3 reconstruct_H_parallel(const Mat& S, const Mat& P, const Structure& s, double tol) {
  const int N = s.N();
  const Mat& g = s.g();
  const Mat& phi = s.phi();
  const Vec& eta = s.eta();
  const double scale = 1.0 + S.norm() + P.norm();

  const double r_etaS = (eta.transpose() * S).norm() / scale;
  const double r_skew = ((g * P).transpose() + g * P).norm() / scale;
  const double r_pxi = (P * s.xi() - S * s.xi()).norm() / scale;
  // Horizontal block of P must be phi-anti-invariant for the result to land
  // in C(V): g(P phiY, phiZ) = -g(PY,Z) on H.
  const Mat p = s.horizontal_projector();
  const Mat gP = g * P;
  const Mat r_anti_m = phi.transpose() * gP * phi + p.transpose() * gP * p;
  const double r_anti = r_anti_m.norm() / scale;

  auto fail = [&](const char* what, double r) {
    throw std::invalid_argument(std::string("reconstruct_H_parallel: ") + what +
                                " (residual " + std::to_string(r) + ")");
  };
  if (!(r_etaS <= tol)) fail("eta o S != 0", r_etaS);
  if (!(r_skew <= tol)) fail("P is not g-skew", r_skew);
  if (!(r_pxi <= tol)) fail("P xi != S xi", r_pxi);
  if (!(r_anti <= tol)) fail("P|_H is not phi-anti-invariant", r_anti);

  const Mat B = (g * S).transpose();                        // B(i,k) = g(S e_i, e_k)
  const Mat C = (phi.transpose() * gP * phi).transpose();   // C(j,k) = g(P phi e_j, phi e_k)
  Tensor3 alpha(N);
  for (int i = 0; i < N; ++i)
    for (int j = 0; j < N; ++j)
      for (int k = 0; k < N; ++k)
        alpha(i, j, k) = -eta[i] * C(j, k) + eta[j] * B(i, k) - eta[k] * B(i, j);
  return alpha;
}

EndoProfile endo_profile(const Mat& E, const Structure& s, double tol) {
  EndoProfile pr{};
  const Mat gE = s.g() * E;
  const Mat& phi = s.phi();
  const double scale = 1.0 + gE.norm();
  pr.r_symmetric = (gE - gE.transpose()).norm() / scale;
  pr.r_skew = (gE + gE.transpose()).norm() / scale;
  const double cscale = 1.0 + E.norm() * (1.0 + phi.norm());
  pr.r_commutes_phi = (E * phi - phi * E).norm() / cscale;
  pr.r_anticommutes_phi = (E * phi + phi * E).norm() / cscale;
  pr.r_vanishes_on_H = (E * s.horizontal_projector()).norm() / (1.0 + E.norm());
  pr.r_kills_xi = (E * s.xi()).norm() / (1.0 + E.norm());
  pr.symmetric = pr.r_symmetric <= tol;
  pr.skew = pr.r_skew <= tol;
  pr.commutes_phi = pr.r_commutes_phi <= tol;
  pr.anticommutes_phi = pr.r_anticommutes_phi <= tol;
  pr.vanishes_on_H = pr.r_vanishes_on_H <= tol;
  pr.kills_xi = pr.r_kills_xi <= tol;
  pr.trace = E.trace();
  pr.trace_phi = (phi * E).trace();
  return pr;
}

Mat d_eta_from_S(const Mat& S, const Structure& s) {
  const Mat m = s.g() * s.phi() * S;
  return m - m.transpose();
}

Tensor3 d_Phi_from_alpha(const Tensor3& alpha, const Structure& s) {
  (void)s;
  return alpha.cyclic_sum();
}

Tensor3 nijenhuis_from_alpha(const Tensor3& alpha, const Structure& s) {
  const int N = s.N();
  const Mat& phi = s.phi();
  const Vec& eta = s.eta();
  const Mat S = extract_S(alpha, s);
  const Mat nabla_xi = -phi * S;           // nabla_X xi = -phi S X
  const Mat low_nxi = s.g() * nabla_xi;    // g(nabla_X xi, Z) = low_nxi(Z,X)

  // A1(i,j,k) = alpha(i, phi e_j, e_k); A2(i,j,k) = alpha(phi e_i, e_j, e_k).
  Tensor3 A1(N), A2(N);
  for (int i = 0; i < N; ++i)
    for (int j = 0; j < N; ++j)
      for (int k = 0; k < N; ++k) {
        double s1 = 0.0, s2 = 0.0;
        for (int b = 0; b < N; ++b) {
          s1 += phi(b, j) * alpha(i, b, k);
          s2 += phi(b, i) * alpha(b, j, k);
        }
        A1(i, j, k) = s1;
        A2(i, j, k) = s2;
      }

  // g((nabla_X phi)phiY, Z) = -alpha(X, phiY, Z) etc., from
  // (nabla_X Phi)(Y,Z) = -g((nabla_X phi)Y, Z).
  Tensor3 Nf(N);
  for (int i = 0; i < N; ++i)
    for (int j = 0; j < N; ++j)
      for (int k = 0; k < N; ++k)
        Nf(i, j, k) = -A1(i, j, k) + A1(j, i, k) - A2(i, j, k) + A2(j, i, k) +
                      eta[i] * low_nxi(k, j) - eta[j] * low_nxi(k, i);
  return Nf;
}

Codifferentials codifferentials(const Tensor3& alpha, const Structure& s) {
  Codifferentials c;
  const Mat S = extract_S(alpha, s);
  c.delta_eta = (s.phi() * S).trace();
  // (delta Phi)(Z) = -Ginv^{ab} alpha(a,b,Z).
  const int N = s.N();
  const Mat& gi = s.g_inv();
  c.delta_Phi = Vec::Zero(N);
  for (int k = 0; k < N; ++k) {
    double acc = 0.0;
    for (int a = 0; a < N; ++a)
      for (int b = 0; b < N; ++b) acc += gi(a, b) * alpha(a, b, k);
    c.delta_Phi[k] = -acc;
  }
  return c;
}

}  // namespace acms
