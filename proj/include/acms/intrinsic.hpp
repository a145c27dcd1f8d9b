#pragma once

#include "acms/cv_space.hpp"
#include "acms/structure.hpp"
#include "acms/tensor3.hpp"

namespace acms {

/// Intrinsic endomorphisms of alpha in C(V):
///   g(SX,Z) = alpha(X,xi,Z)   (S = phi o nabla xi for a genuine structure)
///   g(PY,Z) = alpha(xi,Y,Z)   (P = nabla_xi restricted data)
///   h = (S + phi S phi - P)/2 (equivalently P = -2h + phi S phi + S).
struct IntrinsicData {
  Mat S, h, P;
};

/// Reads S off alpha; throws std::invalid_argument when alpha violates the
/// C(V) symmetries beyond tol.
Mat extract_S(const Tensor3& alpha, const Structure& s, double tol = 1e-7);
Mat extract_P(const Tensor3& alpha, const Structure& s, double tol = 1e-7);
Mat extract_h(const Mat& S, const Mat& P, const Structure& s);
IntrinsicData extract_intrinsic(const Tensor3& alpha, const Structure& s, double tol = 1e-7);

/// H-parallel reconstruction:
///   alpha(X,Y,Z) = -eta(X) g(P phiY, phiZ) + eta(Y) g(SX,Z) - eta(Z) g(SX,Y).
/// Preconditions (validated): eta o S = 0, P g-skew, P xi = S xi, and the
/// horizontal block of P phi-anti-invariant; these are exactly the pairs
/// realized by H-parallel tensors, and the extract_* maps invert this.
Tensor3 reconstruct_H_parallel(const Mat& S, const Mat& P, const Structure& s,
                               double tol = 1e-7);

/// Symmetry profile of an endomorphism with respect to (g, phi, xi).
/// Booleans hold when the matching residual is below tol (relative).
struct EndoProfile {
  double r_symmetric, r_skew, r_commutes_phi, r_anticommutes_phi, r_vanishes_on_H, r_kills_xi;
  bool symmetric, skew, commutes_phi, anticommutes_phi, vanishes_on_H, kills_xi;
  double trace;      // tr E
  double trace_phi;  // tr(phi E)
};
EndoProfile endo_profile(const Mat& E, const Structure& s, double tol = 1e-7);

/// d eta(X,Y) = g(X, phi S Y) - g(phi S X, Y), as a skew matrix.
Mat d_eta_from_S(const Mat& S, const Structure& s);

/// d Phi = cyclic sum of alpha over (X,Y,Z) (no normalization).
Tensor3 d_Phi_from_alpha(const Tensor3& alpha, const Structure& s);

/// Normality (Nijenhuis) tensor with all slots lowered, computed from alpha.
/// Convention: N(X,Y) = [phiX,phiY] + phi^2[X,Y] - phi[X,phiY] - phi[phiX,Y]
/// + d eta(X,Y) xi; the trailing d eta (x) xi term makes N vanish exactly on
/// normal structures (quasi-Sasakian Heisenberg included). Expanded through
/// the Levi-Civita connection this becomes an algebraic expression in alpha
/// and nabla xi = -phi S, which is what is evaluated here.
Tensor3 nijenhuis_from_alpha(const Tensor3& alpha, const Structure& s);

/// (delta eta, delta Phi): delta eta = tr(phi S); delta Phi as a covector,
/// (delta Phi)(Z) = -sum_i alpha(e_i, e_i, Z) over any g-orthonormal frame.
struct Codifferentials {
  double delta_eta;
  Vec delta_Phi;
};
Codifferentials codifferentials(const Tensor3& alpha, const Structure& s);

}  // namespace acms
