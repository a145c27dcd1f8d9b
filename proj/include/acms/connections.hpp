#pragma once

#include <array>
#include <map>

#include "acms/geometry.hpp"
#include "acms/structure.hpp"
#include "acms/tensor3.hpp"

namespace acms {

/// Lowered torsion potential A(i,j,k) = g(A(e_i)e_j, e_k) of the minimal
/// adapted metric connection nabla^g + A, computed from alpha:
///   2 A(X,Y) = -phi (nabla_X phi) Y + 2 ((nabla_X eta) Y) xi - eta(Y) nabla_X xi.
/// The resulting connection parallelizes g, phi, xi, eta, and A(X) lies in
/// the orthogonal complement m of u(n) inside so(V) for every X.
Tensor3 minimal_connection(const Tensor3& alpha, const Structure& s);

/// Closed form of the same potential for H-parallel tensors, written directly
/// in the intrinsic pair (S, P):
///   2 A(X,Y,Z) = -eta(X) g(PY, phiZ) + eta(X) eta(Y) g(S xi, phi Z)
///              + 2 eta(Z) g(SX, phiY) - 2 eta(Y) g(SX, phiZ).
Tensor3 minimal_connection_h_parallel(const Mat& S, const Mat& P, const Structure& s);

/// Residuals of the defining properties of an adapted connection nabla^g + A.
struct AdaptedReport {
  double metric = 0.0;      // A(i,j,k) + A(i,k,j)
  double phi = 0.0;         // [A(X), phi] = -(nabla_X phi)
  double xi = 0.0;          // A(X) xi = phi S X
  double minimality = 0.0;  // u(n)-part of A(X) on the horizontal space
  double max_residual() const;
};

/// Algebraic route: endomorphism identities evaluated on A and alpha alone.
AdaptedReport verify_adapted(const Tensor3& A, const Tensor3& alpha, const Structure& s);

/// Model route: actual covariant derivatives of g, phi, xi through
/// nabla^g + A on a left-invariant frame; `minimality` is copied from the
/// algebraic route (it is not a derivative identity).
AdaptedReport verify_adapted_model(const Tensor3& A, const LieAlgebraModel& m);

/// T(X,Y) = A(X)Y - A(Y)X: lowered torsion of nabla^g + A.
Tensor3 torsion_from_potential(const Tensor3& A);

/// Inverse for metric potentials (A last-two-skew):
///   2 A(X,Y,Z) = T(X,Y,Z) - T(Y,Z,X) + T(Z,X,Y).
Tensor3 potential_from_torsion(const Tensor3& T);

/// Decomposition of a lowered torsion-potential (last-two-skew) tensor into
/// the three invariant torsion types: vectorial (A1, carried by the trace
/// 1-form theta), totally skew (A3, one third of the cyclic sum), and the
/// traceless cyclic-free remainder (A2).
struct TorsionTypes {
  Tensor3 A1, A2, A3;
  Vec theta;  // c_12(A) / (N-1), lowered
  double n1 = 0.0, n2 = 0.0, n3 = 0.0;  // Frobenius norms of the pieces
};
TorsionTypes torsion_type_decompose(const Tensor3& A, const Structure& s);

/// Torsion types realized by the minimal connection on each pure class
/// C5..C12, as {A1, A2, A3} flags: C5 -> A1; C6, C7, C10, C11 -> A2+A3;
/// C8, C9 -> A2; C12 -> A1+A2.
std::map<int, std::array<bool, 3>> minimal_torsion_types();

/// Existence and construction of the characteristic connection (the unique
/// adapted connection with totally skew torsion, when it exists).
struct CharacteristicReport {
  bool exists = false;
  double killing_residual = 0.0;      // xi Killing: g phi S must be skew, S xi = 0
  double nijenhuis_skew_residual = 0.0;  // N minus its total skew-symmetrization
  double class_residual = 0.0;        // C2, C5, C8, C9, C12 and C_{1,1} components
  double endo_h_parallel_residual = 0.0;  // ||P + h|| (+Killing); meaningful for
                                          // H-parallel input only
  bool routes_agree = false;          // criterion verdict == class verdict
  Tensor3 T;   // eta^deta + N - dPhi(phi.,phi.,phi.) - eta^(xi _| N); always computed
  double torsion_skew_residual = 0.0;  // total-skewness defect of T
  AdaptedReport adapted;               // nabla^g + T/2 adaptedness (valid when exists)
};

/// Criterion route (xi Killing and N totally skew, both from alpha) against
/// the class route (no C2, C5, C8, C9, C12, and the C10+C11 part on the
/// C_min line).
CharacteristicReport characteristic_connection(const Tensor3& alpha, const Structure& s,
                                               double tol = 1e-7);

/// Same report on a Lie model with the criterion route evaluated from
/// brackets (L_xi g, bracket Nijenhuis) and T from bracket-level forms;
/// routes_agree additionally requires the bracket and alpha verdicts and
/// torsions to coincide.
CharacteristicReport characteristic_connection_model(const LieAlgebraModel& m,
                                                     double tol = 1e-7);

/// The torsion candidate alone (always evaluable, meaningful when the
/// connection exists).
Tensor3 characteristic_torsion(const Tensor3& alpha, const Structure& s);
Tensor3 characteristic_torsion_model(const LieAlgebraModel& m);

/// The three equivalent facets of parallel characteristic torsion on a Lie
/// model, each as a residual: (i) nabla T = 0 for nabla = nabla^g + T/2;
/// (ii) R^g(xi,X)Y = -eta(Y) tilde(X) + g(tilde(X),Y) xi; and
/// (iii) R^g(X,Y)xi = eta(Y) tilde(X) - eta(X) tilde(Y), where
/// tilde = (S^2 - hS) and T is the characteristic torsion candidate.
struct ParallelTorsionReport {
  double res_i = 0.0, res_ii = 0.0, res_iii = 0.0;
  Mat x_tilde;
  bool holds(double tol = 1e-7) const {
    return res_i <= tol && res_ii <= tol && res_iii <= tol;
  }
};
ParallelTorsionReport parallel_torsion_check(const LieAlgebraModel& m);

/// (eta ^ omega)(X,Y,Z) = eta(X)omega(Y,Z) + eta(Y)omega(Z,X) + eta(Z)omega(X,Y)
/// for a covector eta and a skew matrix omega, all lowered.
Tensor3 wedge_covector_two_form(const Vec& eta, const Mat& omega);

}  // namespace acms
