#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "acms/intrinsic.hpp"
#include "acms/structure.hpp"
#include "acms/tensor3.hpp"

namespace acms {

/// Left-invariant almost contact metric structure on a Lie group, read at the
/// identity: the structure tensors and the brackets [e_i, e_j] = c(i,j,k) e_k
/// live on one fixed basis.
struct LieAlgebraModel {
  std::string name;
  Structure s;
  Tensor3 c;  // structure constants, c(i,j,k)

  LieAlgebraModel(std::string name_, Structure s_, Tensor3 c_)
      : name(std::move(name_)), s(std::move(s_)), c(std::move(c_)) {}

  /// [X, Y] for coordinate vectors.
  Vec bracket(const Vec& X, const Vec& Y) const;
};

double bracket_antisymmetry_residual(const Tensor3& c);
double jacobi_residual(const Tensor3& c);
/// Throws std::invalid_argument when the brackets or the structure are bad.
void validate_model(const LieAlgebraModel& m, double tol = 1e-9);

/// Levi-Civita coefficients Gamma(i,j,k): nabla_{e_i} e_j = Gamma(i,j,k) e_k,
/// from the Koszul formula for left-invariant fields,
///   2 g(nabla_X Y, Z) = g([X,Y],Z) - g([Y,Z],X) + g([Z,X],Y).
Tensor3 levi_civita(const LieAlgebraModel& m);

/// nabla xi as a matrix, column j = nabla_{e_j} xi.
Mat nabla_xi_direct(const LieAlgebraModel& m);

/// alpha(X,Y,Z) = (nabla_X Phi)(Y,Z) = g(Y, (nabla_X phi)Z), the covariant
/// derivative of the fundamental 2-form. Output lies in C(V).
Tensor3 nabla_Phi(const LieAlgebraModel& m);

/// Direct route to the intrinsic endomorphism: S = phi o nabla xi.
Mat S_direct(const LieAlgebraModel& m);

/// (L_xi phi) Y = [xi, phi Y] - phi [xi, Y], as a matrix.
Mat lie_derivative_phi(const LieAlgebraModel& m);

/// h = (1/2) L_xi phi, the direct route to the intrinsic h.
Mat h_direct(const LieAlgebraModel& m);

/// (L_xi g)(X,Y) = -g([xi,X],Y) - g(X,[xi,Y]) for left-invariant fields.
Mat lie_derivative_g(const LieAlgebraModel& m);

/// d eta(X,Y) = -eta([X,Y]), the bracket route.
Mat d_eta_direct(const LieAlgebraModel& m);

/// d Phi(X,Y,Z) by the bracket formula for left-invariant 2-forms:
///   -Phi([X,Y],Z) + Phi([X,Z],Y) - Phi([Y,Z],X).
Tensor3 d_Phi_direct(const LieAlgebraModel& m);

/// Normality tensor with all slots lowered, bracket route:
/// N(X,Y) = [phiX,phiY] + phi^2[X,Y] - phi[X,phiY] - phi[phiX,Y]
///        + d eta(X,Y) xi.
Tensor3 nijenhuis_direct(const LieAlgebraModel& m);

/// Lowered curvature R(i,j,k,l) = g(R(e_i,e_j)e_k, e_l) with
/// R(X,Y)Z = nabla_X nabla_Y Z - nabla_Y nabla_X Z - nabla_{[X,Y]} Z.
Tensor4 curvature(const LieAlgebraModel& m);

double curvature_symmetry_residual(const Tensor4& R, const Structure& s);
double first_bianchi_residual(const Tensor4& R);

/// One named geometric predicate evaluated by two (or three) independent
/// routes; `value` is the verdict of the endomorphism-criterion route.
struct PredicateEntry {
  std::string name;
  double residual_criterion = 0.0;   // endomorphism/class route
  double residual_definition = 0.0;  // definition route (brackets / alpha)
  bool value = false;
  bool routes_agree = false;
};
struct PredicateReport {
  std::vector<PredicateEntry> entries;
  bool all_agree = false;
};

/// Predicates from a bare C(V) tensor (criterion route and alpha-level
/// definition route): CR-integrable, normal, anti-normal, xi Killing,
/// d eta = 0, H-parallel.
PredicateReport predicates_alpha(const Tensor3& alpha, const Structure& s,
                                 double tol = 1e-7);

/// Same predicates on a Lie model, with the definition route computed from
/// brackets (Lie derivatives, Nijenhuis, d eta) instead of from alpha.
PredicateReport predicates_model(const LieAlgebraModel& m, double tol = 1e-7);

/// Heisenberg-type algebra: [tau_i, tau_{n+i}] = 2 lambda_i xi, canonical
/// structure. Quasi-Sasakian; class C6 + C7 with trace data 2 sum(lambda).
LieAlgebraModel heisenberg_model(int n, const Vec& lambda);

/// Abelian algebra with the canonical structure (cokaehler; alpha = 0).
LieAlgebraModel abelian_model(int n);

enum class RandomModelKind {
  CentralExtension,  // [e_i,e_j] = gamma_ij xi (gamma skew, xi central)
  AlmostAbelian,     // [xi, e_i] = D e_i on an abelian codimension-1 ideal
  Mixed,             // alternate by seed
};

/// Random Lie model with automatically satisfied Jacobi identity, paired
/// with a generic (non-canonical) valid structure on the same basis.
LieAlgebraModel random_lie_model(int n, std::uint64_t seed,
                                 RandomModelKind kind = RandomModelKind::Mixed);

/// Point model of the 3-(alpha0,delta0)-Sasaki geometry in dimension 7:
/// quaternionic phi_i on R^4 + the Reeb triple (xi_1, xi_2, xi_3), with the
/// prescribed intrinsic data S_i = -alpha0 phi_i^2
/// - (alpha0-delta0)(eta_j x xi_j + eta_k x xi_k), P_i = h_i = 0, and the
/// horizontal (D1) component 2(alpha0-delta0)[eta_k(X) g(phi_j Y, Z)
/// - eta_j(X) g(phi_k Y, Z)] on xi_i-horizontal slots. Each full tensor
/// classifies in C3 + C6 + C7; pure C6 iff alpha0 = delta0, and the
/// H-parallel part is pure C7 iff tr S_i = 0, i.e. delta0 = -2 alpha0 here.
struct ThreeAlphaDeltaModel {
  double alpha0 = 0.0, delta0 = 0.0;
  std::vector<Structure> structures;  // exactly three, indexed by i
  std::array<Mat, 3> S;
  std::array<Tensor3, 3> alpha;     // full tensors (D1 part included)
  std::array<Tensor3, 3> alpha_hp;  // reconstruct(S_i, 0) only
  std::array<Mat, 3> d_eta;         // 2 a Phi_i + 2(a-d) eta_j wedge eta_k
};
ThreeAlphaDeltaModel three_alpha_delta_point_model(double alpha0, double delta0);

/// Random endomorphism anticommuting with phi, killing xi and eta, g-symmetric
/// or g-skew; the h_0 ingredient of the nearly-Sasakian / nearly-cosymplectic
/// / contact-metric synthetic families.
Mat anticommuting_h0(const Structure& s, std::uint64_t seed, bool symmetric);

/// Named synthetic H-parallel tensors built from an anticommuting block h0
/// (drawn with `seed`) via the (S, P) reconstruction:
///   "contact-metric"       S = p + h0 (h0 symmetric),  P = 0   -> C6 + C9
///   "nearly-sasakian"      S = p + 2/3 h0 (h0 skew),   P = -2/3 h0
///                                                              -> C6 + C10 + C11
///   "nearly-cosymplectic"  S = 2/3 h0 (h0 skew),       P = -2/3 h0
///                                                              -> C10 + C11
///   "almost-cokahler"      S = h0 (h0 symmetric),      P = 0   -> C9
///   "almost-kenmotsu"      S = phi + h0 (h0 symmetric), P = 0  -> C5 + C9
/// where p = I - xi (x) eta. The skew families need n >= 2 (h0 = 0 at n = 1).
/// Throws std::invalid_argument for an unknown name.
Tensor3 synthetic_example(const std::string& name, const Structure& s, std::uint64_t seed);

}  // namespace acms
