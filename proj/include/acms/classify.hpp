#pragma once

#include <map>
#include <memory>
#include <set>
#include <string>
#include <vector>

#include "acms/intrinsic.hpp"
#include "acms/structure.hpp"
#include "acms/tensor3.hpp"

namespace acms {

/// Identifier for a class subspace of C(V): a sum of the irreducible classes
/// C1..C12 (D1 = C1+..+C4, D2 = C5+..+C11, D3 = C12), or a member of the
/// family C_{lambda,mu} = {alpha in C10+C11 : lambda P = mu S} (C_min is
/// C_{1,-2}; C_{1,0} = C10 and C_{0,1} = C11 degenerately).
struct ClassId {
  enum class Kind { Sum, CLambdaMu };
  Kind kind = Kind::Sum;
  unsigned mask = 0;  // bit (i-1) set when Ci belongs to the sum
  double lambda = 0.0, mu = 0.0;

  static ClassId irreducible(int i);
  static ClassId sum(const std::set<int>& parts);
  static ClassId d1() { return sum({1, 2, 3, 4}); }
  static ClassId d2() { return sum({5, 6, 7, 8, 9, 10, 11}); }
  static ClassId d3() { return irreducible(12); }
  static ClassId h_parallel() { return sum({5, 6, 7, 8, 9, 10, 11, 12}); }
  static ClassId c_lambda_mu(double lambda, double mu);
  static ClassId c_min() { return c_lambda_mu(1.0, -2.0); }

  std::set<int> parts() const;
  bool contains(int i) const { return (mask >> (i - 1)) & 1u; }
  std::string name() const;
};

/// Immutable class subspace over a structure. The basis is orthonormal for
/// the invariant inner product and built once per (class, n) in adapted-frame
/// coordinates from the null space of the defining linear constraints
/// (singular values below 1e-8 treated as zero), then shared.
class Subspace {
public:
  Subspace(ClassId id, int n, Mat basis_frame);

  const ClassId& id() const { return id_; }
  int n() const { return n_; }
  int dim() const { return static_cast<int>(basis_frame_.cols()); }
  /// Basis in frame coordinates, N^3 x dim, orthonormal columns.
  const Mat& basis_frame() const { return basis_frame_; }
  Tensor3 basis_element(int k, const Structure& s) const;

  /// Orthogonal projection of alpha onto this subspace (ambient coordinates).
  Tensor3 project(const Tensor3& alpha, const Structure& s) const;
  /// Invariant norm of the projection (no tensor materialized).
  double component_norm(const Tensor3& alpha, const Structure& s) const;

private:
  ClassId id_;
  int n_;
  Mat basis_frame_;
};

/// Shared, cached subspace lookup (thread-safe; cache key is (name, n)).
std::shared_ptr<const Subspace> class_subspace(const ClassId& id, const Structure& s);

/// Closed-form dimension of the irreducible class Ci over R^(2n+1):
///   C1: n(n-1)(n-2)/3   C2: 2n(n^2-1)/3   C3: n(n+1)(n-2)   C4: 2n
///   C5, C6: 1           C7, C8: n^2-1     C9: n^2+n
///   C10, C11: n^2-n     C12: 2n
/// with the n = 1 degeneration C3 = C4 = {0} (so C7 = C8 = C10 = C11 = {0}
/// already follow from their formulas). The ambient dimension of C(V) is
/// (2n+1)(n^2+n).
int class_dimension_formula(int i, int n);

Tensor3 project(const Tensor3& alpha, const ClassId& id, const Structure& s);
double component_norm(const Tensor3& alpha, const ClassId& id, const Structure& s);

/// Exact algebraic decomposition of the H-parallel part of alpha into the
/// irreducible pieces C5..C12, driven purely by the intrinsic endomorphisms
/// (the classification-scheme route, independent of the projector bases):
///   C12 from S xi; C11 from P; commuting/anticommuting and symmetric/skew
///   splits of S; trace and phi-trace scalars for C5/C6.
struct HParallelSplit {
  Mat S, P, h;
  Mat S12, P12;  // vertical piece (C12 data)
  Mat S2, P2;    // remaining D2 data (S2 xi = 0)
  std::map<int, Tensor3> piece;      // class index 5..12 -> component tensor
  std::map<int, double> piece_norm;  // invariant norms of the pieces
  double c5_beta = 0.0;   // S_5 = beta phi
  double c6_coeff = 0.0;  // S_6 = a (I - xi (x) eta)
  Tensor3 hp_part;        // reconstruct(S, P)
  Tensor3 d1_part;        // alpha - hp_part (S = P = 0)
  double hp_residual = 0.0;  // ||d1_part|| / (1+||alpha||)
};
HParallelSplit split_cv_tensor(const Tensor3& alpha, const Structure& s);

struct BranchEval {
  std::string name;
  double residual = 0.0;  // relative
  bool passed = false;
  bool marginal = false;  // within a factor of 10 of the threshold
};

/// Decision-tree classification of an H-parallel tensor. The label set is
/// derived from the endomorphism splits above; every branch predicate of the
/// tree is evaluated and reported, with marginal branches flagged.
struct FlowchartResult {
  std::set<int> classes;              // irreducible classes present
  std::string label;                  // "C0" when empty
  std::map<int, double> piece_norms;  // route-1 norms (C5..C12)
  std::vector<BranchEval> branches;
  std::vector<std::string> marginal_branches;
  double hp_residual = 0.0;
  double c5_beta = 0.0, c6_coeff = 0.0;
};
FlowchartResult flowchart_classify(const Tensor3& alpha, const Structure& s,
                                   double tol = 1e-7);

/// Full two-route classification of any alpha in C(V).
struct ClassificationReport {
  std::map<std::string, double> component_norms;  // projections, C1..C12
  std::string hparallel_label;                    // from the flowchart route
  std::string d1_label;                           // from the projection route
  std::string full_label;
  std::vector<std::string> marginal_branches;
  bool agreement = false;        // flowchart route == projection route, Parseval holds
  double parseval_residual = 0;  // | ||a||^2 - sum ||c_i||^2 | / ||a||^2
  double cv_residual = 0;        // distance from C(V)
  FlowchartResult flowchart;
  IntrinsicData intrinsic;
};
ClassificationReport classify_full(const Tensor3& alpha, const Structure& s,
                                   double tol = 1e-7);

/// Embedding f_{lambda,mu} of C10 into D2+D3:
///   a_{lm}(X,Y,Z) = lambda(eta(Z) a(X,Y,xi) + eta(Y) a(X,xi,Z))
///                 + mu eta(X) a(Y,xi,Z).
/// Scales the inner product by (mu^2 + 2 lambda^2)/2; its image is
/// C_{lambda,mu}. Validates alpha in C10.
Tensor3 c_lambda_mu_embed(const Tensor3& alpha10, double lambda, double mu,
                          const Structure& s, double tol = 1e-7);

std::shared_ptr<const Subspace> c_lambda_mu_subspace(double lambda, double mu,
                                                     const Structure& s);

}  // namespace acms
