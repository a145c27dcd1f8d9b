#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "acms/tensor3.hpp"

namespace acms {

/// Pointwise almost contact metric structure (phi, xi, eta, g) on R^(2n+1).
///
/// Axioms: phi^2 = -I + xi (x) eta, eta(xi) = 1, phi xi = 0, eta o phi = 0,
/// g(phi X, phi Y) = g(X,Y) - eta(X) eta(Y), eta = g(., xi).
///
/// Every structure carries an adapted unitary frame: columns
/// f_1..f_n, phi f_1..phi f_n, xi of `frame` are g-orthonormal and pull the
/// structure back to the canonical model. Subspace machinery runs in frame
/// coordinates, where the tensor inner product is Euclidean.
class Structure {
public:
  Structure(int n, Mat g, Mat phi, Vec xi);
  Structure(int n, Mat g, Mat phi, Vec xi, Vec eta);

  int n() const { return n_; }
  int N() const { return 2 * n_ + 1; }

  const Mat& g() const { return g_; }
  const Mat& g_inv() const { return g_inv_; }
  const Mat& phi() const { return phi_; }
  const Vec& xi() const { return xi_; }
  const Vec& eta() const { return eta_; }

  /// Projector onto the horizontal distribution H = ker(eta) along xi.
  Mat horizontal_projector() const;

  /// g-symmetry / g-skewness residuals of an endomorphism: E is g-symmetric
  /// iff (gE)^T = gE, g-skew iff (gE)^T = -gE.
  Mat lower(const Mat& endo) const { return g_ * endo; }

  bool frame_ok() const { return frame_ok_; }
  /// Adapted unitary frame (columns) and its inverse. Throws if the frame
  /// could not be built (structure too far from the axioms).
  const Mat& frame() const;
  const Mat& coframe() const;

  /// Tensor with all slots evaluated on the frame columns (frame coordinates).
  Tensor3 to_frame(const Tensor3& ambient) const;
  /// Inverse of to_frame.
  Tensor3 from_frame(const Tensor3& framed) const;
  /// Endomorphism conjugated into / out of frame coordinates.
  Mat endo_to_frame(const Mat& endo) const;
  Mat endo_from_frame(const Mat& endo) const;

private:
  void init();

  int n_ = 0;
  Mat g_, g_inv_, phi_;
  Vec xi_, eta_;
  Mat frame_, coframe_;
  bool frame_ok_ = false;
};

/// One violated identity with its (relative) residual.
struct ValidationIssue {
  std::string identity;
  double residual = 0.0;
};
using ValidationReport = std::vector<ValidationIssue>;

/// Checks every structure axiom and returns the violations above tol.
/// An empty report means the structure is valid.
ValidationReport validate_structure(const Structure& s, double tol);

/// Canonical model on R^(2n+1): g = I, phi e_i = e_{n+i}, phi e_{n+i} = -e_i,
/// xi = e_{2n+1}.
Structure canonical_structure(int n);
Mat canonical_phi(int n);

/// Deterministic random structure: canonical model pushed through a random
/// invertible map fixing nothing in particular, plus a random phi-invariant
/// positive metric. Always satisfies the axioms to machine precision.
Structure random_structure(int n, std::uint64_t seed);

/// Fundamental 2-form Phi(X,Y) = g(X, phi Y), as the matrix g*phi.
/// Nondegenerate on H for any valid structure.
Mat fundamental_form(const Structure& s);

/// True when both structures describe the same tensors within tol.
bool structures_match(const Structure& a, const Structure& b, double tol);

/// Global default relative tolerance; ACMS_TOLERANCE overrides at load time.
double default_tolerance();

}  // namespace acms
