#pragma once

#include <cstdint>

#include "acms/structure.hpp"
#include "acms/tensor3.hpp"

namespace acms {

/// C(V): order-3 tensors alpha with
///   alpha(X,Y,Z) = -alpha(X,Z,Y)
///   alpha(X,Y,Z) = -alpha(X,phiY,phiZ) + eta(Y) alpha(X,xi,Z) + eta(Z) alpha(X,Y,xi),
/// i.e. each alpha(X,.,.) is a 2-form in the U(n)-complement m inside so(2n+1).
/// The covariant derivative of the fundamental form of any almost contact
/// metric structure lies in this space.

/// dim C(V) = (2n+1)(n^2+n).
int cv_dimension(int n);

/// Same dimension obtained as the null-space rank of the defining linear
/// constraints (singular values below 1e-8 count as zero).
int cv_dimension_numeric(int n);

/// Invariant inner product <a,b> = sum over a g-orthonormal basis of entry
/// products; computed covariantly by raising all slots with g^{-1}.
/// Throws std::invalid_argument when the tensors' dimensions differ from the
/// structure's.
double cv_inner_product(const Tensor3& a, const Tensor3& b, const Structure& s);
double cv_norm(const Tensor3& a, const Structure& s);

/// Orthogonal projection of an arbitrary order-3 tensor onto C(V):
/// skew-symmetrize the last two slots, then project each resulting 2-form
/// onto m (drop its u(n) part). Idempotent and self-adjoint for the invariant
/// inner product.
Tensor3 cv_project_symmetrize(const Tensor3& raw, const Structure& s);

/// Relative distance of alpha from C(V): ||alpha - proj(alpha)|| / (1+||alpha||).
double cv_membership_residual(const Tensor3& alpha, const Structure& s);

/// Full linear constraint system for C(V) in canonical coordinates
/// (rows: both defining identities on all basis triples; columns: N^3 entries).
Mat cv_constraint_matrix(int n);

/// Orthonormal basis of C(V) in canonical coordinates, N^3 x dim; cached per n.
const Mat& cv_basis(int n);

/// Deterministic random element of C(V) over s (random raw tensor, projected).
Tensor3 random_cv_tensor(const Structure& s, std::uint64_t seed);

}  // namespace acms
