#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <array>
#include <cmath>

#include "acms/classify.hpp"
#include "acms/connections.hpp"
#include "acms/cv_space.hpp"
#include "acms/geometry.hpp"
#include "acms/intrinsic.hpp"

using namespace acms;

TEST_CASE("minimal connection parallelizes the structure") {
  for (int n = 1; n <= 2; ++n) {
    CAPTURE(n);
    const Structure s = canonical_structure(n);
    for (int k = 0; k < 25; ++k) {
      CAPTURE(k);
      const Tensor3 a = random_cv_tensor(s, 1000 * n + k);
      const Tensor3 A = minimal_connection(a, s);
      CHECK(verify_adapted(A, a, s).max_residual() < 1e-12);
    }
  }
  for (int k = 0; k < 10; ++k) {
    CAPTURE(k);
    const Structure s = random_structure(2, 777 + k);
    const Tensor3 a = random_cv_tensor(s, 888 + k);
    const Tensor3 A = minimal_connection(a, s);
    CHECK(verify_adapted(A, a, s).max_residual() < 1e-10);
  }
}

TEST_CASE("adapted potential is unique: every u(n)-complement perturbation breaks it") {
  const Structure s = canonical_structure(2);
  const Tensor3 a = random_cv_tensor(s, 4242);
  const Tensor3 A = minimal_connection(a, s);
  for (int k = 0; k < 20; ++k) {
    CAPTURE(k);
    // a C(V) tensor is exactly a one-form with values in the complement
    Tensor3 pert = random_cv_tensor(s, 5000 + k);
    pert *= 1e-2 / cv_norm(pert, s);
    Tensor3 Ap = A;
    Ap += pert;
    CHECK(verify_adapted(Ap, a, s).max_residual() > 1e-4);
  }
}

TEST_CASE("closed H-parallel form of the potential matches the general formula") {
  const Structure s = canonical_structure(2);
  for (int k = 0; k < 15; ++k) {
    CAPTURE(k);
    const Tensor3 a = project(random_cv_tensor(s, 6100 + k), ClassId::h_parallel(), s);
    const HParallelSplit sp = split_cv_tensor(a, s);
    Tensor3 diff = minimal_connection(a, s);
    diff -= minimal_connection_h_parallel(sp.S, sp.P, s);
    CHECK(diff.max_abs() < 1e-12);
  }
}

TEST_CASE("Heisenberg n=1: potential in closed form, adapted for the model") {
  Vec lam(1);
  lam << 1.0;
  const LieAlgebraModel m = heisenberg_model(1, lam);
  const Tensor3 A = minimal_connection(nabla_Phi(m), m.s);
  const Mat Phi = fundamental_form(m.s);
  const Vec& eta = m.s.eta();
  // A(X,Y,Z) = eta(Z) Phi(X,Y) - eta(Y) Phi(X,Z)
  double r = 0.0;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      for (int k = 0; k < 3; ++k)
        r = std::max(r, std::abs(A(i, j, k) - (eta[k] * Phi(i, j) - eta[j] * Phi(i, k))));
  CHECK(r < 1e-12);
  CHECK(verify_adapted_model(A, m).max_residual() < 1e-12);
}

TEST_CASE("potential and torsion determine each other") {
  const Structure s = canonical_structure(2);
  const Tensor3 A = minimal_connection(random_cv_tensor(s, 999), s);
  Tensor3 back = potential_from_torsion(torsion_from_potential(A));
  back -= A;
  CHECK(back.max_abs() < 1e-13);
}

TEST_CASE("torsion types of the minimal connection follow the class table") {
  for (int n = 2; n <= 3; ++n) {
    CAPTURE(n);
    const Structure s = canonical_structure(n);
    for (const auto& [cls, allowed] : minimal_torsion_types()) {
      CAPTURE(cls);
      std::array<bool, 3> seen = {false, false, false};
      const auto sub = class_subspace(ClassId::irreducible(cls), s);
      for (int q = 0; q < sub->dim(); ++q) {
        CAPTURE(q);
        const Tensor3 A = minimal_connection(sub->basis_element(q, s), s);
        const TorsionTypes tt = torsion_type_decompose(A, s);
        const double total = std::sqrt(tt.n1 * tt.n1 + tt.n2 * tt.n2 + tt.n3 * tt.n3);
        const std::array<double, 3> ns = {tt.n1, tt.n2, tt.n3};
        for (int t = 0; t < 3; ++t) {
          if (!allowed[t]) CHECK(ns[t] < 1e-8 * total);
          if (ns[t] > 1e-6 * total) seen[t] = true;
        }
      }
      for (int t = 0; t < 3; ++t) {
        CAPTURE(t);
        if (allowed[t]) CHECK(seen[t]);
      }
    }
  }
}

TEST_CASE("characteristic connection on the Heisenberg group") {
  Vec lam(1);
  lam << 1.0;
  const LieAlgebraModel m = heisenberg_model(1, lam);
  const CharacteristicReport rep = characteristic_connection_model(m);
  CHECK(rep.exists);
  CHECK(rep.routes_agree);
  Tensor3 expect = wedge_covector_two_form(m.s.eta(), d_eta_direct(m));
  expect -= rep.T;
  CHECK(expect.max_abs() < 1e-12);
  CHECK(rep.torsion_skew_residual < 1e-12);
  CHECK(rep.adapted.max_residual() < 1e-12);
}

TEST_CASE("characteristic torsion on the minimal line equals the minimal torsion") {
  const Structure s = canonical_structure(2);
  const Tensor3 a = c_lambda_mu_subspace(1.0, -2.0, s)->basis_element(0, s);
  const CharacteristicReport rep = characteristic_connection(a, s);
  CHECK(rep.exists);
  CHECK(rep.routes_agree);
  Tensor3 diff = torsion_from_potential(minimal_connection(a, s));
  diff -= rep.T;
  CHECK(diff.max_abs() < 1e-10);
  Tensor3 d2 = wedge_covector_two_form(s.eta(), d_eta_from_S(extract_S(a, s), s));
  d2 -= rep.T;
  CHECK(d2.max_abs() < 1e-10);
  CHECK(rep.adapted.max_residual() < 1e-10);
  CHECK(rep.torsion_skew_residual < 1e-10);
}

TEST_CASE("characteristic connection exists exactly on the admissible classes") {
  const Structure s = canonical_structure(2);
  for (int cls : {6, 7}) {
    CAPTURE(cls);
    const Tensor3 a = class_subspace(ClassId::irreducible(cls), s)->basis_element(0, s);
    const CharacteristicReport rep = characteristic_connection(a, s);
    CHECK(rep.exists);
    CHECK(rep.routes_agree);
    CHECK(rep.adapted.max_residual() < 1e-9);
    CHECK(rep.torsion_skew_residual < 1e-9);
  }
  const Structure s3 = canonical_structure(3);
  for (int cls : {1, 3, 4}) {
    CAPTURE(cls);
    const Tensor3 a = class_subspace(ClassId::irreducible(cls), s3)->basis_element(0, s3);
    const CharacteristicReport rep = characteristic_connection(a, s3);
    CHECK(rep.exists);
    CHECK(rep.routes_agree);
    CHECK(rep.adapted.max_residual() < 1e-8);
    CHECK(rep.torsion_skew_residual < 1e-8);
  }
  for (int cls : {2, 5, 8, 9, 12}) {
    CAPTURE(cls);
    const Tensor3 a = class_subspace(ClassId::irreducible(cls), s)->basis_element(0, s);
    const CharacteristicReport rep = characteristic_connection(a, s);
    CHECK(!rep.exists);
    CHECK(rep.routes_agree);
  }
  // nearly cosymplectic: xi Killing but the normality tensor is not skew
  const Mat h0 = anticommuting_h0(s, 31, false);
  const Tensor3 nc = reconstruct_H_parallel((2.0 / 3.0) * h0, -(2.0 / 3.0) * h0, s);
  const CharacteristicReport rep = characteristic_connection(nc, s);
  CHECK(!rep.exists);
  CHECK(rep.routes_agree);
  CHECK(rep.killing_residual < 1e-9);
  CHECK(rep.nijenhuis_skew_residual > 1e-3);
}

TEST_CASE("parallel characteristic torsion on Heisenberg groups, any lambda") {
  for (int n = 1; n <= 2; ++n)
    for (int t = 0; t < 3; ++t) {
      CAPTURE(n);
      CAPTURE(t);
      Vec lam(n);
      for (int i = 0; i < n; ++i) lam[i] = 0.5 + 0.7 * i + 0.3 * t;
      const LieAlgebraModel m = heisenberg_model(n, lam);
      const ParallelTorsionReport rep = parallel_torsion_check(m);
      CHECK(rep.res_i < 1e-10);
      CHECK(rep.res_ii < 1e-10);
      CHECK(rep.res_iii < 1e-10);
      // the curvature endomorphism reduces to S^2 here
      CHECK((rep.x_tilde - S_direct(m) * S_direct(m)).norm() < 1e-10);
    }
}

TEST_CASE("generic central extensions fail all three curvature equivalences together") {
  for (int k = 0; k < 5; ++k) {
    CAPTURE(k);
    const LieAlgebraModel m =
        random_lie_model(2, 7000 + k, RandomModelKind::CentralExtension);
    const ParallelTorsionReport rep = parallel_torsion_check(m);
    CHECK(rep.res_i > 1e-4);
    CHECK(rep.res_ii > 1e-4);
    CHECK(rep.res_iii > 1e-4);
  }
}
