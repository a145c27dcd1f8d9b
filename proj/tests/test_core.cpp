#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "acms/cv_space.hpp"
#include "acms/structure.hpp"
#include "acms/tensor3.hpp"

using namespace acms;

namespace {

double rel(double num, double scale) { return num / (1.0 + scale); }

}  // namespace

TEST_CASE("canonical structure satisfies every axiom") {
  for (int n = 1; n <= 3; ++n) {
    CAPTURE(n);
    const Structure s = canonical_structure(n);
    CHECK(validate_structure(s, 1e-12).empty());
    const int N = s.N();
    const Mat expect = -Mat::Identity(N, N) + s.xi() * s.eta().transpose();
    CHECK((s.phi() * s.phi() - expect).norm() == doctest::Approx(0.0).epsilon(1e-12));
    CHECK((s.phi() * s.xi()).norm() == doctest::Approx(0.0));
    CHECK(std::abs(s.eta().dot(s.xi()) - 1.0) < 1e-14);
    // phi e_i = e_{n+i}, phi e_{n+i} = -e_i
    CHECK(s.phi()(n, 0) == doctest::Approx(1.0));
    CHECK(s.phi()(0, n) == doctest::Approx(-1.0));
  }
}

TEST_CASE("random structures validate and are deterministic in the seed") {
  for (int n = 1; n <= 3; ++n) {
    CAPTURE(n);
    const Structure a = random_structure(n, 12345);
    const Structure b = random_structure(n, 12345);
    const Structure c = random_structure(n, 54321);
    CHECK(validate_structure(a, 1e-9).empty());
    CHECK((a.g() - b.g()).norm() == 0.0);
    CHECK((a.phi() - b.phi()).norm() == 0.0);
    CHECK((a.g() - c.g()).norm() > 1e-3);  // different seeds differ
    // eta is the metric dual of xi
    CHECK((a.eta() - a.g() * a.xi()).norm() < 1e-12);
  }
}

TEST_CASE("validation reports broken axioms with named identities") {
  const Structure s = canonical_structure(1);
  Mat phi = s.phi();
  phi(0, 0) = 0.5;  // breaks phi^2 = -I + xi (x) eta and compatibility
  const Structure broken(1, s.g(), phi, s.xi());
  const ValidationReport rep = validate_structure(broken, 1e-9);
  CHECK(!rep.empty());
  bool saw_phi_sq = false;
  for (const auto& issue : rep) {
    CHECK(issue.residual > 1e-9);
    if (issue.identity.find("phi") != std::string::npos) saw_phi_sq = true;
  }
  CHECK(saw_phi_sq);
}

TEST_CASE("horizontal projector annihilates xi and fixes H") {
  const Structure s = random_structure(2, 99);
  const Mat p = s.horizontal_projector();
  CHECK((p * p - p).norm() < 1e-12);
  CHECK((p * s.xi()).norm() < 1e-12);
  // phi lives on H: p phi = phi p = phi
  CHECK((p * s.phi() - s.phi()).norm() < 1e-12);
  CHECK((s.phi() * p - s.phi()).norm() < 1e-12);
}

TEST_CASE("adapted frame pulls back to the canonical model") {
  const Structure s = random_structure(2, 7);
  REQUIRE(s.frame_ok());
  const Mat& F = s.frame();
  CHECK((F.transpose() * s.g() * F - Mat::Identity(s.N(), s.N())).norm() < 1e-10);
  const Structure canon = canonical_structure(2);
  CHECK((s.coframe() * s.phi() * F - canon.phi()).norm() < 1e-10);
  CHECK((s.coframe() * s.xi() - canon.xi()).norm() < 1e-10);
}

TEST_CASE("tensor frame transport round-trips") {
  const Structure s = random_structure(2, 31);
  const Tensor3 a = random_cv_tensor(s, 32);
  Tensor3 back = s.from_frame(s.to_frame(a));
  back -= a;
  CHECK(back.max_abs() < 1e-11);
  const Mat E = s.phi();
  CHECK((s.endo_from_frame(s.endo_to_frame(E)) - E).norm() < 1e-11);
}

TEST_CASE("flat/from_flat round-trips in the fixed entry order") {
  Tensor3 t(3);
  t(0, 1, 2) = 1.5;
  t(2, 0, 1) = -0.25;
  const Vec f = t.flat();
  const Tensor3 u = Tensor3::from_flat(3, f);
  CHECK(u(0, 1, 2) == 1.5);
  CHECK(u(2, 0, 1) == -0.25);
  CHECK(u.dim() == 3);
}

TEST_CASE("fundamental form is the lowered phi and is skew") {
  for (int n = 1; n <= 2; ++n) {
    const Structure s = random_structure(n, 17 + n);
    const Mat Phi = fundamental_form(s);
    CHECK((Phi - s.g() * s.phi()).norm() < 1e-13);
    CHECK((Phi + Phi.transpose()).norm() < 1e-10);
  }
  // canonical orientation: Phi(e_0, e_1) = -1 at n = 1
  const Structure c = canonical_structure(1);
  CHECK(fundamental_form(c)(0, 1) == doctest::Approx(-1.0));
}

TEST_CASE("C(V) dimension formula matches the numeric null-space rank") {
  for (int n = 1; n <= 3; ++n) {
    CAPTURE(n);
    CHECK(cv_dimension(n) == (2 * n + 1) * (n * n + n));
    CHECK(cv_dimension_numeric(n) == cv_dimension(n));
    CHECK(cv_basis(n).cols() == cv_dimension(n));
  }
}

TEST_CASE("random C(V) tensors satisfy the defining symmetries") {
  for (int n = 1; n <= 3; ++n) {
    const Structure s = random_structure(n, 400 + n);
    const Tensor3 a = random_cv_tensor(s, 500 + n);
    CAPTURE(n);
    CHECK(rel(cv_membership_residual(a, s), 0.0) < 1e-10);
    const int N = s.N();
    // explicit last-two-slot skewness after lowering nothing (already (0,3))
    double skew = 0.0;
    for (int i = 0; i < N; ++i)
      for (int j = 0; j < N; ++j)
        for (int k = 0; k < N; ++k)
          skew = std::max(skew, std::abs(a(i, j, k) + a(i, k, j)));
    CHECK(skew < 1e-10);
  }
}

TEST_CASE("cv_project_symmetrize is an orthogonal projector") {
  const Structure s = random_structure(2, 61);
  const int N = s.N();
  // random raw (non-C(V)) tensors
  Tensor3 x(N), y(N);
  std::uint64_t state = 88172645463325252ull;
  auto next = [&state]() {
    state ^= state << 13;
    state ^= state >> 7;
    state ^= state << 17;
    return static_cast<double>(static_cast<std::int64_t>(state % 2000001) - 1000000) / 1e6;
  };
  for (int i = 0; i < N; ++i)
    for (int j = 0; j < N; ++j)
      for (int k = 0; k < N; ++k) {
        x(i, j, k) = next();
        y(i, j, k) = next();
      }
  const Tensor3 px = cv_project_symmetrize(x, s);
  const Tensor3 ppx = cv_project_symmetrize(px, s);
  // idempotent
  Tensor3 d = ppx;
  d -= px;
  CHECK(d.max_abs() < 1e-11);
  // projected tensors are members
  CHECK(cv_membership_residual(px, s) < 1e-11);
  // self-adjoint for the invariant inner product: <Px, y> = <x, Py>
  const Tensor3 py = cv_project_symmetrize(y, s);
  CHECK(std::abs(cv_inner_product(px, y, s) - cv_inner_product(x, py, s)) <
        1e-9 * (1.0 + std::abs(cv_inner_product(x, y, s))));
}

TEST_CASE("inner product is frame-invariant and positive") {
  const Structure s = random_structure(2, 71);
  const Tensor3 a = random_cv_tensor(s, 72);
  const Tensor3 b = random_cv_tensor(s, 73);
  // symmetric
  CHECK(std::abs(cv_inner_product(a, b, s) - cv_inner_product(b, a, s)) < 1e-10);
  // positive on nonzero
  CHECK(cv_norm(a, s) > 1e-6);
  // frame coordinates turn it into the Euclidean product
  const Tensor3 fa = s.to_frame(a);
  const Tensor3 fb = s.to_frame(b);
  double dot = 0.0;
  for (size_t i = 0; i < fa.size(); ++i) dot += fa.data()[i] * fb.data()[i];
  CHECK(std::abs(dot - cv_inner_product(a, b, s)) < 1e-8 * (1.0 + std::abs(dot)));
}

TEST_CASE("membership residual detects symmetry violations") {
  const Structure s = canonical_structure(1);
  Tensor3 a = random_cv_tensor(s, 80);
  a(0, 1, 2) += 0.5;  // breaks the last-two-slot skewness pairing
  CHECK(cv_membership_residual(a, s) > 1e-3);
}

TEST_CASE("default tolerance is positive and environment-overridable") {
  CHECK(default_tolerance() > 0.0);
  CHECK(default_tolerance() <= 1e-6);  // sane ceiling for the default setup
}
