#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <set>

#include "acms/classify.hpp"
#include "acms/cv_space.hpp"
#include "acms/structure.hpp"

using namespace acms;

TEST_CASE("class identifiers render stable names") {
  CHECK(ClassId::irreducible(5).name() == "C5");
  CHECK(ClassId::sum({5, 9}).name() == "C5+C9");
  CHECK(ClassId::sum({3, 6, 7}).name() == "C3+C6+C7");
  CHECK(ClassId::d1().name() == "D1");
  CHECK(ClassId::d2().name() == "D2");
  CHECK(ClassId::d3().name() == "C12");
  CHECK(ClassId::h_parallel().name() == "D2+D3");
  CHECK(ClassId::c_min().name() == "C_min");
  // (lambda, mu) is normalized to the unit ray representative
  CHECK(ClassId::c_lambda_mu(1.0, 0.0).name() == "C{1,0}");
  CHECK(ClassId::c_lambda_mu(0.5, 1.0).name() == ClassId::c_lambda_mu(1.0, 2.0).name());
  CHECK_THROWS_AS(ClassId::irreducible(13), std::invalid_argument);
}

TEST_CASE("subspace dimensions match the closed forms and fill the ambient space") {
  for (int n = 1; n <= 3; ++n) {
    CAPTURE(n);
    const Structure s = canonical_structure(n);
    int total = 0;
    for (int i = 1; i <= 12; ++i) {
      CAPTURE(i);
      const int d = class_subspace(ClassId::irreducible(i), s)->dim();
      CHECK(d == class_dimension_formula(i, n));
      total += d;
    }
    CHECK(total == cv_dimension(n));
    CHECK(cv_dimension(n) == (2 * n + 1) * (n * n + n));
  }
}

TEST_CASE("every basis element classifies as exactly its own class") {
  const Structure s = canonical_structure(2);
  for (int i = 5; i <= 12; ++i) {
    CAPTURE(i);
    const auto sub = class_subspace(ClassId::irreducible(i), s);
    for (int k = 0; k < sub->dim(); ++k) {
      CAPTURE(k);
      const Tensor3 a = sub->basis_element(k, s);
      const ClassificationReport rep = classify_full(a, s);
      CHECK(rep.agreement);
      CHECK(rep.hparallel_label == ClassId::irreducible(i).name());
      CHECK(rep.full_label == ClassId::irreducible(i).name());
      for (int j = 1; j <= 12; ++j) {
        const double nj = rep.component_norms.at(ClassId::irreducible(j).name());
        if (j == i)
          CHECK(nj == doctest::Approx(1.0).epsilon(1e-8));
        else
          CHECK(nj < 1e-8);
      }
    }
  }
}

TEST_CASE("Parseval identity and cross-class orthogonality") {
  for (int n = 1; n <= 3; ++n) {
    CAPTURE(n);
    const Structure s = random_structure(n, 300 + n);
    for (int t = 0; t < 5; ++t) {
      CAPTURE(t);
      const Tensor3 a = random_cv_tensor(s, 310 + 10 * n + t);
      const double na2 = cv_inner_product(a, a, s);
      double sum = 0.0;
      std::vector<Tensor3> projs;
      for (int i = 1; i <= 12; ++i) {
        projs.push_back(project(a, ClassId::irreducible(i), s));
        sum += cv_inner_product(projs.back(), projs.back(), s);
      }
      CHECK(std::abs(sum - na2) < 1e-8 * na2);
      for (int i = 0; i < 12; ++i)
        for (int j = i + 1; j < 12; ++j) {
          const double ip = cv_inner_product(projs[i], projs[j], s);
          CHECK(std::abs(ip) < 1e-8 * (1.0 + na2));
        }
    }
  }
}

TEST_CASE("two-class mixtures are labeled by both routes identically") {
  for (int n = 2; n <= 3; ++n) {
    CAPTURE(n);
    const Structure s = canonical_structure(n);
    const std::vector<std::pair<int, int>> pairs = {
        {5, 9}, {6, 10}, {7, 11}, {8, 12}, {6, 7}, {9, 12}};
    int k = 0;
    for (auto [u, v] : pairs) {
      CAPTURE(u);
      CAPTURE(v);
      const Tensor3 a = class_subspace(ClassId::irreducible(u), s)->basis_element(0, s);
      const Tensor3 b = class_subspace(ClassId::irreducible(v), s)->basis_element(k % 2, s);
      Tensor3 mix = a;
      Tensor3 scaled = b;
      scaled *= 0.7;
      mix += scaled;
      const ClassificationReport rep = classify_full(mix, s);
      CHECK(rep.agreement);
      CHECK(rep.flowchart.classes == std::set<int>{u, v});
      CHECK(rep.hparallel_label == ClassId::sum({u, v}).name());
      ++k;
    }
  }
}

TEST_CASE("H-parallel split is exact and Parseval-tight") {
  for (int n = 1; n <= 3; ++n) {
    CAPTURE(n);
    const Structure s = random_structure(n, 400 + n);
    const Tensor3 a = random_cv_tensor(s, 410 + n);
    const HParallelSplit sp = split_cv_tensor(a, s);
    // hp + d1 reproduces alpha
    Tensor3 sum = sp.hp_part;
    sum += sp.d1_part;
    sum -= a;
    CHECK(sum.max_abs() < 1e-10 * (1.0 + a.max_abs()));
    // the pieces reproduce hp
    Tensor3 acc(s.N());
    for (const auto& [i, piece] : sp.piece) {
      CAPTURE(i);
      acc += piece;
    }
    acc -= sp.hp_part;
    CHECK(acc.max_abs() < 1e-10 * (1.0 + a.max_abs()));
    // piece norms match the projector route
    for (const auto& [i, nrm] : sp.piece_norm) {
      CAPTURE(i);
      const double pn = component_norm(a, ClassId::irreducible(i), s);
      CHECK(nrm == doctest::Approx(pn).epsilon(1e-7));
    }
    // d1 part has no intrinsic data
    CHECK(extract_S(sp.d1_part, s).norm() < 1e-9);
    CHECK(extract_P(sp.d1_part, s).norm() < 1e-9);
  }
}

TEST_CASE("C_lambda_mu family: dimension, degenerate members, embedding scale") {
  for (int n = 2; n <= 3; ++n) {
    CAPTURE(n);
    const Structure s = canonical_structure(n);
    CHECK(c_lambda_mu_subspace(1.0, -2.0, s)->dim() == n * n - n);
    CHECK(c_lambda_mu_subspace(0.3, 0.7, s)->dim() == n * n - n);
    // degenerate parameters reproduce C10 and C11
    const auto c10 = class_subspace(ClassId::irreducible(10), s);
    const auto c10b = c_lambda_mu_subspace(1.0, 0.0, s);
    CHECK(c10b->dim() == c10->dim());
    const auto c11 = class_subspace(ClassId::irreducible(11), s);
    const auto c11b = c_lambda_mu_subspace(0.0, 1.0, s);
    CHECK(c11b->dim() == c11->dim());
    for (int k = 0; k < c10->dim(); ++k) {
      const Tensor3 e = c10->basis_element(k, s);
      Tensor3 back = c10b->project(e, s);
      back -= e;
      CHECK(back.max_abs() < 1e-9);
    }
    // the embedding scales the inner product by (mu^2 + 2 lambda^2)/2
    const Tensor3 a10 = c10->basis_element(0, s);
    const Tensor3 b10 = c10->basis_element(c10->dim() - 1, s);
    const double lam = 0.8, mu = -1.1;
    const Tensor3 fa = c_lambda_mu_embed(a10, lam, mu, s);
    const Tensor3 fb = c_lambda_mu_embed(b10, lam, mu, s);
    const double scale = (mu * mu + 2.0 * lam * lam) / 2.0;
    CHECK(cv_inner_product(fa, fa, s) ==
          doctest::Approx(scale * cv_inner_product(a10, a10, s)).epsilon(1e-9));
    CHECK(cv_inner_product(fa, fb, s) ==
          doctest::Approx(scale * cv_inner_product(a10, b10, s)).epsilon(1e-9));
    // members lie inside C10 + C11 and carry the lambda P = mu S relation
    const ClassificationReport rep = classify_full(fa, s);
    for (int j = 1; j <= 12; ++j)
      if (j != 10 && j != 11)
        CHECK(rep.component_norms.at(ClassId::irreducible(j).name()) < 1e-8);
  }
}

TEST_CASE("C_lambda_mu subspaces with 2 ll' + mm' = 0 are orthogonal") {
  const Structure s = canonical_structure(2);
  const auto c10 = class_subspace(ClassId::irreducible(10), s);
  const Tensor3 a10 = c10->basis_element(0, s);
  const Tensor3 b10 = c10->basis_element(1, s);
  // (1,1) vs (1,-2): 2*1*1 + 1*(-2) = 0
  const Tensor3 x = c_lambda_mu_embed(a10, 1.0, 1.0, s);
  const Tensor3 y = c_lambda_mu_embed(b10, 1.0, -2.0, s);
  const Tensor3 y2 = c_lambda_mu_embed(a10, 1.0, -2.0, s);
  const double nx = cv_norm(x, s);
  CHECK(std::abs(cv_inner_product(x, y, s)) < 1e-8 * nx * cv_norm(y, s));
  CHECK(std::abs(cv_inner_product(x, y2, s)) < 1e-8 * nx * cv_norm(y2, s));
  // non-orthogonal parameter pair for contrast: (1,1) vs (1,1)
  CHECK(std::abs(cv_inner_product(x, c_lambda_mu_embed(a10, 1.0, 1.0, s), s)) > 1e-3);
}

TEST_CASE("C_lambda_mu embedding rejects input outside C10") {
  const Structure s = canonical_structure(2);
  const Tensor3 a9 = class_subspace(ClassId::irreducible(9), s)->basis_element(0, s);
  CHECK_THROWS_AS(c_lambda_mu_embed(a9, 1.0, -2.0, s), std::invalid_argument);
}

TEST_CASE("projection onto sums equals the sum of projections") {
  const Structure s = random_structure(2, 520);
  const Tensor3 a = random_cv_tensor(s, 521);
  const Tensor3 pd1 = project(a, ClassId::d1(), s);
  Tensor3 acc(s.N());
  for (int i = 1; i <= 4; ++i) acc += project(a, ClassId::irreducible(i), s);
  acc -= pd1;
  CHECK(acc.max_abs() < 1e-10 * (1.0 + a.max_abs()));
  const double nd1 = component_norm(a, ClassId::d1(), s);
  double sq = 0.0;
  for (int i = 1; i <= 4; ++i) {
    const double ni = component_norm(a, ClassId::irreducible(i), s);
    sq += ni * ni;
  }
  CHECK(nd1 * nd1 == doctest::Approx(sq).epsilon(1e-9));
}

TEST_CASE("classification of the zero tensor is C0") {
  const Structure s = canonical_structure(1);
  const Tensor3 zero(s.N());
  const ClassificationReport rep = classify_full(zero, s);
  CHECK(rep.agreement);
  CHECK(rep.hparallel_label == "C0");
  CHECK(rep.full_label == "C0");
  CHECK(rep.d1_label == "C0");
}
