#include "acms/geometry.hpp"

#include <cmath>
#include <initializer_list>
#include <map>
#include <random>
#include <stdexcept>

#include "acms/classify.hpp"
#include "acms/cv_space.hpp"
#include "acms/intrinsic.hpp"

namespace acms {

namespace {

/// Matrix of ad_xi: column j = [xi, e_j].
Mat ad_xi(const LieAlgebraModel& m) {
  const int N = m.s.N();
  const Vec& xi = m.s.xi();
  Mat A = Mat::Zero(N, N);
  for (int j = 0; j < N; ++j)
    for (int k = 0; k < N; ++k) {
      double v = 0.0;
      for (int a = 0; a < N; ++a) v += xi[a] * m.c(a, j, k);
      A(k, j) = v;
    }
  return A;
}

}  // namespace

Vec LieAlgebraModel::bracket(const Vec& X, const Vec& Y) const {
  const int N = s.N();
  Vec out = Vec::Zero(N);
  for (int i = 0; i < N; ++i) {
    if (X[i] == 0.0) continue;
    for (int j = 0; j < N; ++j) {
      if (Y[j] == 0.0) continue;
      for (int k = 0; k < N; ++k) out[k] += X[i] * Y[j] * c(i, j, k);
    }
  }
  return out;
}

double bracket_antisymmetry_residual(const Tensor3& c) {
  const int N = c.dim();
  double r = 0.0;
  for (int i = 0; i < N; ++i)
    for (int j = 0; j < N; ++j)
      for (int k = 0; k < N; ++k) r = std::max(r, std::abs(c(i, j, k) + c(j, i, k)));
  return r;
}

double jacobi_residual(const Tensor3& c) {
  const int N = c.dim();
  double r = 0.0;
  for (int i = 0; i < N; ++i)
    for (int j = 0; j < N; ++j)
      for (int l = 0; l < N; ++l)
        for (int m = 0; m < N; ++m) {
          double v = 0.0;
          for (int a = 0; a < N; ++a)
            v += c(j, l, a) * c(i, a, m) + c(l, i, a) * c(j, a, m) + c(i, j, a) * c(l, a, m);
          r = std::max(r, std::abs(v));
        }
  return r;
}

void validate_model(const LieAlgebraModel& m, double tol) {
  const double scale = 1.0 + m.c.max_abs();
  if (bracket_antisymmetry_residual(m.c) > tol * scale)
    throw std::invalid_argument("LieAlgebraModel: brackets are not antisymmetric");
  if (jacobi_residual(m.c) > tol * scale * scale)
    throw std::invalid_argument("LieAlgebraModel: Jacobi identity fails");
  const ValidationReport rep = validate_structure(m.s, tol);
  if (!rep.empty()) {
    std::string what = "LieAlgebraModel: invalid structure:";
    for (const auto& issue : rep) what += " " + issue.identity;
    throw std::invalid_argument(what);
  }
}

Tensor3 levi_civita(const LieAlgebraModel& m) {
  const int N = m.s.N();
  const Mat& g = m.s.g();
  const Mat& gi = m.s.g_inv();
  // Lowered brackets lc(a,b,c) = g([e_a,e_b], e_c).
  Tensor3 lc(N);
  for (int a = 0; a < N; ++a)
    for (int b = 0; b < N; ++b)
      for (int c2 = 0; c2 < N; ++c2) {
        double v = 0.0;
        for (int mth = 0; mth < N; ++mth) v += m.c(a, b, mth) * g(mth, c2);
        lc(a, b, c2) = v;
      }
  Tensor3 gamma(N);
  for (int i = 0; i < N; ++i)
    for (int j = 0; j < N; ++j) {
      Vec low(N);
      for (int k = 0; k < N; ++k)
        low[k] = 0.5 * (lc(i, j, k) - lc(j, k, i) + lc(k, i, j));
      const Vec up = gi * low;
      for (int k = 0; k < N; ++k) gamma(i, j, k) = up[k];
    }
  return gamma;
}

Mat nabla_xi_direct(const LieAlgebraModel& m) {
  const int N = m.s.N();
  const Vec& xi = m.s.xi();
  const Tensor3 gamma = levi_civita(m);
  Mat out = Mat::Zero(N, N);
  for (int j = 0; j < N; ++j)
    for (int k = 0; k < N; ++k) {
      double v = 0.0;
      for (int b = 0; b < N; ++b) v += xi[b] * gamma(j, b, k);
      out(k, j) = v;
    }
  return out;
}

Tensor3 nabla_Phi(const LieAlgebraModel& m) {
  const int N = m.s.N();
  const Mat& g = m.s.g();
  const Mat& phi = m.s.phi();
  const Tensor3 gamma = levi_civita(m);
  Tensor3 alpha(N);
  for (int i = 0; i < N; ++i) {
    // (nabla_i phi) as a matrix: column k = nabla_i(phi e_k) - phi nabla_i e_k.
    Mat np = Mat::Zero(N, N);
    for (int k = 0; k < N; ++k)
      for (int l = 0; l < N; ++l) {
        double v = 0.0;
        for (int b = 0; b < N; ++b) v += phi(b, k) * gamma(i, b, l);
        for (int mm = 0; mm < N; ++mm) v -= gamma(i, k, mm) * phi(l, mm);
        np(l, k) = v;
      }
    // alpha(i,j,k) = g(e_j, (nabla_i phi) e_k)
    const Mat low = g * np;
    for (int j = 0; j < N; ++j)
      for (int k = 0; k < N; ++k) alpha(i, j, k) = low(j, k);
  }
  return alpha;
}

Mat S_direct(const LieAlgebraModel& m) { return m.s.phi() * nabla_xi_direct(m); }

Mat lie_derivative_phi(const LieAlgebraModel& m) {
  const Mat A = ad_xi(m);
  return A * m.s.phi() - m.s.phi() * A;
}

Mat h_direct(const LieAlgebraModel& m) { return 0.5 * lie_derivative_phi(m); }

Mat lie_derivative_g(const LieAlgebraModel& m) {
  const Mat M = m.s.g() * ad_xi(m);
  return -(M + M.transpose());
}

Mat d_eta_direct(const LieAlgebraModel& m) {
  const int N = m.s.N();
  const Vec& eta = m.s.eta();
  Mat out = Mat::Zero(N, N);
  for (int i = 0; i < N; ++i)
    for (int j = 0; j < N; ++j) {
      double v = 0.0;
      for (int k = 0; k < N; ++k) v += m.c(i, j, k) * eta[k];
      out(i, j) = -v;
    }
  return out;
}

Tensor3 d_Phi_direct(const LieAlgebraModel& m) {
  const int N = m.s.N();
  const Mat Phi = fundamental_form(m.s);
  auto phi_of = [&](const Vec& v, int c2) {
    double r = 0.0;
    for (int a = 0; a < N; ++a) r += v[a] * Phi(a, c2);
    return r;
  };
  Tensor3 out(N);
  for (int i = 0; i < N; ++i)
    for (int j = 0; j < N; ++j)
      for (int k = 0; k < N; ++k) {
        Vec bij(N), bik(N), bjk(N);
        for (int mth = 0; mth < N; ++mth) {
          bij[mth] = m.c(i, j, mth);
          bik[mth] = m.c(i, k, mth);
          bjk[mth] = m.c(j, k, mth);
        }
        out(i, j, k) = -phi_of(bij, k) + phi_of(bik, j) - phi_of(bjk, i);
      }
  return out;
}

Tensor3 nijenhuis_direct(const LieAlgebraModel& m) {
  const int N = m.s.N();
  const Mat& phi = m.s.phi();
  const Mat& g = m.s.g();
  const Vec& xi = m.s.xi();
  const Mat deta = d_eta_direct(m);
  Tensor3 out(N);
  for (int i = 0; i < N; ++i) {
    const Vec phi_ei = phi.col(i);
    for (int j = 0; j < N; ++j) {
      const Vec phi_ej = phi.col(j);
      Vec ei = Vec::Zero(N), ej = Vec::Zero(N);
      ei[i] = 1.0;
      ej[j] = 1.0;
      Vec Nij = m.bracket(phi_ei, phi_ej) + phi * (phi * m.bracket(ei, ej)) -
                phi * m.bracket(ei, phi_ej) - phi * m.bracket(phi_ei, ej) + deta(i, j) * xi;
      const Vec low = g * Nij;
      for (int k = 0; k < N; ++k) out(i, j, k) = low[k];
    }
  }
  return out;
}

Tensor4 curvature(const LieAlgebraModel& m) {
  const int N = m.s.N();
  const Mat& g = m.s.g();
  const Tensor3 gamma = levi_civita(m);
  std::vector<Mat> Gm(N, Mat::Zero(N, N));
  for (int i = 0; i < N; ++i)
    for (int j = 0; j < N; ++j)
      for (int k = 0; k < N; ++k) Gm[i](k, j) = gamma(i, j, k);
  Tensor4 R(N);
  for (int i = 0; i < N; ++i)
    for (int j = 0; j < N; ++j) {
      Mat Re = Gm[i] * Gm[j] - Gm[j] * Gm[i];
      for (int a = 0; a < N; ++a)
        if (m.c(i, j, a) != 0.0) Re -= m.c(i, j, a) * Gm[a];
      const Mat low = g * Re;  // low(l,k) = g(R(e_i,e_j) e_k, e_l)
      for (int k = 0; k < N; ++k)
        for (int l = 0; l < N; ++l) R(i, j, k, l) = low(l, k);
    }
  return R;
}

double curvature_symmetry_residual(const Tensor4& R, const Structure&) {
  const int N = R.dim();
  double r = 0.0;
  for (int i = 0; i < N; ++i)
    for (int j = 0; j < N; ++j)
      for (int k = 0; k < N; ++k)
        for (int l = 0; l < N; ++l) {
          r = std::max(r, std::abs(R(i, j, k, l) + R(j, i, k, l)));
          r = std::max(r, std::abs(R(i, j, k, l) + R(i, j, l, k)));
          r = std::max(r, std::abs(R(i, j, k, l) - R(k, l, i, j)));
        }
  return r;
}

double first_bianchi_residual(const Tensor4& R) {
  const int N = R.dim();
  double r = 0.0;
  for (int i = 0; i < N; ++i)
    for (int j = 0; j < N; ++j)
      for (int k = 0; k < N; ++k)
        for (int l = 0; l < N; ++l)
          r = std::max(r, std::abs(R(i, j, k, l) + R(j, k, i, l) + R(k, i, j, l)));
  return r;
}

namespace {

/// Shared predicate assembly. `direct` supplies bracket-route residuals by
/// name when a Lie model is available; alpha-route residuals are always
/// computed. All residuals are relative to the size of the input.
PredicateReport assemble_predicates(const Tensor3& alpha, const Structure& s, double tol,
                                    const std::map<std::string, double>* direct) {
  PredicateReport rep;
  const double anorm = cv_norm(alpha, s);
  const double scale = 1.0 + anorm;
  const HParallelSplit sp = split_cv_tensor(alpha, s);
  const Mat& g = s.g();
  const Mat& phi = s.phi();
  const Mat p = s.horizontal_projector();

  auto class_norms = [&](std::initializer_list<int> classes) {
    double v = 0.0;
    for (int i : classes) {
      const double cn = component_norm(alpha, ClassId::irreducible(i), s);
      v += cn * cn;
    }
    return std::sqrt(v);
  };
  auto add = [&](const std::string& name, double r_criterion, double r_definition) {
    PredicateEntry e;
    e.name = name;
    e.residual_criterion = r_criterion / scale;
    e.residual_definition = r_definition / scale;
    e.value = e.residual_criterion <= tol;
    const bool value_def = e.residual_definition <= tol;
    e.routes_agree = (e.value == value_def);
    rep.entries.push_back(e);
  };
  auto direct_res = [&](const char* key, double fallback) {
    if (direct == nullptr) return fallback;
    auto it = direct->find(key);
    return it == direct->end() ? fallback : it->second;
  };

  // H-parallel: definition (sup over horizontal triples) vs class route (D1
  // projections).
  double hpar = 0.0;
  {
    const int N = s.N();
    const Tensor3 af = s.to_frame(alpha);
    for (int i = 0; i + 1 < N; ++i)
      for (int j = 0; j + 1 < N; ++j)
        for (int k = 0; k + 1 < N; ++k) hpar = std::max(hpar, std::abs(af(i, j, k)));
  }
  add("H-parallel", hpar, class_norms({1, 2, 3, 4}));

  // CR-integrability of (H, J): (S phi - phi S)|_H symmetric vs no-C10.
  {
    const Mat w = p.transpose() * (g * (sp.S * phi - phi * sp.S)) * p;
    add("CR-integrable", (w - w.transpose()).norm(),
        component_norm(alpha, ClassId::irreducible(10), s));
  }

  // Normality: vanishing of the normality tensor vs class route C3+...+C8.
  {
    const Tensor3 Nf = nijenhuis_from_alpha(alpha, s);
    const double def_route = direct_res("nijenhuis", Nf.frobenius());
    add("normal", class_norms({1, 2, 9, 10, 11, 12}), def_route);
  }

  // Anti-normality: N = 2 d eta (x) xi vs endomorphism route (h = 0, S skew)
  // plus the class data (no C1,C2,C6,C7,C9,C12; C10+C11 part in C_{1,2}).
  {
    const Tensor3 Nf = nijenhuis_from_alpha(alpha, s);
    const Mat deta = d_eta_from_S(sp.S, s);
    Tensor3 target(s.N());
    const Vec low_xi = g * s.xi();
    for (int i = 0; i < s.N(); ++i)
      for (int j = 0; j < s.N(); ++j)
        for (int k = 0; k < s.N(); ++k) target(i, j, k) = 2.0 * deta(i, j) * low_xi[k];
    Tensor3 diff = Nf;
    diff -= target;
    const double aq = component_norm(alpha, ClassId::c_lambda_mu(1.0, -1.0), s);
    const double cls = std::hypot(class_norms({1, 2, 6, 7, 9, 12}), aq);
    add("anti-normal", cls, diff.frobenius());
  }

  // xi Killing: phi S skew (endomorphism route) vs class route
  // D1 + C6 + C7 + C10 + C11; Lie models also contribute ||L_xi g||.
  {
    const Mat w = g * (phi * sp.S);
    const double endo = (w + w.transpose()).norm() + (sp.S * s.xi()).norm();
    const double def_route = direct_res("killing", class_norms({5, 8, 9, 12}));
    add("xi-Killing", endo, def_route);
  }

  // d eta = 0: S-formula vs class route C5+C8+C9+C11 (+ D1).
  {
    const double def_route = direct_res("deta", class_norms({6, 7, 10, 12}));
    add("deta-zero", d_eta_from_S(sp.S, s).norm(), def_route);
  }

  rep.all_agree = true;
  for (const auto& e : rep.entries) rep.all_agree = rep.all_agree && e.routes_agree;
  return rep;
}

}  // namespace

PredicateReport predicates_alpha(const Tensor3& alpha, const Structure& s, double tol) {
  return assemble_predicates(alpha, s, tol, nullptr);
}

PredicateReport predicates_model(const LieAlgebraModel& m, double tol) {
  const Tensor3 alpha = nabla_Phi(m);
  std::map<std::string, double> direct;
  direct["nijenhuis"] = nijenhuis_direct(m).frobenius();
  direct["killing"] = lie_derivative_g(m).norm();
  direct["deta"] = d_eta_direct(m).norm();
  return assemble_predicates(alpha, m.s, tol, &direct);
}

LieAlgebraModel heisenberg_model(int n, const Vec& lambda) {
  if (lambda.size() != n) throw std::invalid_argument("heisenberg_model: need n lambdas");
  const int N = 2 * n + 1;
  Tensor3 c(N);
  for (int i = 0; i < n; ++i) {
    c(i, n + i, N - 1) = 2.0 * lambda[i];
    c(n + i, i, N - 1) = -2.0 * lambda[i];
  }
  return LieAlgebraModel("heisenberg", canonical_structure(n), std::move(c));
}

LieAlgebraModel abelian_model(int n) {
  return LieAlgebraModel("abelian", canonical_structure(n), Tensor3(2 * n + 1));
}

LieAlgebraModel random_lie_model(int n, std::uint64_t seed, RandomModelKind kind) {
  const int N = 2 * n + 1;
  std::mt19937_64 rng(seed * 2654435761ull + 17);
  std::normal_distribution<double> dist(0.0, 0.5);
  if (kind == RandomModelKind::Mixed)
    kind = (rng() & 1ull) ? RandomModelKind::CentralExtension : RandomModelKind::AlmostAbelian;
  Tensor3 c(N);
  if (kind == RandomModelKind::CentralExtension) {
    // [e_i, e_j] = gamma_ij e_{N-1} on a codimension-1 abelian complement of a
    // central last axis; Jacobi is automatic.
    for (int i = 0; i < N - 1; ++i)
      for (int j = i + 1; j < N - 1; ++j) {
        const double v = dist(rng);
        c(i, j, N - 1) = v;
        c(j, i, N - 1) = -v;
      }
  } else {
    // [e_{N-1}, e_i] = D e_i on an abelian codimension-1 ideal; Jacobi is
    // automatic.
    for (int i = 0; i < N - 1; ++i)
      for (int k = 0; k < N - 1; ++k) {
        const double v = dist(rng);
        c(N - 1, i, k) = v;
        c(i, N - 1, k) = -v;
      }
  }
  Structure s = random_structure(n, seed + 9001);
  return LieAlgebraModel("random", std::move(s), std::move(c));
}

ThreeAlphaDeltaModel three_alpha_delta_point_model(double alpha0, double delta0) {
  if (alpha0 == 0.0)
    throw std::invalid_argument("three_alpha_delta_point_model: alpha0 must be nonzero");
  const int N = 7;
  ThreeAlphaDeltaModel model;
  model.alpha0 = alpha0;
  model.delta0 = delta0;

  // Quaternionic left multiplications by i and j on R^4 = span(e_0..e_3),
  // extended to the Reeb span by phi_1 xi_2 = xi_3, phi_2 xi_3 = xi_1 etc.
  Mat phi1 = Mat::Zero(N, N), phi2 = Mat::Zero(N, N);
  phi1(1, 0) = 1;  phi1(0, 1) = -1;  phi1(3, 2) = 1;  phi1(2, 3) = -1;
  phi2(2, 0) = 1;  phi2(3, 1) = -1;  phi2(0, 2) = -1; phi2(1, 3) = 1;
  Vec xi1 = Vec::Zero(N), xi2 = Vec::Zero(N), xi3 = Vec::Zero(N);
  xi1[4] = 1;
  xi2[5] = 1;
  xi3[6] = 1;
  phi1(6, 5) = 1;  phi1(5, 6) = -1;  // phi_1 xi_2 = xi_3, phi_1 xi_3 = -xi_2
  phi2(4, 6) = 1;  phi2(6, 4) = -1;  // phi_2 xi_3 = xi_1, phi_2 xi_1 = -xi_3
  const Mat phi3 = phi1 * phi2 - xi1 * xi2.transpose();  // phi_k = phi_i phi_j - eta_j (x) xi_i

  const Mat g = Mat::Identity(N, N);
  const std::array<Mat, 3> phis = {phi1, phi2, phi3};
  const std::array<Vec, 3> xis = {xi1, xi2, xi3};
  model.structures.reserve(3);
  for (int i = 0; i < 3; ++i) model.structures.emplace_back(3, g, phis[i], xis[i]);

  for (int i = 0; i < 3; ++i) {
    const int j = (i + 1) % 3, k = (i + 2) % 3;
    const Structure& s = model.structures[i];
    const Mat p = s.horizontal_projector();
    model.S[i] = alpha0 * p -
                 (alpha0 - delta0) * (xis[j] * xis[j].transpose() + xis[k] * xis[k].transpose());
    model.alpha_hp[i] =
        reconstruct_H_parallel(model.S[i], Mat::Zero(N, N), s);

    // Horizontal (D1) component: 2(a-d)[eta_k(X) g(phi_j Y, Z) - eta_j(X) g(phi_k Y, Z)]
    // on xi_i-horizontal slots, extended by zero on the Reeb direction.
    Tensor3 d1(N);
    const Mat wj = p.transpose() * (g * phis[j]) * p;
    const Mat wk = p.transpose() * (g * phis[k]) * p;
    for (int a = 0; a < N; ++a) {
      const double ck = 2.0 * (alpha0 - delta0) * xis[k][a];
      const double cj = 2.0 * (alpha0 - delta0) * xis[j][a];
      if (ck == 0.0 && cj == 0.0) continue;
      for (int b = 0; b < N; ++b)
        for (int c2 = 0; c2 < N; ++c2) d1(a, b, c2) = ck * wj(b, c2) - cj * wk(b, c2);
    }
    model.alpha[i] = model.alpha_hp[i];
    model.alpha[i] += d1;

    const Mat Phi_i = g * phis[i];
    model.d_eta[i] = 2.0 * alpha0 * Phi_i +
                     2.0 * (alpha0 - delta0) *
                         (xis[j] * xis[k].transpose() - xis[k] * xis[j].transpose());
  }
  return model;
}

Mat anticommuting_h0(const Structure& s, std::uint64_t seed, bool symmetric) {
  const int n = s.n();
  const int N = s.N();
  std::mt19937_64 rng(seed * 6364136223846793005ull + 1442695040888963407ull);
  std::normal_distribution<double> dist(0.0, 1.0);
  Mat A = Mat::Zero(n, n), B = Mat::Zero(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      A(i, j) = dist(rng);
      B(i, j) = dist(rng);
    }
  if (symmetric) {
    A = 0.5 * (A + A.transpose()).eval();
    B = 0.5 * (B + B.transpose()).eval();
  } else {
    A = 0.5 * (A - A.transpose()).eval();
    B = 0.5 * (B - B.transpose()).eval();
  }
  Mat Mf = Mat::Zero(N, N);
  Mf.block(0, 0, n, n) = A;
  Mf.block(0, n, n, n) = B;
  Mf.block(n, 0, n, n) = B;
  Mf.block(n, n, n, n) = -A;
  return s.endo_from_frame(Mf);
}

Tensor3 synthetic_example(const std::string& name, const Structure& s, std::uint64_t seed) {
  const int N = s.N();
  const Mat p = Mat::Identity(N, N) - s.xi() * s.eta().transpose();
  const Mat zero = Mat::Zero(N, N);
  if (name == "contact-metric")
    return reconstruct_H_parallel(p + anticommuting_h0(s, seed, true), zero, s);
  if (name == "nearly-sasakian") {
    const Mat h0 = anticommuting_h0(s, seed, false);
    return reconstruct_H_parallel(p + (2.0 / 3.0) * h0, -(2.0 / 3.0) * h0, s);
  }
  if (name == "nearly-cosymplectic") {
    const Mat h0 = anticommuting_h0(s, seed, false);
    return reconstruct_H_parallel((2.0 / 3.0) * h0, -(2.0 / 3.0) * h0, s);
  }
  if (name == "almost-cokahler")
    return reconstruct_H_parallel(anticommuting_h0(s, seed, true), zero, s);
  if (name == "almost-kenmotsu")
    return reconstruct_H_parallel(s.phi() + anticommuting_h0(s, seed, true), zero, s);
  throw std::invalid_argument("unknown synthetic example: " + name);
}

}  // namespace acms
