#include "acms/classify.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <sstream>
#include <stdexcept>

namespace acms {

namespace {

constexpr double kRankThreshold = 1e-8;

Mat null_space(const Mat& M, double thresh = kRankThreshold) {
  if (M.rows() == 0) return Mat::Identity(M.cols(), M.cols());
  Eigen::JacobiSVD<Mat> svd(M, Eigen::ComputeFullV);
  const auto& sv = svd.singularValues();
  const double scale = sv.size() > 0 ? sv[0] : 0.0;
  int rank = 0;
  for (Eigen::Index i = 0; i < sv.size(); ++i)
    if (sv[i] > thresh * std::max(1.0, scale)) ++rank;
  return svd.matrixV().rightCols(M.cols() - rank);
}

/// Accumulates linear constraint rows on the entries of alpha, in canonical
/// (adapted-frame) coordinates where g = I, xi = e_{N-1}.
struct RowBuilder {
  int N, xi;
  Mat phi;
  std::vector<Vec> rows;
  Vec cur;

  explicit RowBuilder(int n) : N(2 * n + 1), xi(2 * n), phi(canonical_phi(n)) {}

  void begin() { cur = Vec::Zero(N * N * N); }
  void end() { rows.push_back(cur); }

  void alpha(double c, int i, int j, int k) { cur[(i * N + j) * N + k] += c; }
  // c * S(a,b) with S read off alpha: S(a,b) = alpha(b, xi, a).
  void S(double c, int a, int b) { alpha(c, b, xi, a); }
  // c * P(a,b): P(a,b) = alpha(xi, b, a).
  void P(double c, int a, int b) { alpha(c, xi, b, a); }
  // c * g(S phi e_i, phi e_k)
  void S_phi_phi(double c, int i, int k) {
    for (int a = 0; a < N; ++a)
      for (int b = 0; b < N; ++b) {
        const double w = phi(a, i) * phi(b, k);
        if (w != 0.0) S(c * w, b, a);
      }
  }
  void trace_S(double c) {
    for (int a = 0; a < N; ++a) S(c, a, a);
  }
  void trace_phi_S(double c) {
    for (int a = 0; a < N; ++a)
      for (int b = 0; b < N; ++b)
        if (phi(a, b) != 0.0) S(c * phi(a, b), b, a);
  }
  // c * deltaPhi(e_m) = -c * sum_a alpha(a,a,m)
  void delta_Phi(double c, int m) {
    for (int a = 0; a < N; ++a) alpha(-c, a, a, m);
  }
  // c * (S phi -+ phi S)(a,b)
  void commutator_S_phi(double c, int a, int b, double sign_phiS) {
    for (int m = 0; m < N; ++m) {
      if (phi(m, b) != 0.0) S(c * phi(m, b), a, m);        // (S phi)(a,b)
      if (phi(a, m) != 0.0) S(c * sign_phiS * phi(a, m), m, b);  // +- (phi S)(a,b)
    }
  }

  Mat matrix() const {
    Mat M(static_cast<Eigen::Index>(rows.size()), N * N * N);
    for (size_t r = 0; r < rows.size(); ++r) M.row(static_cast<Eigen::Index>(r)) = rows[r];
    return M;
  }
};

void add_d1_rows(RowBuilder& rb) {
  for (int a = 0; a < rb.N; ++a)
    for (int b = 0; b < rb.N; ++b) {
      rb.begin();
      rb.S(1.0, a, b);
      rb.end();
      rb.begin();
      rb.P(1.0, a, b);
      rb.end();
    }
}

void add_h_parallel_rows(RowBuilder& rb) {
  for (int i = 0; i < rb.xi; ++i)
    for (int j = 0; j < rb.xi; ++j)
      for (int k = 0; k < rb.xi; ++k) {
        rb.begin();
        rb.alpha(1.0, i, j, k);
        rb.end();
      }
}

void add_delta_Phi_zero_rows(RowBuilder& rb) {
  for (int m = 0; m < rb.N; ++m) {
    rb.begin();
    rb.delta_Phi(1.0, m);
    rb.end();
  }
}

/// Defining equation rows for the classes with an explicit table form.
/// `kind` distinguishes the sign pattern shared by C7/C8/C9/C10 and the sums.
void add_table_rows(RowBuilder& rb, int cls) {
  const int N = rb.N, xi = rb.xi;
  const int n = (N - 1) / 2;
  for (int i = 0; i < N; ++i)
    for (int j = 0; j < N; ++j)
      for (int k = 0; k < N; ++k) {
        rb.begin();
        rb.alpha(1.0, i, j, k);
        const double ej = (j == xi) ? 1.0 : 0.0;
        const double ek = (k == xi) ? 1.0 : 0.0;
        const double ei = (i == xi) ? 1.0 : 0.0;
        switch (cls) {
          case 5: {
            // alpha = -(1/2n)(eta_j Phi(k,i)... ) tr(phi S); Phi-free form:
            // alpha(X,Y,Z) = -(1/2n)[eta(Y) g(phiX,Z) - eta(Z) g(phiX,Y)] tr(phi S)
            const double c = (ej * rb.phi(k, i) - ek * rb.phi(j, i)) / (2.0 * n);
            if (c != 0.0) rb.trace_phi_S(c);
            break;
          }
          case 6: {
            const double c = (ej * (i == k ? 1.0 : 0.0) - ek * (i == j ? 1.0 : 0.0)) / (2.0 * n);
            if (c != 0.0) rb.trace_S(-c);
            break;
          }
          case 7:  // alpha = eta(Y) g(S phiX, phiZ) - eta(Z) g(SY, X)
          case 67:
            if (ej != 0.0) rb.S_phi_phi(-1.0, i, k);
            if (ek != 0.0) rb.S(1.0, i, j);
            break;
          case 8:  // alpha = eta(Y) g(S phiX, phiZ) + eta(Z) g(SY, X)
          case 58:
            if (ej != 0.0) rb.S_phi_phi(-1.0, i, k);
            if (ek != 0.0) rb.S(-1.0, i, j);
            break;
          case 9:  // alpha = -eta(Y) g(S phiX, phiZ) - eta(Z) g(SY, X)
            if (ej != 0.0) rb.S_phi_phi(1.0, i, k);
            if (ek != 0.0) rb.S(1.0, i, j);
            break;
          case 10:  // alpha = -eta(Y) g(S phiX, phiZ) + eta(Z) g(SY, X)
            if (ej != 0.0) rb.S_phi_phi(1.0, i, k);
            if (ek != 0.0) rb.S(-1.0, i, j);
            break;
          case 910:  // alpha = -eta(Y) g(S phiX, phiZ) + eta(Z) g(S phiX, phiY)
            if (ej != 0.0) rb.S_phi_phi(1.0, i, k);
            if (ek != 0.0) rb.S_phi_phi(-1.0, i, j);
            break;
          case 11:  // alpha = -eta(X) g(P phiY, phiZ)
            if (ei != 0.0)
              for (int a = 0; a < N; ++a)
                for (int b = 0; b < N; ++b) {
                  const double w = rb.phi(a, j) * rb.phi(b, k);
                  if (w != 0.0) rb.P(w, b, a);
                }
            break;
          case 12:  // alpha = eta(X)eta(Y) g(S xi, Z) - eta(X)eta(Z) g(S xi, Y)
            if (ei != 0.0 && ej != 0.0) rb.S(-1.0, k, xi);
            if (ei != 0.0 && ek != 0.0) rb.S(1.0, j, xi);
            break;
          case 2000: {  // D2: alpha = eta(X) P(k,j) + eta(Y) S(k,i) - eta(Z) S(j,i)
            if (ei != 0.0) rb.P(-1.0, k, j);
            if (ej != 0.0) rb.S(-1.0, k, i);
            if (ek != 0.0) rb.S(1.0, j, i);
            break;
          }
          default:
            throw std::logic_error("add_table_rows: unknown class");
        }
        rb.end();
      }
}

void add_c1_rows(RowBuilder& rb) {
  add_d1_rows(rb);
  for (int i = 0; i < rb.N; ++i)
    for (int j = 0; j < rb.N; ++j)
      for (int k = 0; k < rb.N; ++k) {
        rb.begin();
        rb.alpha(1.0, i, j, k);
        rb.alpha(1.0, j, i, k);
        rb.end();
      }
}

void add_c2_rows(RowBuilder& rb) {
  add_d1_rows(rb);
  for (int i = 0; i < rb.N; ++i)
    for (int j = 0; j < rb.N; ++j)
      for (int k = 0; k < rb.N; ++k) {
        rb.begin();
        rb.alpha(1.0, i, j, k);
        rb.alpha(1.0, j, k, i);
        rb.alpha(1.0, k, i, j);
        rb.end();
      }
}

void add_c3_rows(RowBuilder& rb) {
  add_d1_rows(rb);
  for (int i = 0; i < rb.N; ++i)
    for (int j = 0; j < rb.N; ++j)
      for (int k = 0; k < rb.N; ++k) {
        rb.begin();
        rb.alpha(1.0, i, j, k);
        for (int a = 0; a < rb.N; ++a)
          for (int b = 0; b < rb.N; ++b) {
            const double w = rb.phi(a, i) * rb.phi(b, j);
            if (w != 0.0) rb.alpha(-w, a, b, k);
          }
        rb.end();
      }
  add_delta_Phi_zero_rows(rb);
}

void add_c4_rows(RowBuilder& rb, int n) {
  add_d1_rows(rb);
  const int N = rb.N, xi = rb.xi;
  auto gphiphi = [&](int a, int b) {  // g(phi e_a, phi e_b) = delta_ab - eta_a eta_b
    return (a == b ? 1.0 : 0.0) - ((a == xi && b == xi) ? 1.0 : 0.0);
  };
  const double c = 1.0 / (2.0 * (n - 1));
  for (int i = 0; i < N; ++i)
    for (int j = 0; j < N; ++j)
      for (int k = 0; k < N; ++k) {
        rb.begin();
        rb.alpha(1.0, i, j, k);
        // + c [ g(phiX,phiY) dPhi(Z) - g(phiX,phiZ) dPhi(Y)
        //       - Phi(X,Y) dPhi(phiZ) + Phi(X,Z) dPhi(phiY) ]
        if (gphiphi(i, j) != 0.0) rb.delta_Phi(c * gphiphi(i, j), k);
        if (gphiphi(i, k) != 0.0) rb.delta_Phi(-c * gphiphi(i, k), j);
        for (int m = 0; m < N; ++m) {
          if (rb.phi(i, j) != 0.0 && rb.phi(m, k) != 0.0)
            rb.delta_Phi(-c * rb.phi(i, j) * rb.phi(m, k), m);
          if (rb.phi(i, k) != 0.0 && rb.phi(m, j) != 0.0)
            rb.delta_Phi(c * rb.phi(i, k) * rb.phi(m, j), m);
        }
        rb.end();
      }
  // delta Phi (xi) = 0
  rb.begin();
  rb.delta_Phi(1.0, xi);
  rb.end();
}

void add_skew_S_rows(RowBuilder& rb) {
  for (int a = 0; a < rb.N; ++a)
    for (int b = 0; b < rb.N; ++b) {
      rb.begin();
      rb.S(1.0, a, b);
      rb.S(1.0, b, a);
      rb.end();
    }
}

void add_S_phi_commutator_rows(RowBuilder& rb, double sign_phiS) {
  for (int a = 0; a < rb.N; ++a)
    for (int b = 0; b < rb.N; ++b) {
      rb.begin();
      rb.commutator_S_phi(1.0, a, b, sign_phiS);
      rb.end();
    }
}

void add_P_zero_rows(RowBuilder& rb) {
  for (int a = 0; a < rb.N; ++a)
    for (int b = 0; b < rb.N; ++b) {
      rb.begin();
      rb.P(1.0, a, b);
      rb.end();
    }
}

const unsigned kMaskD1 = 0b000000001111;
const unsigned kMaskD2 = 0b011111110000;
const unsigned kMaskHP = 0b111111110000;
const unsigned kMask5to10 = 0b001111110000;
const unsigned kMask5to8 = 0b000011110000;

unsigned mask_of(const std::set<int>& parts) {
  unsigned m = 0;
  for (int i : parts) m |= 1u << (i - 1);
  return m;
}

/// Constraint rows whose null space (inside C(V)) is the class; empty
/// optional-like (rows 0) when the class has no direct equation set.
bool build_rows(const ClassId& id, int n, Mat* out) {
  RowBuilder rb(n);
  if (id.kind == ClassId::Kind::CLambdaMu) {
    add_h_parallel_rows(rb);
    add_skew_S_rows(rb);
    add_S_phi_commutator_rows(rb, +1.0);  // S phi + phi S = 0
    for (int a = 0; a < rb.N; ++a)
      for (int b = 0; b < rb.N; ++b) {
        rb.begin();
        rb.P(id.lambda, a, b);
        rb.S(-id.mu, a, b);
        rb.end();
      }
    *out = rb.matrix();
    return true;
  }
  const unsigned m = id.mask;
  if (m == (1u << 0)) add_c1_rows(rb);
  else if (m == (1u << 1)) add_c2_rows(rb);
  else if (m == (1u << 2)) add_c3_rows(rb);
  else if (m == (1u << 3)) {
    if (n == 1) {  // degenerate coefficient 1/(n-1): C4 = {0} in dimension 3
      *out = Mat::Identity(rb.N * rb.N * rb.N, rb.N * rb.N * rb.N);
      return true;
    }
    add_c4_rows(rb, n);
  } else if (m == (1u << 4)) add_table_rows(rb, 5);
  else if (m == (1u << 5)) add_table_rows(rb, 6);
  else if (m == (1u << 6)) {
    add_table_rows(rb, 7);
    add_delta_Phi_zero_rows(rb);
  } else if (m == (1u << 7)) {
    add_table_rows(rb, 8);
    rb.begin();
    rb.trace_phi_S(1.0);
    rb.end();
  } else if (m == (1u << 8)) add_table_rows(rb, 9);
  else if (m == (1u << 9)) add_table_rows(rb, 10);
  else if (m == (1u << 10)) add_table_rows(rb, 11);
  else if (m == (1u << 11)) add_table_rows(rb, 12);
  else if (m == kMaskD1) add_d1_rows(rb);
  else if (m == kMaskD2) add_table_rows(rb, 2000);
  else if (m == kMaskHP) add_h_parallel_rows(rb);
  else if (m == kMask5to10) {
    add_h_parallel_rows(rb);
    add_P_zero_rows(rb);
  } else if (m == kMask5to8) {
    add_h_parallel_rows(rb);
    add_P_zero_rows(rb);
    add_S_phi_commutator_rows(rb, -1.0);  // S phi - phi S = 0
  } else if (m == mask_of({9, 10})) add_table_rows(rb, 910);
  else if (m == mask_of({6, 7})) add_table_rows(rb, 67);
  else if (m == mask_of({5, 8})) add_table_rows(rb, 58);
  else if (m == mask_of({10, 11})) {
    add_h_parallel_rows(rb);
    add_skew_S_rows(rb);
    add_S_phi_commutator_rows(rb, +1.0);
  } else {
    return false;
  }
  *out = rb.matrix();
  return true;
}

Mat orthonormalize_columns(const Mat& B) {
  if (B.cols() == 0) return B;
  Eigen::JacobiSVD<Mat> svd(B, Eigen::ComputeThinU);
  const auto& sv = svd.singularValues();
  int rank = 0;
  for (Eigen::Index i = 0; i < sv.size(); ++i)
    if (sv[i] > 1e-10 * std::max(1.0, sv[0])) ++rank;
  return svd.matrixU().leftCols(rank);
}

Mat build_basis_frame(const ClassId& id, int n);

Mat basis_by_concatenation(const ClassId& id, int n) {
  const Mat& cvB = cv_basis(n);
  Mat acc(cvB.rows(), 0);
  for (int i : id.parts()) {
    const Mat part = build_basis_frame(ClassId::irreducible(i), n);
    Mat next(acc.rows(), acc.cols() + part.cols());
    next << acc, part;
    acc = std::move(next);
  }
  return orthonormalize_columns(acc);
}

Mat build_basis_frame(const ClassId& id, int n) {
  Mat rows;
  if (!build_rows(id, n, &rows)) return basis_by_concatenation(id, n);
  const Mat& B = cv_basis(n);  // N^3 x dimCV, orthonormal
  const Mat reduced = rows * B;
  const Mat coeffs = null_space(reduced);
  return B * coeffs;  // orthonormal since B and coeffs are
}

std::string join_classes(const std::set<int>& cs) {
  if (cs.empty()) return "C0";
  std::ostringstream os;
  bool first = true;
  for (int i : cs) {
    if (!first) os << "+";
    os << "C" << i;
    first = false;
  }
  return os.str();
}

}  // namespace

ClassId ClassId::irreducible(int i) {
  if (i < 1 || i > 12) throw std::invalid_argument("ClassId: class index out of range");
  ClassId c;
  c.kind = Kind::Sum;
  c.mask = 1u << (i - 1);
  return c;
}

ClassId ClassId::sum(const std::set<int>& parts) {
  if (parts.empty()) throw std::invalid_argument("ClassId: empty sum");
  ClassId c;
  c.kind = Kind::Sum;
  c.mask = mask_of(parts);
  return c;
}

ClassId ClassId::c_lambda_mu(double lambda, double mu) {
  const double len = std::hypot(lambda, mu);
  if (len == 0.0) throw std::invalid_argument("ClassId: lambda = mu = 0");
  ClassId c;
  c.kind = Kind::CLambdaMu;
  c.lambda = lambda / len;
  c.mu = mu / len;
  // Fix the projective sign: first significant coordinate positive.
  const double lead = std::abs(c.lambda) > 1e-12 ? c.lambda : c.mu;
  if (lead < 0.0) {
    c.lambda = -c.lambda;
    c.mu = -c.mu;
  }
  return c;
}

std::set<int> ClassId::parts() const {
  std::set<int> out;
  for (int i = 1; i <= 12; ++i)
    if (contains(i)) out.insert(i);
  return out;
}

std::string ClassId::name() const {
  if (kind == Kind::CLambdaMu) {
    const ClassId cm = c_min();
    if (std::abs(lambda - cm.lambda) < 1e-12 && std::abs(mu - cm.mu) < 1e-12) return "C_min";
    std::ostringstream os;
    os.precision(12);
    os << "C{" << lambda << "," << mu << "}";
    return os.str();
  }
  if (mask == kMaskD1) return "D1";
  if (mask == kMaskD2) return "D2";
  if (mask == (1u << 11)) return "C12";
  if (mask == kMaskHP) return "D2+D3";
  return join_classes(parts());
}

Subspace::Subspace(ClassId id, int n, Mat basis_frame)
    : id_(std::move(id)), n_(n), basis_frame_(std::move(basis_frame)) {}

Tensor3 Subspace::basis_element(int k, const Structure& s) const {
  if (k < 0 || k >= dim()) throw std::out_of_range("Subspace::basis_element");
  return s.from_frame(Tensor3::from_flat(s.N(), basis_frame_.col(k)));
}

Tensor3 Subspace::project(const Tensor3& alpha, const Structure& s) const {
  if (dim() == 0) return Tensor3(s.N());
  const Vec f = s.to_frame(alpha).flat();
  const Vec coeffs = basis_frame_.transpose() * f;
  return s.from_frame(Tensor3::from_flat(s.N(), basis_frame_ * coeffs));
}

double Subspace::component_norm(const Tensor3& alpha, const Structure& s) const {
  if (dim() == 0) return 0.0;
  const Vec f = s.to_frame(alpha).flat();
  return (basis_frame_.transpose() * f).norm();
}

std::shared_ptr<const Subspace> class_subspace(const ClassId& id, const Structure& s) {
  static std::mutex mu;
  static std::map<std::string, std::shared_ptr<const Subspace>> cache;
  const int n = s.n();
  std::ostringstream key;
  key << id.name() << ":" << n;
  {
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find(key.str());
    if (it != cache.end()) return it->second;
  }
  auto sub = std::make_shared<const Subspace>(id, n, build_basis_frame(id, n));
  std::lock_guard<std::mutex> lock(mu);
  auto [it, inserted] = cache.emplace(key.str(), std::move(sub));
  return it->second;
}

Tensor3 project(const Tensor3& alpha, const ClassId& id, const Structure& s) {
  return class_subspace(id, s)->project(alpha, s);
}

double component_norm(const Tensor3& alpha, const ClassId& id, const Structure& s) {
  return class_subspace(id, s)->component_norm(alpha, s);
}

int class_dimension_formula(int i, int n) {
  if (i < 1 || i > 12) throw std::invalid_argument("class index must lie in 1..12");
  switch (i) {
    case 1:
      return n * (n - 1) * (n - 2) / 3;
    case 2:
      return 2 * n * (n * n - 1) / 3;
    case 3:
      return n < 2 ? 0 : n * (n + 1) * (n - 2);
    case 4:
      return n < 2 ? 0 : 2 * n;
    case 5:
    case 6:
      return 1;
    case 7:
    case 8:
      return n * n - 1;
    case 9:
      return n * n + n;
    case 10:
    case 11:
      return n * n - n;
    default:
      return 2 * n;
  }
}

HParallelSplit split_cv_tensor(const Tensor3& alpha, const Structure& s) {
  HParallelSplit sp;
  const int N = s.N();
  const int n = s.n();
  const Mat& g = s.g();
  const Mat& gi = s.g_inv();
  const Mat& phi = s.phi();
  const Vec& xi = s.xi();
  const Vec& eta = s.eta();

  sp.S = extract_S(alpha, s);
  sp.P = extract_P(alpha, s);
  sp.h = extract_h(sp.S, sp.P, s);

  const Vec v = sp.S * xi;
  sp.S12 = v * eta.transpose();
  sp.P12 = -xi * (g * v).transpose() + v * eta.transpose();
  sp.S2 = sp.S - sp.S12;
  sp.P2 = sp.P - sp.P12;

  auto adj = [&](const Mat& E) { return Mat(gi * E.transpose() * g); };
  const Mat Sc = 0.5 * (sp.S2 - phi * sp.S2 * phi);
  const Mat Sa = 0.5 * (sp.S2 + phi * sp.S2 * phi);
  const Mat S67 = 0.5 * (Sc + adj(Sc));
  const Mat S58 = 0.5 * (Sc - adj(Sc));
  const Mat S9 = 0.5 * (Sa + adj(Sa));
  const Mat S10 = 0.5 * (Sa - adj(Sa));

  sp.c6_coeff = S67.trace() / (2.0 * n);
  const Mat S6 = sp.c6_coeff * s.horizontal_projector();
  const Mat S7 = S67 - S6;
  sp.c5_beta = -(phi * S58).trace() / (2.0 * n);
  const Mat S5 = sp.c5_beta * phi;
  const Mat S8 = S58 - S5;

  const Mat Z = Mat::Zero(N, N);
  sp.piece[5] = reconstruct_H_parallel(S5, Z, s);
  sp.piece[6] = reconstruct_H_parallel(S6, Z, s);
  sp.piece[7] = reconstruct_H_parallel(S7, Z, s);
  sp.piece[8] = reconstruct_H_parallel(S8, Z, s);
  sp.piece[9] = reconstruct_H_parallel(S9, Z, s);
  sp.piece[10] = reconstruct_H_parallel(S10, Z, s);
  sp.piece[11] = reconstruct_H_parallel(Z, sp.P2, s);
  sp.piece[12] = reconstruct_H_parallel(sp.S12, sp.P12, s);
  for (const auto& [cls, t] : sp.piece) sp.piece_norm[cls] = cv_norm(t, s);

  sp.hp_part = reconstruct_H_parallel(sp.S, sp.P, s);
  sp.d1_part = alpha - sp.hp_part;
  sp.hp_residual = cv_norm(sp.d1_part, s) / (1.0 + cv_norm(alpha, s));
  return sp;
}

FlowchartResult flowchart_classify(const Tensor3& alpha, const Structure& s, double tol) {
  FlowchartResult fr;
  const HParallelSplit sp = split_cv_tensor(alpha, s);
  if (sp.hp_residual > std::max(tol, 1e-7) * 10.0)
    throw std::invalid_argument("flowchart_classify: tensor is not H-parallel (residual " +
                                std::to_string(sp.hp_residual) + ")");
  fr.hp_residual = sp.hp_residual;
  fr.c5_beta = sp.c5_beta;
  fr.c6_coeff = sp.c6_coeff;
  fr.piece_norms = sp.piece_norm;

  const double anorm = cv_norm(alpha, s);
  if (anorm < 1e-14) {
    fr.label = "C0";
    return fr;
  }
  const double thr = tol;
  auto add_branch = [&](const std::string& name, double abs_res) {
    BranchEval b;
    b.name = name;
    b.residual = abs_res / anorm;
    b.passed = b.residual <= thr;
    b.marginal = b.residual >= thr / 10.0 && b.residual <= thr * 10.0;
    fr.branches.push_back(b);
    if (b.marginal) fr.marginal_branches.push_back(name);
  };

  const Mat& phi = s.phi();
  const Mat& g = s.g();
  const Mat& gi = s.g_inv();
  auto adj = [&](const Mat& E) { return Mat(gi * E.transpose() * g); };
  add_branch("S|_H = 0", (sp.S * s.horizontal_projector()).norm());
  add_branch("phi h = 0", (phi * sp.h).norm());
  add_branch("S xi = 0", (sp.S * s.xi()).norm());
  add_branch("S = 0", sp.S.norm());
  add_branch("P = 0", sp.P.norm());
  add_branch("S phi + phi S = 0", (sp.S2 * phi + phi * sp.S2).norm());
  add_branch("S phi - phi S = 0", (sp.S2 * phi - phi * sp.S2).norm());
  add_branch("S symmetric", (sp.S2 - adj(sp.S2)).norm());
  add_branch("S skew", (sp.S2 + adj(sp.S2)).norm());
  add_branch("S = beta phi", (sp.S2 - sp.c5_beta * phi).norm());
  add_branch("S = a (I - eta x xi)", (sp.S2 - sp.c6_coeff * s.horizontal_projector()).norm());
  add_branch("tr S = 0", std::abs(sp.S2.trace()));
  add_branch("tr(phi S) = 0", std::abs((phi * sp.S2).trace()));

  for (const auto& [cls, norm] : sp.piece_norm) {
    const double r = norm / anorm;
    if (r > thr) fr.classes.insert(cls);
    if (r >= thr / 10.0 && r <= thr * 10.0)
      fr.marginal_branches.push_back("C" + std::to_string(cls) + " component");
  }
  fr.label = join_classes(fr.classes);
  return fr;
}

ClassificationReport classify_full(const Tensor3& alpha, const Structure& s, double tol) {
  ClassificationReport rep;
  rep.cv_residual = cv_membership_residual(alpha, s);
  if (rep.cv_residual > std::max(tol, 1e-7) * 10.0)
    throw std::invalid_argument("classify_full: tensor is not in C(V) (residual " +
                                std::to_string(rep.cv_residual) + ")");

  const HParallelSplit sp = split_cv_tensor(alpha, s);
  rep.intrinsic = {sp.S, sp.h, sp.P};
  rep.flowchart = flowchart_classify(sp.hp_part, s, tol);
  rep.hparallel_label = rep.flowchart.label;
  rep.marginal_branches = rep.flowchart.marginal_branches;

  const double anorm = cv_norm(alpha, s);
  double sumsq = 0.0;
  std::map<int, double> proj_norm;
  for (int i = 1; i <= 12; ++i) {
    const double cn = component_norm(alpha, ClassId::irreducible(i), s);
    proj_norm[i] = cn;
    rep.component_norms["C" + std::to_string(i)] = cn;
    sumsq += cn * cn;
  }
  rep.parseval_residual =
      anorm > 1e-14 ? std::abs(anorm * anorm - sumsq) / (anorm * anorm) : 0.0;

  // The D1/H-parallel routes are thresholded against their own part's norm,
  // matching the denominators the flowchart route uses.
  const double thr = tol * std::max(anorm, 1e-300);
  const double hp_norm = cv_norm(sp.hp_part, s);
  std::set<int> d1_classes, hp_proj_classes, full;
  for (int i = 1; i <= 4; ++i)
    if (proj_norm[i] > thr) d1_classes.insert(i);
  if (hp_norm >= 1e-14) {
    for (int i = 5; i <= 12; ++i)
      if (proj_norm[i] > tol * hp_norm) hp_proj_classes.insert(i);
  }
  rep.d1_label = d1_classes.empty() ? "C0" : join_classes(d1_classes);
  full = d1_classes;
  for (int i : rep.flowchart.classes) full.insert(i);
  rep.full_label = join_classes(full);

  // Route agreement: flowchart pieces vs orthogonal projections, plus Parseval.
  bool agree = hp_proj_classes == rep.flowchart.classes && rep.parseval_residual <= 1e-6;
  for (int i = 5; i <= 12; ++i) {
    const double a = rep.flowchart.piece_norms.count(i) ? rep.flowchart.piece_norms.at(i) : 0.0;
    if (std::abs(a - proj_norm[i]) > 1e-6 * (1.0 + anorm)) agree = false;
  }
  rep.agreement = agree;
  for (int i = 1; i <= 4; ++i) {
    const double r = anorm > 1e-14 ? proj_norm[i] / anorm : 0.0;
    if (r >= tol / 10.0 && r <= tol * 10.0)
      rep.marginal_branches.push_back("C" + std::to_string(i) + " component");
  }
  return rep;
}

Tensor3 c_lambda_mu_embed(const Tensor3& alpha10, double lambda, double mu, const Structure& s,
                          double tol) {
  const int N = s.N();
  const double res =
      cv_norm(alpha10 - project(alpha10, ClassId::irreducible(10), s), s) /
      (1.0 + cv_norm(alpha10, s));
  if (res > tol)
    throw std::invalid_argument("c_lambda_mu_embed: input is not in C10 (residual " +
                                std::to_string(res) + ")");
  const Vec& xi = s.xi();
  const Vec& eta = s.eta();
  Mat w1 = Mat::Zero(N, N), w2 = Mat::Zero(N, N);
  for (int a = 0; a < N; ++a)
    for (int b = 0; b < N; ++b) {
      double s1 = 0.0, s2 = 0.0;
      for (int c = 0; c < N; ++c) {
        s1 += xi[c] * alpha10(a, b, c);  // alpha(e_a, e_b, xi)
        s2 += xi[c] * alpha10(a, c, b);  // alpha(e_a, xi, e_b)
      }
      w1(a, b) = s1;
      w2(a, b) = s2;
    }
  Tensor3 out(N);
  for (int i = 0; i < N; ++i)
    for (int j = 0; j < N; ++j)
      for (int k = 0; k < N; ++k)
        out(i, j, k) = lambda * (eta[k] * w1(i, j) + eta[j] * w2(i, k)) +
                       mu * eta[i] * w2(j, k);
  return out;
}

std::shared_ptr<const Subspace> c_lambda_mu_subspace(double lambda, double mu,
                                                     const Structure& s) {
  return class_subspace(ClassId::c_lambda_mu(lambda, mu), s);
}

}  // namespace acms
