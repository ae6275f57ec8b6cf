#include "hds/continuous.hpp"

#include <algorithm>
#include <cmath>

namespace hds {
namespace {

Vec face_clamp(const Face& face, Vec x) {
  for (std::size_t j = 0; j < x.size(); ++j) {
    switch (face.state[j]) {
      case Face::kZero: x[j] = 0; break;
      case Face::kOne: x[j] = 1; break;
      default: x[j] = std::clamp(x[j], 0.0, 1.0);
    }
  }
  return x;
}

double default_tol(double f_ref) { return 1e-7 * (1.0 + std::fabs(f_ref)); }

// Exact rational kernel vector of the m x |cols| column submatrix, or empty
// when the columns are linearly independent.
std::vector<Rational> kernel_vector(const IntMat& w, const std::vector<int>& cols) {
  const int m = int(w.size()), c = int(cols.size());
  std::vector<std::vector<Rational>> a(m, std::vector<Rational>(c));
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < c; ++j) a[i][j] = w[i][cols[j]];

  std::vector<int> pivot_col;
  int row = 0;
  for (int col = 0; col < c && row < m; ++col) {
    int p = -1;
    for (int i = row; i < m; ++i)
      if (a[i][col] != 0) { p = i; break; }
    if (p < 0) continue;
    std::swap(a[row], a[p]);
    Rational inv = a[row][col];
    for (int j = col; j < c; ++j) a[row][j] /= inv;
    for (int i = 0; i < m; ++i) {
      if (i == row || a[i][col] == 0) continue;
      Rational fac = a[i][col];
      for (int j = col; j < c; ++j) a[i][j] -= fac * a[row][j];
    }
    pivot_col.push_back(col);
    ++row;
  }
  if (int(pivot_col.size()) == c) return {};  // full column rank

  // Pick the first non-pivot column as the free variable.
  std::vector<bool> is_pivot(c, false);
  for (int pc : pivot_col) is_pivot[pc] = true;
  int free_col = 0;
  while (is_pivot[free_col]) ++free_col;

  std::vector<Rational> d(c, 0);
  d[free_col] = 1;
  for (int i = 0; i < int(pivot_col.size()); ++i) d[pivot_col[i]] = -a[i][free_col];
  return d;
}

}  // namespace

std::vector<int> fractional_indices_of(const Vec& x) {
  std::vector<int> out;
  for (int j = 0; j < int(x.size()); ++j)
    if (x[j] > kFractionalTol && x[j] < 1 - kFractionalTol) out.push_back(j);
  return out;
}

std::pair<Vec, double> minimize_over_face(const OracleHandle& oracle, const Face& face,
                                          double tol, const Vec* warm_start,
                                          long long max_iters) {
  if (int(face.state.size()) != oracle.n) throw DomainError("face dimension mismatch");
  if (tol <= 0) tol = 1e-9;
  const double lf = std::max(induced_lipschitz(oracle.revealed), 1e-12);
  const int n = oracle.n;

  Vec x = warm_start ? face_clamp(face, *warm_start) : face_clamp(face, Vec(n, 0.5));
  if (face.dim() == 0) return {x, oracle.value(x)};

  double fx = oracle.value(x);
  double step = 1.0 / lf;
  int stall = 0;
  for (long long it = 0; it < max_iters; ++it) {
    Vec g = oracle.gradient(x);

    // Gradient mapping at the reference step 1/L_f.
    double res = 0;
    for (int j = 0; j < n; ++j) {
      if (face.state[j] != Face::kFree) continue;
      double moved = std::clamp(x[j] - g[j] / lf, 0.0, 1.0);
      res = std::max(res, std::fabs(moved - x[j]));
    }
    if (res * lf <= std::min(1e-8 * lf, 1e-2 * tol * lf) + 1e-12) return {x, fx};

    Vec cand(n);
    double fc = 0;
    bool accepted = false;
    step = std::min(step * 2, 1.0 / lf);
    for (int halved = 0; halved < 60; ++halved) {
      for (int j = 0; j < n; ++j)
        cand[j] = face.state[j] == Face::kFree
                      ? std::clamp(x[j] - step * g[j], 0.0, 1.0)
                      : x[j];
      fc = oracle.value(cand);
      // Strict decrease required: an equality accept can cycle between the
      // two mirror points of a quadratic without progress.
      if (fc < fx) { accepted = true; break; }
      step *= 0.5;
    }
    if (!accepted) return {x, fx};  // step underflow: numerically stationary
    stall = (fx - fc <= 1e-16 * (1 + std::fabs(fx))) ? stall + 1 : 0;
    x.swap(cand);
    fx = fc;
    if (stall >= 8) return {x, fx};
  }
  throw ConvergenceError("projected gradient: iteration budget exceeded", x, fx);
}

FractionalMinimum reduce_to_few_fractionals(const OracleHandle& oracle, double tol) {
  const int n = oracle.n;
  Face face(n);
  FractionalMinimum out;

  auto [x, f_min] = minimize_over_face(oracle, face, tol);
  out.subroutine_calls = 1;
  if (tol <= 0) tol = default_tol(f_min);

  for (int k = 0; k < n; ++k) {
    // The current minimizer already lies on one of the two sub-faces: fix
    // for free, no extra subroutine calls.
    if (x[k] <= 1e-9) { face.state[k] = Face::kZero; x[k] = 0; continue; }
    if (x[k] >= 1 - 1e-9) { face.state[k] = Face::kOne; x[k] = 1; continue; }

    Face f0 = face, f1 = face;
    f0.state[k] = Face::kZero;
    f1.state[k] = Face::kOne;
    auto [x0, v0] = minimize_over_face(oracle, f0, tol, &x);
    auto [x1, v1] = minimize_over_face(oracle, f1, tol, &x);
    out.subroutine_calls += 2;
    if (v0 <= f_min + tol) {
      face = f0;
      x = x0;
    } else if (v1 <= f_min + tol) {
      face = f1;
      x = x1;
    }
  }

  for (int j = 0; j < n; ++j) {  // snap near-integral coordinates
    if (x[j] <= kFractionalTol) x[j] = 0;
    else if (x[j] >= 1 - kFractionalTol) x[j] = 1;
  }
  out.x_star = x;
  out.f_min = oracle.value(x);
  out.fractional_indices = fractional_indices_of(x);
  if ((long long)out.fractional_indices.size() > oracle.revealed.m_bar)
    throw ContractError("reduction left more than m_bar fractional entries");
  return out;
}

FractionalMinimum reduce_known_w(const HiddenInstance& inst, const OracleHandle& oracle,
                                 double tol) {
  Face face(inst.n);
  auto [xd, f0] = minimize_over_face(oracle, face, tol);
  (void)f0;

  std::vector<Rational> x(inst.n);
  for (int j = 0; j < inst.n; ++j) x[j] = Rational(xd[j]);

  for (int round = 0; round <= inst.n; ++round) {
    std::vector<int> frac;
    for (int j = 0; j < inst.n; ++j)
      if (x[j] != 0 && x[j] != 1) frac.push_back(j);
    if (int(frac.size()) <= inst.m) break;
    auto d = kernel_vector(inst.w, frac);
    if (d.empty()) break;  // x already a vertex of {Wx = Wx_hat} over its face

    // Walk along the kernel direction until a coordinate hits a bound; W x
    // and hence f stay exactly constant.
    Rational t_max = -1;
    for (int j = 0; j < int(frac.size()); ++j) {
      if (d[j] == 0) continue;
      Rational room = d[j] > 0 ? Rational((1 - x[frac[j]]) / d[j])
                               : Rational(x[frac[j]] / -d[j]);
      if (t_max < 0 || room < t_max) t_max = room;
    }
    for (int j = 0; j < int(frac.size()); ++j) x[frac[j]] += t_max * d[j];
  }

  FractionalMinimum out;
  out.x_star.resize(inst.n);
  for (int j = 0; j < inst.n; ++j) out.x_star[j] = to_double(x[j]);
  out.f_min = oracle.value(out.x_star);
  out.fractional_indices = fractional_indices_of(out.x_star);
  out.subroutine_calls = 1;
  if ((long long)out.fractional_indices.size() > oracle.revealed.m_bar)
    throw ContractError("kernel pivoting left more than m_bar fractional entries");
  return out;
}

FixReport fix_by_large_gradients(const OracleHandle& oracle,
                                 const FractionalMinimum& x_star, double delta,
                                 double lipschitz) {
  if (delta < 0) throw DomainError("delta must be nonnegative");
  Vec g = oracle.gradient(x_star.x_star);
  FixReport rep;
  rep.residual_gradient_bound = std::max((delta - 1) * lipschitz, 0.0);
  // Noise guard: never force on gradient entries below the first-order
  // tolerance used elsewhere.
  const double thr = std::max(rep.residual_gradient_bound, 1e-6 * std::max(lipschitz, 1.0));
  for (int k = 0; k < oracle.n; ++k) {
    if (g[k] > thr) {
      if (x_star.x_star[k] > kFractionalTol)
        throw ContractError("positive gradient at coordinate not at 0");
      rep.forced_zero.push_back(k);
    } else if (g[k] < -thr) {
      if (x_star.x_star[k] < 1 - kFractionalTol)
        throw ContractError("negative gradient at coordinate not at 1");
      rep.forced_one.push_back(k);
    }
  }
  return rep;
}

}  // namespace hds
