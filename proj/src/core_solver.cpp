#include "hds/core_solver.hpp"

#include <algorithm>
#include <cmath>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace hds {
namespace {

int rank_of(const IntMat& rows) {
  if (rows.empty()) return 0;
  std::vector<std::vector<BigInt>> a(rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i)
    a[i].assign(rows[i].begin(), rows[i].end());
  const int m = int(a.size()), n = int(a[0].size());

  // Bareiss fraction-free elimination; prev divides exactly at every step.
  BigInt prev = 1;
  int rank = 0;
  for (int col = 0; col < n && rank < m; ++col) {
    int p = -1;
    for (int i = rank; i < m; ++i)
      if (a[i][col] != 0) { p = i; break; }
    if (p < 0) continue;
    std::swap(a[rank], a[p]);
    for (int i = rank + 1; i < m; ++i) {
      for (int j = col + 1; j < n; ++j)
        a[i][j] = (a[rank][col] * a[i][j] - a[i][col] * a[rank][j]) / prev;
      a[i][col] = 0;
    }
    prev = a[rank][col];
    ++rank;
  }
  return rank;
}

BinVec round_half_down(const Vec& x) {
  BinVec z(x.size());
  for (std::size_t j = 0; j < x.size(); ++j) z[j] = x[j] > 0.5 ? 1 : 0;
  return z;
}

Vec to_vec(const BinVec& z) { return Vec(z.begin(), z.end()); }

struct BResult {
  bool usable = false;
  BinVec z;
  double f = 0;
  IntVec grad;
};

// One outer pass over the rhs window of H. Distinct b are independent and
// solved in parallel; gradients and incumbent updates are merged afterwards
// in lexicographic b-order so the run is reproducible at any worker count.
// Returns false when the budget ran out mid-window.
bool sweep_window(const OracleHandle& oracle, const IntMat& h, const Vec& x_star,
                  double delta, const std::optional<long long>& budget,
                  SolveReport& rep, BinVec& z_hat, double& f_hat,
                  std::vector<BResult>& out) {
  const long long h_norm = linf_norm(h);
  RhsWindow window{Vec(h.size()), double(h_norm) * delta};
  for (std::size_t i = 0; i < h.size(); ++i) {
    double s = 0;
    for (int j = 0; j < int(x_star.size()); ++j) s += double(h[i][j]) * x_star[j];
    window.b_star[i] = s;
  }
  std::vector<IntVec> bs = enumerate_rhs(window);
  if (bs.empty()) {
    out.clear();
    return true;
  }

  IntVec b_lo(h.size()), b_hi(h.size());
  for (std::size_t i = 0; i < h.size(); ++i) {
    b_lo[i] = b_hi[i] = bs[0][i];
    for (const auto& b : bs) {
      b_lo[i] = std::min(b_lo[i], b[i]);
      b_hi[i] = std::max(b_hi[i], b[i]);
    }
  }
  const double cap = delta + 1e-9 * double(x_star.size() + 1);
  WindowSolver solver(h, x_star, b_lo, b_hi, cap);

  long long limit = (long long)bs.size();
  bool exhausted = false;
  if (budget && *budget - rep.ip_solves < limit) {
    limit = std::max<long long>(0, *budget - rep.ip_solves);
    exhausted = true;
  }

  out.assign(std::size_t(limit), {});
  std::exception_ptr worker_error;
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic, 16)
#endif
  for (long long i = 0; i < limit; ++i) {
    try {
      IPSolution sol = solver.solve(bs[std::size_t(i)]);
      if (!sol.feasible || sol.cost > cap) continue;
      BResult& r = out[std::size_t(i)];
      r.z = sol.z;
      Vec zv = to_vec(sol.z);
      r.f = oracle.value(zv);
      r.grad = snap_to_integers(oracle.gradient(zv));
      r.usable = true;
    } catch (...) {
#ifdef _OPENMP
#pragma omp critical
#endif
      if (!worker_error) worker_error = std::current_exception();
    }
  }
  if (worker_error) std::rethrow_exception(worker_error);
  rep.ip_solves += limit;

  for (const BResult& r : out) {  // deterministic merge, lexicographic b-order
    if (!r.usable) continue;
    if (r.f < f_hat) {
      f_hat = r.f;
      z_hat = r.z;
    }
  }
  return !exhausted;
}

SolveReport core_hidden(const OracleHandle& oracle, const Vec& x_star,
                        const SolveOptions& opts) {
  SolveReport rep;
  rep.mode = "hidden";
  rep.delta_used = opts.delta;
  const double lf = induced_lipschitz(oracle.revealed);
  const double h_cap = 2.0 * opts.delta * lf + 1e-9;

  BinVec z_hat = round_half_down(x_star);
  double f_hat = oracle.value(to_vec(z_hat));
  IntVec g0 = snap_to_integers(oracle.gradient(to_vec(z_hat)));
  if (std::all_of(g0.begin(), g0.end(), [](long long v) { return v == 0; })) {
    rep.z_opt = z_hat;
    rep.f_opt = f_hat;
    return rep;
  }
  if (double(linf_norm(IntMat{g0})) > h_cap) {
    rep.h_norm_ok = false;
    throw ContractError("initial gradient exceeds the 2*delta*L_f bound");
  }

  GradientSet gamma{{g0}, 1};
  for (int round = 0; round < int(oracle.revealed.m_bar) + 1; ++round) {
    ++rep.outer_rounds;
    const int r_before = int(gamma.gamma.size());

    std::vector<BResult> results;
    bool ok = sweep_window(oracle, gamma.gamma, x_star, opts.delta, opts.budget, rep,
                           z_hat, f_hat, results);
    for (const BResult& res : results) {
      if (!res.usable) continue;
      bool zero = std::all_of(res.grad.begin(), res.grad.end(),
                              [](long long v) { return v == 0; });
      if (zero || !integer_rank_check(gamma, res.grad)) continue;
      if (double(linf_norm(IntMat{res.grad})) > h_cap) {
        rep.h_norm_ok = false;
        throw ContractError("gradient insertion violates the 2*delta*L_f bound");
      }
      if ((long long)gamma.gamma.size() >= oracle.revealed.m_bar)
        throw ContractError("more than m_bar independent gradients observed");
      gamma.gamma.push_back(res.grad);
      gamma.rank = int(gamma.gamma.size());
    }
    rep.gamma_history.push_back(gamma.gamma);
    if (!ok) {
      rep.budget_exhausted = true;
      break;
    }
    if (int(gamma.gamma.size()) == r_before) break;
  }

  rep.z_opt = z_hat;
  rep.f_opt = f_hat;
  return rep;
}

}  // namespace

bool integer_rank_check(const GradientSet& gamma, const IntVec& candidate) {
  IntMat stacked = gamma.gamma;
  stacked.push_back(candidate);
  return rank_of(stacked) == int(gamma.gamma.size()) + 1;
}

std::vector<IntVec> enumerate_rhs(const RhsWindow& window) {
  if (window.rho < 0) throw DomainError("window radius must be nonnegative");
  const int r = int(window.b_star.size());
  std::vector<IntVec> axis(r);
  for (int i = 0; i < r; ++i) {
    long long lo = (long long)std::ceil(window.b_star[i] - window.rho - 1e-9);
    long long hi = (long long)std::floor(window.b_star[i] + window.rho + 1e-9);
    for (long long v = lo; v <= hi; ++v) axis[i].push_back(v);
    std::stable_sort(axis[i].begin(), axis[i].end(),
                     [&](long long a, long long b) {
                       double da = std::fabs(double(a) - window.b_star[i]);
                       double db = std::fabs(double(b) - window.b_star[i]);
                       return da != db ? da < db : a < b;
                     });
    if (axis[i].empty()) return {};
  }
  std::vector<IntVec> out;
  IntVec idx(r, 0), b(r);
  for (;;) {
    for (int i = 0; i < r; ++i) b[i] = axis[i][std::size_t(idx[i])];
    out.push_back(b);
    int i = r - 1;
    for (; i >= 0; --i) {
      if (++idx[i] < (long long)axis[i].size()) break;
      idx[i] = 0;
    }
    if (i < 0) break;
  }
  return out;
}

SolveReport solve_hidden(const OracleHandle& oracle, const FractionalMinimum& x_star,
                         const SolveOptions& opts) {
  if (opts.delta < 0) throw DomainError("delta must be nonnegative");
#ifdef _OPENMP
  if (opts.workers > 0) omp_set_num_threads(opts.workers);
#endif
  const double lf = induced_lipschitz(oracle.revealed);
  FixReport fix = fix_by_large_gradients(oracle, x_star, opts.delta, lf);

  if (fix.forced_zero.empty() && fix.forced_one.empty()) {
    SolveReport rep = core_hidden(oracle, x_star.x_star, opts);
    rep.fixed_vars = fix;
    return rep;
  }

  // Fold the forced coordinates away: the residual oracle is f with the
  // fixed part embedded, a translate of g on the free coordinates.
  const int n = oracle.n;
  std::vector<int> role(n, -1);  // -1 free, else forced value
  for (int k : fix.forced_zero) role[k] = 0;
  for (int k : fix.forced_one) role[k] = 1;
  std::vector<int> free_idx;
  for (int j = 0; j < n; ++j)
    if (role[j] < 0) free_idx.push_back(j);

  auto embed = [role, n, free_idx](const Vec& sub) {
    Vec full(n);
    for (int j = 0; j < n; ++j) full[j] = role[j] < 0 ? 0.0 : double(role[j]);
    for (std::size_t i = 0; i < free_idx.size(); ++i) full[free_idx[i]] = sub[i];
    return full;
  };
  OracleHandle sub;
  sub.n = int(free_idx.size());
  sub.revealed = oracle.revealed;
  sub.value = [&oracle, embed](const Vec& x) { return oracle.value(embed(x)); };
  sub.gradient = [&oracle, embed, free_idx](const Vec& x) {
    Vec g = oracle.gradient(embed(x));
    Vec out(free_idx.size());
    for (std::size_t i = 0; i < free_idx.size(); ++i) out[i] = g[free_idx[i]];
    return out;
  };

  Vec sub_x(free_idx.size());
  for (std::size_t i = 0; i < free_idx.size(); ++i) sub_x[i] = x_star.x_star[free_idx[i]];

  SolveReport rep = core_hidden(sub, sub_x, opts);
  rep.fixed_vars = fix;
  BinVec full(n);
  for (int j = 0; j < n; ++j) full[j] = role[j] > 0 ? 1 : 0;
  for (std::size_t i = 0; i < free_idx.size(); ++i) full[free_idx[i]] = rep.z_opt[i];
  rep.z_opt = full;
  rep.f_opt = oracle.value(to_vec(full));
  return rep;
}

SolveReport solve_known_w(const HiddenInstance& inst, const OracleHandle& oracle,
                          const FractionalMinimum& x_star, const SolveOptions& opts) {
  if (opts.delta < 0) throw DomainError("delta must be nonnegative");
#ifdef _OPENMP
  if (opts.workers > 0) omp_set_num_threads(opts.workers);
#endif
  SolveReport rep;
  rep.mode = "known";
  rep.delta_used = opts.delta;

  BinVec z_hat = round_half_down(x_star.x_star);
  double f_hat = oracle.value(to_vec(z_hat));

  std::vector<BResult> results;
  bool ok = sweep_window(oracle, inst.w, x_star.x_star, opts.delta, opts.budget, rep,
                         z_hat, f_hat, results);
  rep.budget_exhausted = !ok;
  rep.outer_rounds = 1;
  rep.z_opt = z_hat;
  rep.f_opt = f_hat;
  return rep;
}

}  // namespace hds
