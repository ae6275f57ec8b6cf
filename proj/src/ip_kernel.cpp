#include "hds/ip_kernel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace hds {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

}  // namespace

WindowSolver::WindowSolver(IntMat h, Vec x_anchor, IntVec b_lo, IntVec b_hi,
                           double cost_cap)
    : h_(std::move(h)),
      anchor_(std::move(x_anchor)),
      b_lo_(std::move(b_lo)),
      b_hi_(std::move(b_hi)),
      cap_(cost_cap) {
  r_ = int(h_.size());
  n_ = r_ ? int(h_[0].size()) : int(anchor_.size());
  if (int(anchor_.size()) != n_) throw DomainError("anchor dimension mismatch");
  for (double a : anchor_)
    if (!(a >= -1e-12 && a <= 1 + 1e-12)) throw DomainError("anchor outside [0,1]");
  if (int(b_lo_.size()) != r_ || int(b_hi_.size()) != r_)
    throw DomainError("rhs bound dimension mismatch");

  // Attainable suffix / prefix column sums per row.
  std::vector<IntVec> suf_lo(n_ + 1, IntVec(r_, 0)), suf_hi(n_ + 1, IntVec(r_, 0));
  for (int l = n_ - 1; l >= 0; --l)
    for (int i = 0; i < r_; ++i) {
      suf_lo[l][i] = suf_lo[l + 1][i] + std::min(0LL, h_[i][l]);
      suf_hi[l][i] = suf_hi[l + 1][i] + std::max(0LL, h_[i][l]);
    }
  IntVec pre_lo(r_, 0), pre_hi(r_, 0);

  lo_.assign(n_ + 1, IntVec(r_, 0));
  hi_.assign(n_ + 1, IntVec(r_, 0));
  table_.assign(n_ + 1, {});
  std::size_t total_states = 0;
  std::vector<std::size_t> volume(n_ + 1, 0);
  for (int l = 0; l <= n_; ++l) {
    std::size_t vol = 1;
    bool empty = false;
    for (int i = 0; i < r_; ++i) {
      lo_[l][i] = std::max(suf_lo[l][i], b_lo_[i] - pre_hi[i]);
      hi_[l][i] = std::min(suf_hi[l][i], b_hi_[i] - pre_lo[i]);
      if (lo_[l][i] > hi_[l][i]) { empty = true; break; }
      std::size_t w = std::size_t(hi_[l][i] - lo_[l][i] + 1);
      if (vol > kStateWatchdog / w) throw ResourceError("DP state box too large");
      vol *= w;
    }
    volume[l] = empty ? 0 : vol;
    total_states += volume[l];
    if (total_states > kStateWatchdog)
      throw ResourceError("DP live state count exceeded watchdog");
    if (l < n_)
      for (int i = 0; i < r_; ++i) {
        pre_lo[i] += std::min(0LL, h_[i][l]);
        pre_hi[i] += std::max(0LL, h_[i][l]);
      }
  }

  // Backward pass over layers; table_[l][s] = cheapest completion of
  // columns l..n-1 whose suffix sums to s.
  for (int l = n_; l >= 0; --l) {
    table_[l].assign(volume[l], kInf);
    if (volume[l] == 0) continue;
    if (l == n_) {
      bool in_box = true;
      std::size_t idx = 0;
      for (int i = 0; i < r_; ++i) {
        if (lo_[n_][i] > 0 || hi_[n_][i] < 0) { in_box = false; break; }
        idx = idx * std::size_t(hi_[n_][i] - lo_[n_][i] + 1) + std::size_t(-lo_[n_][i]);
      }
      if (in_box) table_[n_][idx] = 0;
      continue;
    }
    const double c0 = anchor_[l], c1 = 1.0 - anchor_[l];
    IntVec s = lo_[l];
    for (std::size_t idx = 0; idx < volume[l]; ++idx) {
      double best = c0 + suffix_cost(l + 1, s);
      IntVec s1(r_);
      for (int i = 0; i < r_; ++i) s1[i] = s[i] - h_[i][l];
      best = std::min(best, c1 + suffix_cost(l + 1, s1));
      table_[l][idx] = best > cap_ + 1e-9 ? kInf : best;
      for (int i = r_ - 1; i >= 0; --i) {  // odometer over the state box
        if (s[i] < hi_[l][i]) { ++s[i]; break; }
        s[i] = lo_[l][i];
      }
    }
  }
}

double WindowSolver::suffix_cost(int layer, const IntVec& s) const {
  if (table_[layer].empty()) return kInf;
  std::size_t idx = 0;
  for (int i = 0; i < r_; ++i) {
    if (s[i] < lo_[layer][i] || s[i] > hi_[layer][i]) return kInf;
    idx = idx * std::size_t(hi_[layer][i] - lo_[layer][i] + 1) +
          std::size_t(s[i] - lo_[layer][i]);
  }
  return table_[layer][idx];
}

IPSolution WindowSolver::solve(const IntVec& b) const {
  if (int(b.size()) != r_) throw DomainError("rhs dimension mismatch");
  for (int i = 0; i < r_; ++i)
    if (b[i] < b_lo_[i] || b[i] > b_hi_[i])
      throw DomainError("rhs outside the declared window bounds");

  IPSolution sol;
  if (!(suffix_cost(0, b) < kInf)) return sol;  // infeasible or over the cap

  sol.z.assign(n_, 0);
  IntVec s = b;
  for (int l = 0; l < n_; ++l) {
    double c0 = anchor_[l] + suffix_cost(l + 1, s);
    IntVec s1(r_);
    for (int i = 0; i < r_; ++i) s1[i] = s[i] - h_[i][l];
    double c1 = (1.0 - anchor_[l]) + suffix_cost(l + 1, s1);
    if (c0 <= c1 + kTieTol) {
      sol.z[l] = 0;
    } else {
      sol.z[l] = 1;
      s = s1;
    }
  }
  for (int i = 0; i < r_; ++i)
    if (s[i] != 0) throw ContractError("DP reconstruction drifted off the rhs");

  sol.cost = 0;
  for (int l = 0; l < n_; ++l)
    sol.cost += sol.z[l] ? 1.0 - anchor_[l] : anchor_[l];
  sol.feasible = true;
  return sol;
}

IPSolution closest_binary_solution(const StandardFormIP& ip) {
  WindowSolver solver(ip.h, ip.x_anchor, ip.b, ip.b, ip.cost_cap);
  return solver.solve(ip.b);
}

BigInt sensitivity_bound(long long h_inf, int k, double b_gap, int phi) {
  if (h_inf < 1 || k < 1) throw DomainError("need h_inf >= 1 and k >= 1");
  if (b_gap < 0 || phi < 0) throw DomainError("b_gap and phi must be nonnegative");
  BigInt lead = ceil_rational(Rational(b_gap) / h_inf) + phi + 1;
  BigInt base = 2 * BigInt(k) * h_inf + 1;
  BigInt acc = 1;
  for (int i = 0; i < k; ++i) acc *= base;
  return lead * acc;
}

}  // namespace hds
