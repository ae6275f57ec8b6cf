#pragma once

#include "hds/common.hpp"

namespace hds {

/// Inner problem: min ||x_anchor - z||_1 s.t. Hz = b, z in {0,1}^n.
struct StandardFormIP {
  IntMat h;      // r x n, exact integers
  IntVec b;      // length r
  Vec x_anchor;  // in [0,1]^n
  double cost_cap = std::numeric_limits<double>::infinity();
};

struct IPSolution {
  BinVec z;
  double cost = std::numeric_limits<double>::infinity();
  bool feasible = false;
};

/// Total live DP states before a ResourceError is raised.
constexpr std::size_t kStateWatchdog = 50'000'000;

/// Cost ties closer than this are broken lexicographically (z with the
/// earliest 0 wins).
constexpr double kTieTol = 1e-12;

/// Shared dynamic program over suffix sums of the columns of H. One table
/// serves every right-hand side of a window: extracting the optimum for a
/// particular b is a single backward reconstruction.
class WindowSolver {
 public:
  /// b_lo/b_hi bound, per row, the right-hand sides that will be queried.
  WindowSolver(IntMat h, Vec x_anchor, IntVec b_lo, IntVec b_hi,
               double cost_cap = std::numeric_limits<double>::infinity());

  /// Exact optimum for one b inside the declared bounds; among cost ties the
  /// lexicographically smallest z. feasible=false when no solution exists
  /// under the cost cap.
  IPSolution solve(const IntVec& b) const;

 private:
  double suffix_cost(int layer, const IntVec& s) const;

  IntMat h_;
  Vec anchor_;
  IntVec b_lo_, b_hi_;
  double cap_;
  int r_ = 0, n_ = 0;
  // Per layer: value table over the state box [lo, hi] per row, dense,
  // row-major with strides.
  std::vector<std::vector<double>> table_;
  std::vector<IntVec> lo_, hi_;
};

IPSolution closest_binary_solution(const StandardFormIP& ip);

/// Lemma-style sensitivity radius:
/// (ceil(b_gap / h_inf) + phi + 1) (2 k h_inf + 1)^k, exact.
BigInt sensitivity_bound(long long h_inf, int k, double b_gap, int phi);

}  // namespace hds
