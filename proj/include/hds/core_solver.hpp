#pragma once

#include <optional>

#include "hds/continuous.hpp"
#include "hds/instance.hpp"
#include "hds/ip_kernel.hpp"

namespace hds {

/// Accumulated linearly independent integer gradients, stacked as rows of H.
struct GradientSet {
  IntMat gamma;
  int rank = 0;  // always equals |gamma|
};

/// Integer box {b : ||b - b_star||_inf <= rho}.
struct RhsWindow {
  Vec b_star;
  double rho = 0;  // ||H||_inf * delta
};

struct SolveReport {
  BinVec z_opt;
  double f_opt = 0;
  long long ip_solves = 0;
  std::vector<IntMat> gamma_history;  // snapshot after each outer round
  int outer_rounds = 0;
  FixReport fixed_vars;
  bool budget_exhausted = false;
  std::string mode;  // "hidden" or "known"
  double delta_used = 0;
  bool h_norm_ok = true;  // ||row||_inf <= 2 delta L_f at every insertion
};

struct SolveOptions {
  double delta = 0;
  std::optional<long long> budget;
  int workers = 0;  // 0 = library default
};

/// Exact rank comparison via fraction-free elimination; true iff the
/// candidate increases the rank of gamma.
bool integer_rank_check(const GradientSet& gamma, const IntVec& candidate);

/// Lattice points of the window, lexicographic across axes with values on
/// each axis ordered nearest-to-b_star first.
std::vector<IntVec> enumerate_rhs(const RhsWindow& window);

/// Proximity-driven enumeration with oracle access only: variable fixing,
/// gradient-set growth, rhs window enumeration, closest-point IPs.
SolveReport solve_hidden(const OracleHandle& oracle, const FractionalMinimum& x_star,
                         const SolveOptions& opts);

/// Known-W accelerated mode: single pass with H = W, no gradient growth.
SolveReport solve_known_w(const HiddenInstance& inst, const OracleHandle& oracle,
                          const FractionalMinimum& x_star, const SolveOptions& opts);

}  // namespace hds
