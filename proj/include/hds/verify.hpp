#pragma once

#include <iosfwd>

#include "hds/instance.hpp"

namespace hds {

struct BruteForceResult {
  double f_min = 0;
  std::vector<BinVec> minimizers;  // every binary point attaining f_min
  double proximity_l1 = 0;         // min over minimizers of ||x_star - z||_1
};

constexpr int kBruteForceCap = 25;

/// Exhaustive enumeration of {0,1}^n with exact integer objectives,
/// Gray-code order with incremental Wz updates. Hard-capped at n = 25.
/// Dispatches to the OpenMP kernel for larger n.
BruteForceResult brute_force_min(const HiddenInstance& inst, const Vec* x_star = nullptr);

/// Serial reference kept for testing and benchmarking.
BruteForceResult brute_force_min_serial(const HiddenInstance& inst,
                                        const Vec* x_star = nullptr);

/// Prefix-partitioned OpenMP kernel; deterministic merge order.
BruteForceResult brute_force_min_parallel(const HiddenInstance& inst,
                                          const Vec* x_star = nullptr);

struct ProximityRow {
  std::uint64_t seed = 0;
  int n = 0, m = 0;
  double measured = 0;  // ||x_star - z_star||_1, min over the minimizer set
  double bound = 0;     // applicable proximity bound
  double ratio = 0;
};

/// Generates `trials` random instances from the named family, reduces each
/// to a few-fractional continuous minimum, measures proximity against the
/// brute-force minimizer set, and pairs it with the closed-form bound.
std::vector<ProximityRow> measure_proximity(const std::string& family, int m, int n,
                                            long long delta_inf, int trials,
                                            std::uint64_t seed);

void write_proximity_csv(std::ostream& os, const std::vector<ProximityRow>& rows);

}  // namespace hds
