#include "hds/verify.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <ostream>

#include "hds/bounds.hpp"
#include "hds/continuous.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace hds {
namespace {

constexpr std::size_t kMinimizerStoreCap = std::size_t(1) << 20;

long long objective(const HiddenInstance& inst, const IntVec& v) {
  long long s = 0;
  for (int i = 0; i < inst.m; ++i) {
    long long d = v[i] - inst.spec.targets[i];
    s += inst.spec.weights[i] * d * d;
  }
  return s;
}

struct Accum {
  long long best = 0;
  bool any = false;
  std::vector<BinVec> minimizers;
  double prox = std::numeric_limits<double>::infinity();

  void offer(long long val, const BinVec& z, const Vec* x_star) {
    if (!any || val < best) {
      any = true;
      best = val;
      minimizers.clear();
      prox = std::numeric_limits<double>::infinity();
    } else if (val > best) {
      return;
    }
    if (minimizers.size() < kMinimizerStoreCap) minimizers.push_back(z);
    if (x_star) prox = std::min(prox, l1_dist(*x_star, z));
  }
};

// Gray-code walk over the suffix coordinates [0, bits), starting from the
// state in acc's z/v. One column add or subtract per step.
void gray_walk(const HiddenInstance& inst, int bits, BinVec& z, IntVec& v,
               const Vec* x_star, Accum& acc) {
  acc.offer(objective(inst, v), z, x_star);
  const std::uint64_t count = std::uint64_t(1) << bits;
  for (std::uint64_t k = 1; k < count; ++k) {
    int j = std::countr_zero(k);
    if (z[j]) {
      z[j] = 0;
      for (int i = 0; i < inst.m; ++i) v[i] -= inst.w[i][j];
    } else {
      z[j] = 1;
      for (int i = 0; i < inst.m; ++i) v[i] += inst.w[i][j];
    }
    acc.offer(objective(inst, v), z, x_star);
  }
}

BruteForceResult finish(const Accum& acc, const Vec* x_star) {
  BruteForceResult res;
  res.f_min = double(acc.best);
  res.minimizers = acc.minimizers;
  res.proximity_l1 = x_star ? acc.prox : 0.0;
  return res;
}

void check_cap(const HiddenInstance& inst) {
  if (inst.n > kBruteForceCap)
    throw ResourceError("brute force capped at n = " + std::to_string(kBruteForceCap));
}

}  // namespace

BruteForceResult brute_force_min_serial(const HiddenInstance& inst, const Vec* x_star) {
  check_cap(inst);
  BinVec z(inst.n, 0);
  IntVec v(inst.m, 0);
  Accum acc;
  gray_walk(inst, inst.n, z, v, x_star, acc);
  return finish(acc, x_star);
}

BruteForceResult brute_force_min_parallel(const HiddenInstance& inst, const Vec* x_star) {
  check_cap(inst);
  int prefix_bits = std::min(inst.n, 6);
  const int suffix_bits = inst.n - prefix_bits;
  const int parts = 1 << prefix_bits;

  std::vector<Accum> partial(parts);
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic)
#endif
  for (int p = 0; p < parts; ++p) {
    BinVec z(inst.n, 0);
    IntVec v(inst.m, 0);
    for (int b = 0; b < prefix_bits; ++b) {
      if ((p >> b) & 1) {
        int j = suffix_bits + b;
        z[j] = 1;
        for (int i = 0; i < inst.m; ++i) v[i] += inst.w[i][j];
      }
    }
    gray_walk(inst, suffix_bits, z, v, x_star, partial[p]);
  }

  Accum merged;  // merge in partition order: deterministic
  for (int p = 0; p < parts; ++p) {
    const Accum& a = partial[p];
    if (!merged.any || a.best < merged.best) {
      merged.any = true;
      merged.best = a.best;
      merged.minimizers.clear();
      merged.prox = std::numeric_limits<double>::infinity();
    } else if (a.best > merged.best) {
      continue;
    }
    for (const auto& z : a.minimizers)
      if (merged.minimizers.size() < kMinimizerStoreCap) merged.minimizers.push_back(z);
    merged.prox = std::min(merged.prox, a.prox);
  }
  return finish(merged, x_star);
}

BruteForceResult brute_force_min(const HiddenInstance& inst, const Vec* x_star) {
  return inst.n >= 18 ? brute_force_min_parallel(inst, x_star)
                      : brute_force_min_serial(inst, x_star);
}

std::vector<ProximityRow> measure_proximity(const std::string& family, int m, int n,
                                            long long delta_inf, int trials,
                                            std::uint64_t seed) {
  if (n > 20) throw ResourceError("proximity measurement capped at n = 20");
  std::vector<ProximityRow> rows;
  for (int t = 0; t < trials; ++t) {
    std::uint64_t s = seed + std::uint64_t(t);
    HiddenInstance inst = make_random_instance(family, m, n, delta_inf, s);
    OracleHandle oracle = make_oracle(inst);
    FractionalMinimum fm = reduce_to_few_fractionals(oracle);
    BruteForceResult bf = brute_force_min(inst, &fm.x_star);

    Rational bound = family == "sharp"
                         ? delta_sharp(m, delta_inf, 2,
                                       {sqrt_rational_upper(m), Rational(1, 2)})
                         : delta_separable(m, delta_inf);
    ProximityRow row;
    row.seed = s;
    row.n = n;
    row.m = m;
    row.measured = bf.proximity_l1;
    row.bound = to_double(bound);
    row.ratio = row.bound > 0 ? row.measured / row.bound : 0;
    rows.push_back(row);
  }
  return rows;
}

void write_proximity_csv(std::ostream& os, const std::vector<ProximityRow>& rows) {
  os << "seed,n,m,measured,bound,ratio\n";
  for (const auto& r : rows)
    os << r.seed << ',' << r.n << ',' << r.m << ',' << r.measured << ',' << r.bound
       << ',' << r.ratio << '\n';
}

}  // namespace hds
