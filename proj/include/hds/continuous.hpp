#pragma once

#include "hds/instance.hpp"

namespace hds {

/// Face of [0,1]^n: a partition of the coordinates into free ones and ones
/// pinned to 0 or 1.
struct Face {
  enum State : std::int8_t { kFree = 0, kZero = 1, kOne = 2 };
  std::vector<std::int8_t> state;

  explicit Face(int n = 0) : state(n, kFree) {}
  int dim() const {
    int d = 0;
    for (auto s : state) d += (s == kFree);
    return d;
  }
};

/// Continuous constrained minimizer with few fractional entries.
struct FractionalMinimum {
  Vec x_star;
  double f_min = 0;
  std::vector<int> fractional_indices;  // phi = size
  int subroutine_calls = 0;             // minimize_over_face invocations
};

struct FixReport {
  std::vector<int> forced_zero;
  std::vector<int> forced_one;
  double residual_gradient_bound = 0;  // max{(delta-1) L, 0} used as threshold
};

constexpr double kFractionalTol = 1e-6;

/// Projected gradient descent over the free coordinates of the face, fixed
/// coordinates held at their bounds. Step starts at 1/L_f and halves on a
/// value increase. Stops when the gradient mapping drops below a
/// tol-derived threshold; throws ConvergenceError (carrying the best
/// iterate) when the iteration budget runs out.
std::pair<Vec, double> minimize_over_face(const OracleHandle& oracle, const Face& face,
                                          double tol, const Vec* warm_start = nullptr,
                                          long long max_iters = 1'000'000);

/// The n-round face-fixing loop: at most 2n + 1 calls to
/// minimize_over_face, output has at most m_bar fractional entries.
/// tol <= 0 selects the default 1e-7 (1 + |f_min|).
FractionalMinimum reduce_to_few_fractionals(const OracleHandle& oracle, double tol = 0);

/// Known-W variant: continuous minimum once over the full cube, then pivot
/// fractional coordinates along exact rational kernel directions of the
/// fractional column submatrix until at most m remain.
FractionalMinimum reduce_known_w(const HiddenInstance& inst, const OracleHandle& oracle,
                                 double tol = 0);

/// Large-gradient variable fixing: coordinates whose gradient at x_star
/// exceeds max{(delta - 1) lipschitz, 0} in absolute value are forced.
/// lipschitz is the constant valid for grad f in the (inf,1)-norm sense.
FixReport fix_by_large_gradients(const OracleHandle& oracle,
                                 const FractionalMinimum& x_star, double delta,
                                 double lipschitz);

std::vector<int> fractional_indices_of(const Vec& x);

}  // namespace hds
