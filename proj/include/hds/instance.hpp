#pragma once

#include <functional>
#include <optional>
#include <string>

#include "hds/common.hpp"

namespace hds {

enum class FunctionKind { SeparableQuadratic, Knapsack, SharpQuadratic };

/// Inner convex function g. All built-ins are quadratics with integer data,
/// so values and gradients are exact rationals and gradients are integral at
/// integral arguments.
///   SeparableQuadratic / SharpQuadratic:  g(v) = sum_i c_i (v_i - t_i)^2
///   Knapsack (m = 1):                     g(y) = (T - y)^2
struct FunctionSpec {
  FunctionKind kind;
  IntVec targets;  // t (length m); for Knapsack, {T}
  IntVec weights;  // c (length m); all 1 for Knapsack and SharpQuadratic
};

struct HiddenInstance {
  int n = 0;
  int m = 0;
  IntMat w;  // m x n, |w_ij| <= delta_inf
  FunctionSpec spec;
};

/// Constants the oracle reveals to the solver.
struct Revealed {
  long long m_bar = 0;
  long long delta_inf = 0;
  double lipschitz_L = 0;  // L of grad g, (inf,1)-norm sense
};

/// Black-box access to f(x) = g(Wx). W itself stays behind the closures.
struct OracleHandle {
  int n = 0;
  Revealed revealed;
  std::function<double(const Vec&)> value;
  std::function<Vec(const Vec&)> gradient;
};

/// Lipschitz constant of grad f induced by L, m_bar, delta_inf:
/// ||grad f(u) - grad f(v)||_inf <= L (m_bar delta_inf)^2 ||u - v||_1.
double induced_lipschitz(const Revealed& r);

OracleHandle make_oracle(const HiddenInstance& inst);

/// Parses a JSON instance description and builds the oracle.
std::pair<HiddenInstance, OracleHandle> make_instance(const std::string& json_text);

struct LoadedInstance {
  std::optional<HiddenInstance> instance;  // absent in hidden mode
  OracleHandle oracle;
  std::string function_type;  // "knapsack", "separable_quadratic", "sharp_quadratic"
};

/// Reads an instance file. In hidden mode the "W" field is stripped before
/// parsing; the oracle is rebuilt from "hidden_ref" when present, otherwise
/// from W without exposing it to the caller.
LoadedInstance load_instance_file(const std::string& path, bool hidden_mode);

std::string instance_to_json(const HiddenInstance& inst);

/// Deterministic instance generator, also reachable through "hidden_ref".
/// family is one of "knapsack", "separable", "sharp".
HiddenInstance make_random_instance(const std::string& family, int m, int n,
                                    long long delta_inf, std::uint64_t seed);

struct ContractWitness {
  Vec point;
  Vec point2;  // Lipschitz pair partner, empty for integrality failures
  std::string what;
};

struct ContractReport {
  bool integrality_ok = true;
  bool lipschitz_ok = true;
  std::vector<ContractWitness> witnesses;
  bool ok() const { return integrality_ok && lipschitz_ok; }
};

/// Samples binary points for gradient integrality and point pairs for the
/// induced Lipschitz inequality. Failures are recorded, not thrown.
ContractReport verify_oracle_contract(const OracleHandle& oracle, int samples,
                                      std::uint64_t seed);

constexpr double kIntegralityTol = 1e-6;

/// Rounds a gradient taken at a binary point to its exact integer vector.
/// Throws ContractError when an entry is farther than kIntegralityTol from
/// the nearest integer.
IntVec snap_to_integers(const Vec& g);

}  // namespace hds
