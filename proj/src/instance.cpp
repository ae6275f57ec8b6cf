#include "hds/instance.hpp"

#include <algorithm>
#include <fstream>
#include <random>
#include <sstream>

#include "json.hpp"

namespace hds {
namespace {

using json = nlohmann::ordered_json;

void check_domain(const Vec& x, int n) {
  if (int(x.size()) != n) throw DomainError("point has wrong dimension");
  for (double v : x)
    if (!(v >= -1e-12 && v <= 1 + 1e-12)) throw DomainError("coordinate outside [0,1]");
}

std::vector<Rational> project_image(const HiddenInstance& inst, const Vec& x) {
  std::vector<Rational> v(inst.m, 0);
  for (int i = 0; i < inst.m; ++i)
    for (int j = 0; j < inst.n; ++j)
      if (inst.w[i][j] != 0) v[i] += Rational(x[j]) * inst.w[i][j];
  return v;
}

Rational exact_value(const HiddenInstance& inst, const Vec& x) {
  auto v = project_image(inst, x);
  Rational s = 0;
  for (int i = 0; i < inst.m; ++i) {
    Rational d = v[i] - inst.spec.targets[i];
    s += inst.spec.weights[i] * d * d;
  }
  return s;
}

Vec exact_gradient(const HiddenInstance& inst, const Vec& x) {
  auto v = project_image(inst, x);
  std::vector<Rational> gg(inst.m);
  for (int i = 0; i < inst.m; ++i)
    gg[i] = 2 * inst.spec.weights[i] * (v[i] - inst.spec.targets[i]);
  Vec out(inst.n, 0);
  for (int j = 0; j < inst.n; ++j) {
    Rational s = 0;
    for (int i = 0; i < inst.m; ++i)
      if (inst.w[i][j] != 0) s += gg[i] * inst.w[i][j];
    out[j] = to_double(s);
  }
  return out;
}

long long matrix_inf_norm(const IntMat& w) {
  long long d = 0;
  for (const auto& row : w)
    for (long long e : row) d = std::max(d, std::llabs(e));
  return d;
}

// Reachability of the sharp target t in W[0,1]^n. Exact interval test per
// row first (necessary), then a projected-gradient feasibility pass on
// min ||Wx - t||^2 since the rows couple through x.
bool target_reachable(const IntMat& w, const IntVec& t) {
  const int m = int(w.size()), n = int(w[0].size());
  for (int i = 0; i < m; ++i) {
    long long lo = 0, hi = 0;
    for (long long e : w[i]) (e < 0 ? lo : hi) += e;
    if (t[i] < lo || t[i] > hi) return false;
  }
  if (m == 1) return true;
  Vec x(n, 0.5);
  double lmax = 0;
  for (int j = 0; j < n; ++j) {
    double col = 0;
    for (int i = 0; i < m; ++i) col += std::fabs(double(w[i][j]));
    lmax = std::max(lmax, col);
  }
  double step = 1.0 / (2.0 * lmax * lmax * m + 1);
  double val = 0;
  for (int it = 0; it < 200000; ++it) {
    Vec r(m, 0);
    val = 0;
    for (int i = 0; i < m; ++i) {
      double s = -double(t[i]);
      for (int j = 0; j < n; ++j) s += double(w[i][j]) * x[j];
      r[i] = s;
      val += s * s;
    }
    if (val < 1e-14) return true;
    double move = 0;
    for (int j = 0; j < n; ++j) {
      double g = 0;
      for (int i = 0; i < m; ++i) g += 2 * r[i] * double(w[i][j]);
      double nx = std::clamp(x[j] - step * g, 0.0, 1.0);
      move = std::max(move, std::fabs(nx - x[j]));
      x[j] = nx;
    }
    if (move < 1e-13) break;
  }
  return val < 1e-10;
}

void validate(const HiddenInstance& inst, long long declared_delta) {
  if (inst.m < 1 || inst.m > inst.n) throw ParseError("need 1 <= m <= n");
  if (int(inst.w.size()) != inst.m) throw ParseError("W row count mismatch");
  for (const auto& row : inst.w)
    if (int(row.size()) != inst.n) throw ParseError("W column count mismatch");
  if (matrix_inf_norm(inst.w) > declared_delta)
    throw ParseError("entry of W exceeds declared delta_inf");
  if (int(inst.spec.targets.size()) != inst.m || int(inst.spec.weights.size()) != inst.m)
    throw ParseError("function parameter length mismatch");
  for (long long c : inst.spec.weights)
    if (c <= 0) throw ParseError("weights c must be positive");
  if (inst.spec.kind == FunctionKind::Knapsack && inst.m != 1)
    throw ParseError("knapsack requires m = 1");
  if (inst.spec.kind == FunctionKind::SharpQuadratic &&
      !target_reachable(inst.w, inst.spec.targets))
    throw ParseError("sharp target not reachable in W[0,1]^n");
}

FunctionSpec spec_from_json(const json& f, int m) {
  FunctionSpec s;
  const std::string type = f.at("type").get<std::string>();
  if (type == "knapsack") {
    s.kind = FunctionKind::Knapsack;
    s.targets = {f.at("target").get<long long>()};
    s.weights = {1};
  } else if (type == "separable_quadratic" || type == "sharp_quadratic") {
    s.kind = type == "sharp_quadratic" ? FunctionKind::SharpQuadratic
                                       : FunctionKind::SeparableQuadratic;
    s.targets = f.at("targets").get<IntVec>();
    if (s.kind == FunctionKind::SeparableQuadratic && f.contains("weights"))
      s.weights = f.at("weights").get<IntVec>();
    else
      s.weights.assign(m, 1);
  } else {
    throw ParseError("unknown function type: " + type);
  }
  return s;
}

json spec_to_json(const FunctionSpec& s) {
  json f;
  switch (s.kind) {
    case FunctionKind::Knapsack:
      f["type"] = "knapsack";
      f["target"] = s.targets[0];
      break;
    case FunctionKind::SeparableQuadratic:
      f["type"] = "separable_quadratic";
      f["targets"] = s.targets;
      f["weights"] = s.weights;
      break;
    case FunctionKind::SharpQuadratic:
      f["type"] = "sharp_quadratic";
      f["targets"] = s.targets;
      break;
  }
  return f;
}

std::pair<HiddenInstance, OracleHandle> build_from_json(const json& doc) {
  HiddenInstance inst;
  inst.n = doc.at("n").get<int>();
  if (inst.n < 1) throw ParseError("n must be positive");
  if (!doc.contains("W") || doc.at("W").is_null())
    throw ParseError("explicit construction needs W (use hidden_ref otherwise)");
  inst.w = doc.at("W").get<IntMat>();
  inst.m = int(inst.w.size());
  inst.spec = spec_from_json(doc.at("function"), inst.m);

  long long delta = matrix_inf_norm(inst.w);
  Revealed rev{inst.m, delta, 2.0 * double(*std::max_element(
                                   inst.spec.weights.begin(), inst.spec.weights.end()))};
  if (doc.contains("revealed")) {
    const json& r = doc.at("revealed");
    if (r.contains("m_bar")) rev.m_bar = r.at("m_bar").get<long long>();
    if (r.contains("delta_inf")) rev.delta_inf = r.at("delta_inf").get<long long>();
    if (r.contains("lipschitz_L")) rev.lipschitz_L = r.at("lipschitz_L").get<double>();
  }
  if (rev.m_bar < inst.m) throw ParseError("revealed m_bar below actual m");
  if (rev.delta_inf < delta) throw ParseError("revealed delta_inf below ||W||_inf");
  if (rev.lipschitz_L <= 0) throw ParseError("lipschitz_L must be positive");

  validate(inst, rev.delta_inf);
  OracleHandle oracle = make_oracle(inst);
  oracle.revealed = rev;
  return {inst, oracle};
}

std::uint64_t draw(std::mt19937_64& rng, std::uint64_t bound) {  // uniform in [0, bound)
  return rng() % bound;
}

}  // namespace

double induced_lipschitz(const Revealed& r) {
  double md = double(r.m_bar) * double(r.delta_inf);
  return r.lipschitz_L * md * md;
}

OracleHandle make_oracle(const HiddenInstance& inst) {
  validate(inst, matrix_inf_norm(inst.w));
  OracleHandle h;
  h.n = inst.n;
  h.revealed = {inst.m, matrix_inf_norm(inst.w),
                2.0 * double(*std::max_element(inst.spec.weights.begin(),
                                               inst.spec.weights.end()))};
  // The instance is copied into the closures; W is not observable from the
  // handle.
  auto owned = std::make_shared<HiddenInstance>(inst);
  h.value = [owned](const Vec& x) {
    check_domain(x, owned->n);
    return to_double(exact_value(*owned, x));
  };
  h.gradient = [owned](const Vec& x) {
    check_domain(x, owned->n);
    return exact_gradient(*owned, x);
  };
  return h;
}

std::pair<HiddenInstance, OracleHandle> make_instance(const std::string& json_text) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const std::exception& e) {
    throw ParseError(std::string("bad instance JSON: ") + e.what());
  }
  return build_from_json(doc);
}

LoadedInstance load_instance_file(const std::string& path, bool hidden_mode) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot read instance file: " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  json doc;
  try {
    doc = json::parse(buf.str());
  } catch (const std::exception& e) {
    throw ParseError(std::string("bad instance JSON: ") + e.what());
  }

  std::string ftype;
  if (doc.contains("function") && doc.at("function").contains("type"))
    ftype = doc.at("function").at("type").get<std::string>();

  if (hidden_mode) {
    if (doc.contains("hidden_ref") && !doc.at("hidden_ref").is_null()) {
      // W, even if present, is stripped and never parsed in hidden mode.
      const json& h = doc.at("hidden_ref");
      HiddenInstance inst = make_random_instance(
          h.at("family").get<std::string>(), h.at("m").get<int>(),
          h.at("n").get<int>(), h.at("delta_inf").get<long long>(),
          h.at("seed").get<std::uint64_t>());
      std::string family = h.at("family").get<std::string>();
      if (ftype.empty())
        ftype = family == "knapsack" ? "knapsack"
                : family == "sharp" ? "sharp_quadratic" : "separable_quadratic";
      return {std::nullopt, make_oracle(inst), ftype};
    }
    auto [inst, oracle] = build_from_json(doc);
    (void)inst;
    return {std::nullopt, oracle, ftype};
  }
  auto [inst, oracle] = build_from_json(doc);
  return {inst, oracle, ftype};
}

std::string instance_to_json(const HiddenInstance& inst) {
  json doc;
  doc["n"] = inst.n;
  doc["W"] = inst.w;
  doc["function"] = spec_to_json(inst.spec);
  doc["revealed"] = {{"m_bar", inst.m},
                     {"delta_inf", matrix_inf_norm(inst.w)},
                     {"lipschitz_L",
                      2.0 * double(*std::max_element(inst.spec.weights.begin(),
                                                     inst.spec.weights.end()))}};
  return doc.dump(2);
}

HiddenInstance make_random_instance(const std::string& family, int m, int n,
                                    long long delta_inf, std::uint64_t seed) {
  if (n < 1 || m < 1 || m > n || delta_inf < 1)
    throw ParseError("bad generator parameters");
  std::mt19937_64 rng(seed);
  HiddenInstance inst;
  inst.n = n;
  inst.m = m;
  inst.w.assign(m, IntVec(n, 0));

  if (family == "knapsack") {
    if (m != 1) throw ParseError("knapsack generator requires m = 1");
    long long total = 0;
    for (int j = 0; j < n; ++j) {
      inst.w[0][j] = 1 + (long long)draw(rng, (std::uint64_t)delta_inf);
      total += inst.w[0][j];
    }
    inst.spec.kind = FunctionKind::Knapsack;
    inst.spec.targets = {(long long)draw(rng, (std::uint64_t)total + 1)};
    inst.spec.weights = {1};
    return inst;
  }

  for (int i = 0; i < m; ++i)
    for (int j = 0; j < n; ++j)
      inst.w[i][j] = (long long)draw(rng, 2 * (std::uint64_t)delta_inf + 1) - delta_inf;
  // Guarantee ||W||_inf == delta_inf so the revealed bound is tight.
  inst.w[0][(int)draw(rng, (std::uint64_t)n)] = delta_inf;

  BinVec z0(n);
  for (int j = 0; j < n; ++j) z0[j] = uint8_t(draw(rng, 2));
  IntVec t(m, 0);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < n; ++j) t[i] += inst.w[i][j] * z0[j];

  if (family == "separable") {
    inst.spec.kind = FunctionKind::SeparableQuadratic;
    inst.spec.weights.assign(m, 0);
    for (int i = 0; i < m; ++i) inst.spec.weights[i] = 1 + (long long)draw(rng, 2);
    if (draw(rng, 2) == 0)  // sometimes shift off the reachable point
      for (int i = 0; i < m; ++i) t[i] += (long long)draw(rng, 5) - 2;
    inst.spec.targets = t;
    return inst;
  }
  if (family == "sharp") {
    inst.spec.kind = FunctionKind::SharpQuadratic;
    inst.spec.weights.assign(m, 1);
    inst.spec.targets = t;  // t = W z0, reachable by construction
    return inst;
  }
  throw ParseError("unknown generator family: " + family);
}

IntVec snap_to_integers(const Vec& g) {
  IntVec out(g.size());
  for (std::size_t j = 0; j < g.size(); ++j) {
    double r = std::nearbyint(g[j]);
    if (std::fabs(g[j] - r) > kIntegralityTol)
      throw ContractError("gradient entry not integral at binary point");
    out[j] = (long long)r;
  }
  return out;
}

ContractReport verify_oracle_contract(const OracleHandle& oracle, int samples,
                                      std::uint64_t seed) {
  if (samples < 1) throw DomainError("samples must be >= 1");
  std::mt19937_64 rng(seed);
  auto unit = [&rng]() { return double(rng() >> 11) * 0x1.0p-53; };
  ContractReport rep;
  const int n = oracle.n;

  for (int s = 0; s < samples; ++s) {
    Vec z(n);
    for (int j = 0; j < n; ++j) z[j] = double(rng() & 1);
    Vec g = oracle.gradient(z);
    for (int j = 0; j < n; ++j) {
      if (std::fabs(g[j] - std::nearbyint(g[j])) > kIntegralityTol) {
        rep.integrality_ok = false;
        rep.witnesses.push_back({z, {}, "non-integral gradient entry " + std::to_string(j)});
        break;
      }
    }
  }

  const double lf = induced_lipschitz(oracle.revealed);
  for (int s = 0; s < samples; ++s) {
    Vec u(n), v(n);
    for (int j = 0; j < n; ++j) u[j] = unit(), v[j] = unit();
    Vec gu = oracle.gradient(u), gv = oracle.gradient(v);
    double lhs = 0, dist = 0;
    for (int j = 0; j < n; ++j) {
      lhs = std::max(lhs, std::fabs(gu[j] - gv[j]));
      dist += std::fabs(u[j] - v[j]);
    }
    if (lhs > lf * dist + 1e-9) {
      rep.lipschitz_ok = false;
      rep.witnesses.push_back({u, v, "Lipschitz inequality violated"});
    }
  }
  return rep;
}

}  // namespace hds
