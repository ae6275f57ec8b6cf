#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <random>

#include "hds/instance.hpp"

using namespace hds;

namespace {

HiddenInstance knapsack357(long long target) {
  HiddenInstance inst;
  inst.n = 3;
  inst.m = 1;
  inst.w = {{3, 5, 7}};
  inst.spec = {FunctionKind::Knapsack, {target}, {1}};
  return inst;
}

Vec central_fd(const OracleHandle& o, const Vec& x, double h = 1e-5) {
  Vec g(x.size());
  for (std::size_t j = 0; j < x.size(); ++j) {
    Vec lo = x, hi = x;
    lo[j] -= h;
    hi[j] += h;
    g[j] = (o.value(hi) - o.value(lo)) / (2 * h);
  }
  return g;
}

}  // namespace

TEST_CASE("knapsack oracle values") {
  auto oracle = make_oracle(knapsack357(8));
  CHECK(oracle.value({1, 1, 0}) == 0);
  CHECK(oracle.value({0, 0, 0}) == 64);
  CHECK(oracle.revealed.m_bar == 1);
  CHECK(oracle.revealed.delta_inf == 7);
  CHECK(oracle.revealed.lipschitz_L == 2);
}

TEST_CASE("separable value at a fractional point") {
  HiddenInstance inst;
  inst.n = 2;
  inst.m = 1;
  inst.w = {{1, 1}};
  inst.spec = {FunctionKind::SeparableQuadratic, {1}, {1}};
  auto oracle = make_oracle(inst);
  CHECK(oracle.value({0.5, 0.5}) == 0);
}

TEST_CASE("knapsack gradients") {
  auto oracle = make_oracle(knapsack357(8));
  Vec g = oracle.gradient({0, 0, 0});
  CHECK(g == Vec{-48, -80, -112});
  CHECK(oracle.gradient({1, 1, 0}) == Vec{0, 0, 0});
  Vec fd = central_fd(oracle, {0.3, 0.4, 0.5});
  Vec ex = oracle.gradient({0.3, 0.4, 0.5});
  for (int j = 0; j < 3; ++j) CHECK(ex[j] == doctest::Approx(fd[j]).epsilon(1e-6));
}

TEST_CASE("separable gradient example") {
  HiddenInstance inst;
  inst.n = 2;
  inst.m = 1;
  inst.w = {{1, 3}};
  inst.spec = {FunctionKind::SeparableQuadratic, {-5}, {1}};
  auto oracle = make_oracle(inst);
  CHECK(oracle.gradient({0, 0}) == Vec{10, 30});
}

TEST_CASE("domain errors") {
  auto oracle = make_oracle(knapsack357(8));
  CHECK_THROWS_AS(oracle.value({1.5, 0, 0}), DomainError);
  CHECK_THROWS_AS(oracle.gradient({-0.1, 0, 0}), DomainError);
  CHECK_THROWS_AS(oracle.value({0, 0}), DomainError);
}

TEST_CASE("make_instance from JSON") {
  auto [inst, oracle] = make_instance(R"({
    "n": 3, "W": [[3,5,7]],
    "function": {"type": "knapsack", "target": 8}
  })");
  CHECK(inst.m == 1);
  CHECK(oracle.revealed.delta_inf == 7);
  CHECK(oracle.revealed.lipschitz_L == 2);
  CHECK(oracle.value({1, 1, 0}) == 0);

  auto [inst2, oracle2] = make_instance(R"({
    "n": 2, "W": [[1,0],[0,1]],
    "function": {"type": "separable_quadratic", "targets": [0,1], "weights": [1,1]}
  })");
  (void)inst2;
  CHECK(oracle2.revealed.lipschitz_L == 2);

  CHECK_THROWS_AS(make_instance("{"), ParseError);
  // declared delta bound violated
  CHECK_THROWS_AS(make_instance(R"({
    "n": 1, "W": [[5]],
    "function": {"type": "knapsack", "target": 1},
    "revealed": {"delta_inf": 3}
  })"),
                  ParseError);
  // sharp target outside W[0,1]^n
  CHECK_THROWS_AS(make_instance(R"({
    "n": 2, "W": [[1,1]],
    "function": {"type": "sharp_quadratic", "targets": [5]}
  })"),
                  ParseError);
}

TEST_CASE("oracle contract verification") {
  auto oracle = make_oracle(knapsack357(8));
  auto rep = verify_oracle_contract(oracle, 100, 7);
  CHECK(rep.ok());

  // Injected fault: +0.5 on one gradient entry.
  OracleHandle bad = oracle;
  bad.gradient = [inner = oracle.gradient](const Vec& x) {
    Vec g = inner(x);
    g[0] += 0.5;
    return g;
  };
  auto rep2 = verify_oracle_contract(bad, 50, 7);
  CHECK_FALSE(rep2.integrality_ok);
  CHECK_FALSE(rep2.witnesses.empty());

  // Declared L halved below the true curvature.
  OracleHandle weak = oracle;
  weak.revealed.lipschitz_L = 0.005;
  auto rep3 = verify_oracle_contract(weak, 200, 11);
  CHECK_FALSE(rep3.lipschitz_ok);
}

TEST_CASE("gradient integrality at every binary point, exact") {
  for (std::uint64_t seed : {1u, 2u, 3u}) {
    auto inst = make_random_instance("separable", 2, 6, 3, seed);
    auto oracle = make_oracle(inst);
    for (int k = 0; k < 64; ++k) {
      Vec z(6);
      for (int j = 0; j < 6; ++j) z[j] = double((k >> j) & 1);
      for (double gj : oracle.gradient(z))
        CHECK(gj == std::nearbyint(gj));
    }
  }
}

TEST_CASE("convexity along random segments") {
  std::mt19937_64 rng(5);
  auto unit = [&rng]() { return double(rng() >> 11) * 0x1.0p-53; };
  auto inst = make_random_instance("sharp", 2, 8, 2, 3);
  auto oracle = make_oracle(inst);
  for (int t = 0; t < 50; ++t) {
    Vec x(8), y(8);
    for (int j = 0; j < 8; ++j) x[j] = unit(), y[j] = unit();
    double fx = oracle.value(x), fy = oracle.value(y);
    for (double lam : {0.25, 0.5, 0.75}) {
      Vec mid(8);
      for (int j = 0; j < 8; ++j) mid[j] = lam * x[j] + (1 - lam) * y[j];
      CHECK(oracle.value(mid) <= lam * fx + (1 - lam) * fy + 1e-9);
    }
  }
}

TEST_CASE("generator determinism and invariants") {
  auto a = make_random_instance("knapsack", 1, 10, 5, 99);
  auto b = make_random_instance("knapsack", 1, 10, 5, 99);
  CHECK(a.w == b.w);
  CHECK(a.spec.targets == b.spec.targets);
  for (long long wj : a.w[0]) {
    CHECK(wj >= 1);
    CHECK(wj <= 5);
  }
  // sharp targets are reachable by construction
  auto s = make_random_instance("sharp", 2, 8, 2, 123);
  CHECK_NOTHROW(make_oracle(s));
}

TEST_CASE("snap_to_integers") {
  CHECK(snap_to_integers({1.0000001, -2.0}) == IntVec{1, -2});
  CHECK_THROWS_AS(snap_to_integers({0.4}), ContractError);
}
