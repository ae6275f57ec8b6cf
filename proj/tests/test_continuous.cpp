#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "hds/continuous.hpp"
#include "hds/verify.hpp"

using namespace hds;

namespace {

HiddenInstance sep11() {  // W=[[1,1]], t=1: any x1+x2=1 is optimal
  HiddenInstance inst;
  inst.n = 2;
  inst.m = 1;
  inst.w = {{1, 1}};
  inst.spec = {FunctionKind::SeparableQuadratic, {1}, {1}};
  return inst;
}

}  // namespace

TEST_CASE("minimize_over_face on the full cube and sub-faces") {
  auto oracle = make_oracle(sep11());
  Face full(2);
  auto [x, f] = minimize_over_face(oracle, full, 1e-9);
  CHECK(f == doctest::Approx(0).epsilon(1e-8));
  CHECK(x[0] + x[1] == doctest::Approx(1).epsilon(1e-6));

  Face f0(2);
  f0.state[0] = Face::kZero;
  auto [x0, v0] = minimize_over_face(oracle, f0, 1e-9);
  CHECK(v0 == doctest::Approx(0).epsilon(1e-8));
  CHECK(x0[0] == 0);
  CHECK(x0[1] == doctest::Approx(1).epsilon(1e-6));

  Face vtx(2);
  vtx.state[0] = Face::kOne;
  vtx.state[1] = Face::kOne;
  auto [xv, vv] = minimize_over_face(oracle, vtx, 1e-9);
  CHECK(xv == Vec{1, 1});
  CHECK(vv == 1);
}

TEST_CASE("reduce_to_few_fractionals drives out fractional entries") {
  auto oracle = make_oracle(sep11());
  auto fm = reduce_to_few_fractionals(oracle);
  CHECK(fm.f_min == doctest::Approx(0).epsilon(1e-7));
  CHECK(fm.fractional_indices.size() <= 1);
  CHECK(fm.subroutine_calls <= 5);
}

TEST_CASE("knapsack reduction reaches the continuous optimum") {
  HiddenInstance inst;
  inst.n = 3;
  inst.m = 1;
  inst.w = {{3, 5, 7}};
  inst.spec = {FunctionKind::Knapsack, {8}, {1}};
  auto oracle = make_oracle(inst);
  auto fm = reduce_to_few_fractionals(oracle);
  CHECK(fm.f_min == doctest::Approx(0).epsilon(1e-7));
  CHECK(fm.fractional_indices.size() <= 1);
  CHECK(fm.subroutine_calls <= 7);
}

TEST_CASE("binary unique optimum ends with phi = 0") {
  HiddenInstance inst;  // W=I, targets binary: unique optimum (1,0,1)
  inst.n = 3;
  inst.m = 3;
  inst.w = {{1, 0, 0}, {0, 1, 0}, {0, 0, 1}};
  inst.spec = {FunctionKind::SeparableQuadratic, {1, 0, 1}, {1, 1, 1}};
  auto oracle = make_oracle(inst);
  auto fm = reduce_to_few_fractionals(oracle);
  CHECK(fm.fractional_indices.empty());
  CHECK(fm.x_star == Vec{1, 0, 1});
  CHECK(fm.f_min == 0);
}

TEST_CASE("call counter stays within 2n + 1 on random instances") {
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    auto inst = make_random_instance("separable", 2, 9, 2, seed);
    auto oracle = make_oracle(inst);
    auto fm = reduce_to_few_fractionals(oracle);
    CHECK(fm.subroutine_calls <= 2 * 9 + 1);
    CHECK((long long)fm.fractional_indices.size() <= oracle.revealed.m_bar);
    CHECK(fm.f_min <= brute_force_min(inst).f_min + 1e-6);

    // first-order conditions at the reduced point
    Vec g = oracle.gradient(fm.x_star);
    double tau = 1e-6 * induced_lipschitz(oracle.revealed);
    for (int k = 0; k < 9; ++k) {
      if (g[k] > tau) CHECK(fm.x_star[k] == 0);
      if (g[k] < -tau) CHECK(fm.x_star[k] == 1);
    }
  }
}

TEST_CASE("known-W reduction pivots to a vertex exactly") {
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    auto inst = make_random_instance("separable", 2, 8, 2, seed);
    auto oracle = make_oracle(inst);
    auto fm = reduce_known_w(inst, oracle);
    CHECK((int)fm.fractional_indices.size() <= inst.m);
    CHECK(fm.subroutine_calls == 1);
    auto full = reduce_to_few_fractionals(oracle);
    CHECK(fm.f_min == doctest::Approx(full.f_min).epsilon(1e-6));
  }
}

TEST_CASE("fix_by_large_gradients spec example") {
  HiddenInstance inst;
  inst.n = 2;
  inst.m = 1;
  inst.w = {{1, 3}};
  inst.spec = {FunctionKind::SeparableQuadratic, {-5}, {1}};
  auto oracle = make_oracle(inst);
  FractionalMinimum fm;
  fm.x_star = {0, 0};
  fm.f_min = oracle.value(fm.x_star);

  // threshold (14-1)*2 = 26: only the second gradient entry (30) exceeds it
  auto rep = fix_by_large_gradients(oracle, fm, 14, 2);
  CHECK(rep.forced_zero == std::vector<int>{1});
  CHECK(rep.forced_one.empty());
  CHECK(rep.residual_gradient_bound == 26);
}

TEST_CASE("zero gradient fixes nothing") {
  auto oracle = make_oracle(sep11());
  FractionalMinimum fm;
  fm.x_star = {0.5, 0.5};
  fm.f_min = 0;
  auto rep = fix_by_large_gradients(oracle, fm, 3, 2);
  CHECK(rep.forced_zero.empty());
  CHECK(rep.forced_one.empty());
}

TEST_CASE("delta below one takes the zero-threshold branch") {
  HiddenInstance inst;
  inst.n = 1;
  inst.m = 1;
  inst.w = {{1}};
  inst.spec = {FunctionKind::SeparableQuadratic, {-1}, {1}};  // grad at 0 is 2
  auto oracle = make_oracle(inst);
  FractionalMinimum fm;
  fm.x_star = {0};
  fm.f_min = oracle.value(fm.x_star);
  auto rep = fix_by_large_gradients(oracle, fm, 0.5, 2);
  CHECK(rep.forced_zero == std::vector<int>{0});
  CHECK(rep.residual_gradient_bound == 0);
}

TEST_CASE("fixing contradicting first-order conditions is a contract error") {
  auto oracle = make_oracle(sep11());
  FractionalMinimum fm;
  fm.x_star = {1, 1};  // gradient (2,2) positive but coordinates at 1
  fm.f_min = oracle.value(fm.x_star);
  CHECK_THROWS_AS(fix_by_large_gradients(oracle, fm, 0.5, 2), ContractError);
}

TEST_CASE("forced coordinates are safe: flips near x_star only get worse") {
  for (std::uint64_t seed = 1; seed <= 15; ++seed) {
    auto inst = make_random_instance("separable", 1, 10, 2, seed);
    auto oracle = make_oracle(inst);
    auto fm = reduce_to_few_fractionals(oracle);
    double delta = 6;  // deliberately small: more forcing, still a valid cap?
    double lf = induced_lipschitz(oracle.revealed);
    FixReport rep;
    try {
      rep = fix_by_large_gradients(oracle, fm, delta, lf);
    } catch (const ContractError&) {
      continue;
    }
    if (rep.forced_zero.empty() && rep.forced_one.empty()) continue;

    for (std::uint64_t mask = 0; mask < (1u << 10); ++mask) {
      BinVec z(10);
      for (int j = 0; j < 10; ++j) z[j] = (mask >> j) & 1;
      if (l1_dist(fm.x_star, z) > delta - 1) continue;
      for (int k : rep.forced_zero) {
        if (!z[k]) continue;
        BinVec flip = z;
        flip[k] = 0;
        CHECK(oracle.value(Vec(z.begin(), z.end())) >
              oracle.value(Vec(flip.begin(), flip.end())));
      }
      for (int k : rep.forced_one) {
        if (z[k]) continue;
        BinVec flip = z;
        flip[k] = 1;
        CHECK(oracle.value(Vec(z.begin(), z.end())) >
              oracle.value(Vec(flip.begin(), flip.end())));
      }
    }
  }
}
