#include <random>

#include "anls/ground_state.hpp"
#include "anls/symmetry.hpp"
#include "doctest.h"

using namespace anls;

namespace {

GridSpec grid64() { return {64, 64, 16.0, 16.0}; }

RealField smooth_nonneg(const GridSpec& g, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss;
  RealField noise(g);
  for (double& x : noise.v) x = gauss(rng);
  RealField f = apply_symbol(noise, MultiplierSymbol::resolvent(0.8, 0.5));
  double m = norm_linf(f);
  for (double& x : f.v) x = std::abs(x) + 0.05 * m;  // strictly positive, smooth
  return f;
}

}  // namespace

TEST_CASE("placement order covers each index once") {
  auto order = rearrangement_order(16);
  CHECK(order.size() == 16);
  CHECK(order[0] == 8);
  CHECK(order[1] == 9);
  CHECK(order[2] == 7);
  CHECK(order.back() == 0);
  std::vector<int> seen(16, 0);
  for (int i : order) seen[i]++;
  for (int c : seen) CHECK(c == 1);
}

TEST_CASE("bell-shaped field is a fixed point") {
  GridSpec g = grid64();
  RealField f(g);
  for (int i = 0; i < g.nx; ++i)
    for (int j = 0; j < g.ny; ++j)
      f.at(i, j) = std::exp(-0.3 * g.x(i) * g.x(i) - 0.2 * g.y(j) * g.y(j));
  SymmetrizedField s = axial_symmetrize(f);
  CHECK(s.certified);
  CHECK(rel_l2_distance(s.field, f) == 0.0);  // exact permutation identity
}

TEST_CASE("off-center spike moves to the center, norms exact") {
  GridSpec g = grid64();
  RealField f(g);
  f.at(10, 50) = 7.5;
  SymmetrizedField s = axial_symmetrize(f);
  CHECK(s.field.at(g.nx / 2, g.ny / 2) == 7.5);
  CHECK(norm_l2(s.field) == norm_l2(f));
  CHECK(norm_lp(s.field, 3.0) == norm_lp(f, 3.0));
}

TEST_CASE("shifted anisotropic Gaussian recenters with norms preserved") {
  GridSpec g = grid64();
  RealField f(g);
  double x0 = g.dx() * 5, y0 = g.dy() * 9;  // integer-cell shift
  for (int i = 0; i < g.nx; ++i)
    for (int j = 0; j < g.ny; ++j) {
      double x = g.x(i) - x0, y = g.y(j) - y0;
      f.at(i, j) = std::exp(-x * x - y * y / 4.0);
    }
  SymmetrizedField s = axial_symmetrize(f);
  CHECK(std::abs(norm_l2(s.field) - norm_l2(f)) <= 1e-14 * norm_l2(f));
  double p = 2.7;
  CHECK(std::abs(norm_lp(s.field, p) - norm_lp(f, p)) <= 1e-14 * norm_lp(f, p));
  // peak lands at the center
  CHECK(s.field.at(g.nx / 2, g.ny / 2) == norm_linf(s.field));
}

TEST_CASE("global multiset of values is preserved") {
  GridSpec g = grid64();
  RealField f = smooth_nonneg(g, 21);
  SymmetrizedField s = axial_symmetrize(f);
  std::vector<double> all_in(f.v.begin(), f.v.end()), all_out(s.field.v.begin(), s.field.v.end());
  std::sort(all_in.begin(), all_in.end());
  std::sort(all_out.begin(), all_out.end());
  for (std::size_t k = 0; k < all_in.size(); ++k) {
    if (all_in[k] != all_out[k]) {
      CHECK(all_in[k] == all_out[k]);
      break;
    }
  }
}

TEST_CASE("idempotence is exact") {
  GridSpec g = grid64();
  for (std::uint64_t seed : {1ULL, 2ULL, 3ULL}) {
    RealField f = smooth_nonneg(g, seed);
    SymmetrizedField once = axial_symmetrize(f);
    SymmetrizedField twice = axial_symmetrize(once.field);
    bool identical = once.field.v == twice.field.v;
    CHECK(identical);
  }
}

TEST_CASE("negative parts clipped and recorded") {
  GridSpec g = grid64();
  RealField f(g);
  f.at(3, 3) = -2.0;
  f.at(40, 40) = 1.0;
  SymmetrizedField s = axial_symmetrize(f);
  CHECK(s.clipped_l2 == doctest::Approx(2.0 * std::sqrt(g.cell())));
  for (double x : s.field.v)
    if (x < 0.0) CHECK(x >= 0.0);
}

TEST_CASE("all-zero input returns uncertified zero field") {
  GridSpec g = grid64();
  RealField f(g);
  SymmetrizedField s = axial_symmetrize(f);
  CHECK(!s.certified);
  CHECK(norm_linf(s.field) == 0.0);
}

TEST_CASE("Weinstein functional does not increase under symmetrization") {
  GridSpec g = grid64();
  ProblemParams params{0.5, 3.0, 1.0};
  int failures = 0;
  for (std::uint64_t seed = 0; seed < 120; ++seed) {
    RealField f = smooth_nonneg(g, 1000 + seed);
    double j0 = weinstein_J(f, params);
    double j1 = weinstein_J(axial_symmetrize(f).field, params);
    if (j1 > j0 * (1.0 + 1e-8)) ++failures;
  }
  CHECK(failures == 0);
}
