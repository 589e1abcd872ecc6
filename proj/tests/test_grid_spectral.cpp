#include <random>

#include "anls/spectral_ops.hpp"
#include "doctest.h"

using namespace anls;

namespace {

GridSpec small_grid() { return {64, 128, 10.0, 20.0}; }

RealField random_smooth(const GridSpec& g, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss;
  RealField noise(g);
  for (double& x : noise.v) x = gauss(rng);
  // low-pass to get a smooth field
  return apply_symbol(noise, MultiplierSymbol::resolvent(0.7, 1.0));
}

}  // namespace

TEST_CASE("grid invariants") {
  GridSpec g{64, 128, 10.0, 20.0};
  g.validate();
  CHECK(g.x(32) == 0.0);
  CHECK(g.y(64) == 0.0);
  CHECK(g.kx(0) == 0);
  CHECK(g.kx(1) == 1);
  CHECK(g.kx(63) == -1);
  CHECK(g.xi(1) == doctest::Approx(0.1));

  GridSpec bad{60, 128, 10.0, 20.0};
  CHECK_THROWS_AS(bad.validate(), Error);
  GridSpec bad2{64, 128, -1.0, 20.0};
  CHECK_THROWS_AS(bad2.validate(), Error);
}

TEST_CASE("constant field transforms to a pure DC coefficient") {
  GridSpec g = small_grid();
  RealField f(g, 3.25);
  SpectralField u = forward_transform(f);
  CHECK(u.at(0, 0).real() == doctest::Approx(3.25).epsilon(1e-14));
  double off = 0.0;
  for (int i = 0; i < g.nx; ++i)
    for (int j = 0; j < g.ny; ++j)
      if (i || j) off = std::max(off, std::abs(u.at(i, j)));
  CHECK(off < 1e-13);
}

TEST_CASE("single cosine mode occupies exactly kx = +-1") {
  GridSpec g = small_grid();
  RealField f(g);
  for (int i = 0; i < g.nx; ++i)
    for (int j = 0; j < g.ny; ++j) f.at(i, j) = std::cos(2.0 * M_PI * g.x(i) / g.lx);
  SpectralField u = forward_transform(f);
  int hits = 0;
  for (int i = 0; i < g.nx; ++i)
    for (int j = 0; j < g.ny; ++j) {
      if (std::abs(u.at(i, j)) > 1e-12) {
        ++hits;
        CHECK(j == 0);
        CHECK(std::abs(g.kx(i)) == 1);
        CHECK(std::abs(u.at(i, j)) == doctest::Approx(0.5).epsilon(1e-12));
      }
    }
  CHECK(hits == 2);
}

TEST_CASE("round trip and Parseval") {
  GridSpec g = small_grid();
  RealField f = random_smooth(g, 11);
  SpectralField u = forward_transform(f);
  RealField back = inverse_transform_real(u);
  CHECK(rel_l2_distance(back, f) < 1e-12);

  double phys = 0.0;
  for (double x : f.v) phys += x * x;
  phys *= g.cell();
  double spec = 0.0;
  for (const cdouble& z : u.c) spec += std::norm(z);
  spec *= g.lx * g.ly;
  CHECK(phys == doctest::Approx(spec).epsilon(1e-12));
}

TEST_CASE("non-finite input rejected") {
  GridSpec g = small_grid();
  RealField f(g);
  f.v[5] = std::numeric_limits<double>::quiet_NaN();
  CHECK_THROWS_AS(forward_transform(f), Error);
}

TEST_CASE("SecondX is the eigenvalue on a cosine") {
  GridSpec g = small_grid();
  RealField f(g);
  for (int i = 0; i < g.nx; ++i)
    for (int j = 0; j < g.ny; ++j) f.at(i, j) = std::cos(2.0 * M_PI * g.x(i) / g.lx);
  RealField out = apply_symbol(f, MultiplierSymbol::second_x());
  double lam = std::pow(2.0 * M_PI / g.lx, 2);
  RealField expect = f;
  expect *= lam;
  CHECK(rel_l2_distance(out, expect) < 1e-12);
}

TEST_CASE("FracY kills constants") {
  GridSpec g = small_grid();
  RealField f(g, 2.0);
  RealField out = apply_symbol(f, MultiplierSymbol::frac_y(0.5));
  CHECK(norm_linf(out) < 1e-13);
}

TEST_CASE("Resolvent inverts FullOperator") {
  GridSpec g = small_grid();
  RealField f = random_smooth(g, 42);
  double s = 0.6, omega = 1.3;
  RealField round =
      apply_symbol(apply_symbol(f, MultiplierSymbol::full_operator(s, omega)),
                   MultiplierSymbol::resolvent(s, omega));
  CHECK(rel_l2_distance(round, f) < 1e-12);
  // and the other order
  RealField round2 =
      apply_symbol(apply_symbol(f, MultiplierSymbol::resolvent(s, omega)),
                   MultiplierSymbol::full_operator(s, omega));
  CHECK(rel_l2_distance(round2, f) < 1e-12);
}

TEST_CASE("Resolvent rejects omega <= 0") {
  CHECK_THROWS_AS(MultiplierSymbol::resolvent(0.5, 0.0), Error);
  CHECK_THROWS_AS(MultiplierSymbol::resolvent(0.5, -1.0), Error);
}

TEST_CASE("apply_L basics") {
  GridSpec g = small_grid();
  SUBCASE("zero maps to zero") {
    RealField z(g);
    CHECK(norm_l2(apply_L(z, 0.5, 1.0)) == 0.0);
  }
  SUBCASE("x-mode eigenfunction for any s") {
    RealField f(g);
    for (int i = 0; i < g.nx; ++i)
      for (int j = 0; j < g.ny; ++j) f.at(i, j) = std::cos(2.0 * M_PI * g.x(i) / g.lx);
    double omega = 0.7;
    RealField out = apply_L(f, 0.37, omega);
    RealField expect = f;
    expect *= std::pow(2.0 * M_PI / g.lx, 2) + omega;
    CHECK(rel_l2_distance(out, expect) < 1e-12);
  }
  SUBCASE("s = 1 reduction to the full Laplacian") {
    RealField f = random_smooth(g, 3);
    RealField a = apply_L(f, 1.0, 2.0);
    RealField b = apply_symbol_fn(f, [](double xi, double eta) {
      return std::pow(2 * M_PI * xi, 2) + std::pow(2 * M_PI * eta, 2) + 2.0;
    });
    CHECK(rel_l2_distance(a, b) < 1e-12);
  }
}

TEST_CASE("self-adjointness and positivity of L") {
  GridSpec g = small_grid();
  RealField f = random_smooth(g, 5);
  RealField h = random_smooth(g, 6);
  double s = 0.45, omega = 0.9;
  double a = inner(apply_L(f, s, omega), h);
  double b = inner(f, apply_L(h, s, omega));
  CHECK(a == doctest::Approx(b).epsilon(1e-12));
  double quad = inner(apply_L(f, s, omega), f);
  CHECK(quad >= omega * inner(f, f) * (1.0 - 1e-12));
}

TEST_CASE("sobolev norm") {
  GridSpec g = small_grid();
  SUBCASE("zero field") {
    RealField z(g);
    CHECK(sobolev_norm(z, SobolevSpace::H1s, 0.5) == 0.0);
  }
  SUBCASE("constant normalization") {
    RealField c(g, 2.0);
    CHECK(sobolev_norm(c, SobolevSpace::H1s, 0.5) ==
          doctest::Approx(2.0 * std::sqrt(g.lx * g.ly)).epsilon(1e-12));
  }
  SUBCASE("term-by-term Parseval split") {
    RealField f = random_smooth(g, 9);
    double s = 0.62;
    double h1 = sobolev_norm(f, SobolevSpace::H1s, s);
    // |df/dx|^2 + |D_y^s f|^2 + |f|^2 via individual multipliers
    RealField dx = apply_symbol(f, MultiplierSymbol::half_x());
    RealField dy = apply_symbol(f, MultiplierSymbol::half_frac_y(s));
    double split = inner(dx, dx) + inner(dy, dy) + inner(f, f);
    CHECK(h1 * h1 == doctest::Approx(split).epsilon(1e-12));
  }
  SUBCASE("H22s dominates H1s") {
    RealField f = random_smooth(g, 10);
    CHECK(sobolev_norm(f, SobolevSpace::H22s, 0.5) >=
          sobolev_norm(f, SobolevSpace::H1s, 0.5) * (1 - 1e-12));
    CHECK(sobolev_norm(f, SobolevSpace::H1s, 0.5) >= norm_l2(f) * (1 - 1e-12));
  }
}

TEST_CASE("FracY(1) equals the second derivative symbol") {
  GridSpec g = small_grid();
  RealField f = random_smooth(g, 13);
  RealField a = apply_symbol(f, MultiplierSymbol::frac_y(1.0));
  RealField b = apply_symbol_fn(f, [](double, double eta) { return std::pow(2 * M_PI * eta, 2); });
  CHECK(rel_l2_distance(a, b) < 1e-12);
}

TEST_CASE("dealias mask zeroes the upper third") {
  GridSpec g{16, 16, 4.0, 4.0};
  RealField f = random_smooth(g, 17);
  SpectralField u = forward_transform(f);
  dealias_mask(u);
  for (int i = 0; i < g.nx; ++i)
    for (int j = 0; j < g.ny; ++j)
      if (std::abs(g.kx(i)) > g.nx / 3 || std::abs(g.ky(j)) > g.ny / 3)
        CHECK(std::abs(u.at(i, j)) == 0.0);
}

TEST_CASE("resample reproduces a band-limited field on a finer grid") {
  GridSpec g{32, 32, 8.0, 8.0};
  RealField f(g);
  for (int i = 0; i < g.nx; ++i)
    for (int j = 0; j < g.ny; ++j)
      f.at(i, j) = std::cos(2 * M_PI * g.x(i) / g.lx) * std::sin(4 * M_PI * g.y(j) / g.ly) + 0.3;
  GridSpec fine{64, 64, 8.0, 8.0};
  RealField r = resample(f, fine);
  RealField expect(fine);
  for (int i = 0; i < fine.nx; ++i)
    for (int j = 0; j < fine.ny; ++j)
      expect.at(i, j) =
          std::cos(2 * M_PI * fine.x(i) / fine.lx) * std::sin(4 * M_PI * fine.y(j) / fine.ly) + 0.3;
  CHECK(rel_l2_distance(r, expect) < 1e-12);
}

TEST_CASE("derivatives: spectral d/dx of a sine") {
  GridSpec g = small_grid();
  RealField f(g);
  for (int i = 0; i < g.nx; ++i)
    for (int j = 0; j < g.ny; ++j) f.at(i, j) = std::sin(2 * M_PI * g.x(i) / g.lx);
  RealField d = deriv_x(f);
  RealField expect(g);
  double w = 2 * M_PI / g.lx;
  for (int i = 0; i < g.nx; ++i)
    for (int j = 0; j < g.ny; ++j) expect.at(i, j) = w * std::cos(2 * M_PI * g.x(i) / g.lx);
  CHECK(rel_l2_distance(d, expect) < 1e-12);
}
