#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <random>
#include <vector>

#include "doctest.h"
#include "lambertcreep/lambertw.hpp"

using namespace lambertcreep;
using namespace lambertcreep::lw;

namespace {

// Reference values computed independently at 50-digit precision.
constexpr double kW1 = 0.567143290409783873;
constexpr double kW10 = 1.745528002740699383;
constexpr double kW1000 = 5.249602852401596227;
constexpr double kW1e6 = 11.383358086140052622;

struct CutRef {
  double x, re, im;
};
constexpr CutRef kCutRefs[] = {
    {-1.0, -0.3181315052047641353, 1.3372357014306894089},
    {-2.0, 0.1728160028399999757, 1.6736864137408426772},
    {-10.0, 1.3699809685212708156, 2.1401945270747131960},
    {-1000.0, 5.1501630246362515223, 2.6641981432905204596},
    {-1e6, 11.3544677771688590841, 2.8921791489948752450},
};

double rel_diff(Complex a, Complex b) { return std::abs(a - b) / std::abs(b); }

}  // namespace

TEST_CASE("w0_real known values") {
  CHECK(w0_real(0.0) == 0.0);
  CHECK(w0_real(kE) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(w0_real(-kInvE) == -1.0);
  CHECK(w0_real(1.0) == doctest::Approx(kW1).epsilon(1e-14));
  CHECK(w0_real(10.0) == doctest::Approx(kW10).epsilon(1e-14));
  CHECK(w0_real(1000.0) == doctest::Approx(kW1000).epsilon(1e-14));
  CHECK(w0_real(1e6) == doctest::Approx(kW1e6).epsilon(1e-14));
  CHECK(w0_real(0.5) == doctest::Approx(0.3517337112491958260).epsilon(1e-14));
  CHECK(w0_real(-0.25) == doctest::Approx(-0.3574029561813889031).epsilon(1e-14));
  CHECK(w0_real(2.0) == doctest::Approx(0.8526055020137254913).epsilon(1e-14));
}

TEST_CASE("w0_real defining identity residual over a log grid") {
  const int n = 2000;
  const double lo = -kInvE + 1e-9;
  double max_res = 0.0;
  for (int i = 0; i < n; ++i) {
    // log-spaced in x + 1/e from 1e-9 up to 1e8 + 1/e
    const double f = double(i) / (n - 1);
    const double x = lo + (std::pow(10.0, f * 17.0) - 1.0) * 1e-9;
    const double w = w0_real(x);
    CHECK(w >= -1.0);
    const double res = std::abs(w * std::exp(w) - x) / (1.0 + std::abs(x));
    max_res = std::max(max_res, res);
  }
  CHECK(max_res <= 1e-12);
}

TEST_CASE("w0_real domain handling") {
  CHECK_THROWS_AS((void)w0_real(-kInvE - 1e-3), DomainError);
  CHECK_THROWS_AS((void)w0_real(std::nan("")), DomainError);
  // within rel_tol slack at the endpoint: clamps to the branch-point value
  CHECK(w0_real(-kInvE - 1e-16) == -1.0);
  SolveConfig bad;
  bad.rel_tol = -1.0;
  CHECK_THROWS_AS((void)w0_real(1.0, bad), DomainError);
  // very large arguments use the logarithmic form
  const double w = w0_real(1e300);
  CHECK(w + std::log(w) == doctest::Approx(std::log(1e300)).epsilon(1e-14));
}

TEST_CASE("w0_real is nonnegative and nondecreasing on [0, inf)") {
  double prev = -1.0;
  for (int i = 0; i <= 400; ++i) {
    const double x = std::pow(10.0, -6.0 + 14.0 * i / 400.0);
    const double w = w0_real(x);
    CHECK(w >= 0.0);
    CHECK(w >= prev);
    prev = w;
  }
}

TEST_CASE("w0_complex real axis and conjugate symmetry") {
  const Complex we = w0_complex(Complex(kE, 0.0));
  CHECK(we.real() == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(we.imag() == 0.0);

  const Complex z0(-1.0, 1.0);
  CHECK(std::abs(w0_complex(std::conj(z0)) - std::conj(w0_complex(z0))) == 0.0);

  std::mt19937 gen(20240817);
  std::uniform_real_distribution<double> dist(-3.0, 3.0);
  int tested = 0;
  while (tested < 100) {
    const Complex z(dist(gen), dist(gen));
    if (std::abs(z.imag()) < 1e-9) continue;
    const Complex w = w0_complex(z);
    const Complex wc = w0_complex(std::conj(z));
    CHECK(std::abs(wc - std::conj(w)) <= 1e-12 * (1.0 + std::abs(w)));
    CHECK(std::abs(w * std::exp(w) - z) <= 1e-12 * (1.0 + std::abs(z)));
    CHECK(std::abs(w.imag()) < kPi);
    ++tested;
  }
}

TEST_CASE("w0_complex approaching the cut reproduces the one-sided limits") {
  const Complex up = w0_complex(Complex(-1.0, 1e-8));
  const Complex dn = w0_complex(Complex(-1.0, -1e-8));
  CHECK(up.imag() == doctest::Approx(1.3372357014306894).epsilon(1e-6));
  CHECK(dn.imag() == doctest::Approx(-1.3372357014306894).epsilon(1e-6));
  CHECK(std::abs(up - std::conj(dn)) <= 1e-12 * (1.0 + std::abs(up)));
}

TEST_CASE("w0_complex rejects points on the cut") {
  CHECK_THROWS_AS((void)w0_complex(Complex(-1.0, 0.0)), CutError);
  CHECK_THROWS_AS((void)w0_complex(Complex(-kInvE, 0.0)), CutError);
  CHECK_NOTHROW((void)w0_complex(Complex(-kInvE + 1e-6, 0.0)));
}

TEST_CASE("w0_complex frozen references across the mid annulus") {
  auto check_pt = [](double zr, double zi, double wr, double wi) {
    const Complex w = w0_complex(Complex(zr, zi));
    CHECK(w.real() == doctest::Approx(wr).epsilon(1e-13));
    CHECK(w.imag() == doctest::Approx(wi).epsilon(1e-13));
  };
  check_pt(0.2, -0.05, 0.170123337669733982, -0.0360669880900042966);
  check_pt(0.5, 0.3, 0.372030602393499977, 0.15216601010301542);
  check_pt(-0.7, -0.7, 0.0968251723703640551, -0.893359903912657324);
  check_pt(0.0, 1.5, 0.545153223345237368, 0.677542092022338551);
  check_pt(-1.0, 0.3, -0.123393171389472863, 1.17467921313107335);
  check_pt(-1.0, -0.3, -0.123393171389472863, -1.17467921313107335);
  check_pt(-1.8, 0.3, 0.175699399357118191, 1.52067778229630685);
  check_pt(-2.8, 1.0, 0.572622769671938754, 1.57623347100763347);
  check_pt(-5.0, 2.0, 0.997719338871971863, 1.7167475505805913);
  check_pt(4.0, -3.0, 1.30494295311171723, -0.368371064297196736);
  check_pt(0.06, -0.005, 0.0567124959589485646, -0.00447082244199945977);
  check_pt(-0.3, 0.2, -0.262533712437773232, 0.388394796424373811);
}

TEST_CASE("w0_complex stays on the principal branch over a polar sweep") {
  // residual alone cannot separate branches; the sign and range of Im w can:
  // for Im z > 0 the principal value satisfies 0 < Im w < pi, conjugate below
  std::vector<double> mags;
  for (double m = 1e-3; m <= 3e8; m *= 3.7) mags.push_back(m);
  for (double m : {0.06, 0.3, 0.37, 0.45, 1.0, 2.0, 6.0}) mags.push_back(m);
  for (double m : mags) {
    for (int k = -23; k <= 23; ++k) {
      if (k == 0) continue;
      const Complex z = std::polar(m, kPi * k / 23.5);
      const Complex w = w0_complex(z);
      CHECK(std::abs(w * std::exp(w) - z) <= 1e-11 * std::abs(z));
      if (z.imag() > 0.0) {
        CHECK(w.imag() > 0.0);
        CHECK(w.imag() < kPi);
      } else {
        CHECK(w.imag() < 0.0);
        CHECK(w.imag() > -kPi);
      }
    }
  }
}

TEST_CASE("w0_cut_limit frozen references and residuals") {
  for (const auto& ref : kCutRefs) {
    const Complex w = w0_cut_limit(ref.x, BranchSide::above);
    CHECK(w.real() == doctest::Approx(ref.re).epsilon(1e-12));
    CHECK(w.imag() == doctest::Approx(ref.im).epsilon(1e-12));
    const double res = std::abs(w * std::exp(w) - Complex(ref.x, 0.0));
    CHECK(res <= 1e-12 * (1.0 + std::abs(ref.x)));
  }
}

TEST_CASE("w0_cut_limit branch-point continuity") {
  const Complex w = w0_cut_limit(-kInvE - 1e-12, BranchSide::above);
  CHECK(w.real() == doctest::Approx(-1.0).epsilon(1e-6));
  CHECK(w.imag() > 0.0);
  CHECK(w.imag() < 1e-5);
}

TEST_CASE("w0_cut_limit imaginary part: in (0,pi), monotone, -> pi") {
  double prev = 0.0;
  for (const auto& ref : kCutRefs) {
    const double im = w0_cut_limit(ref.x, BranchSide::above).imag();
    CHECK(im > 0.0);
    CHECK(im < kPi);
    CHECK(im > prev);
    prev = im;
  }
  CHECK(kPi - w0_cut_limit(-1e6, BranchSide::above).imag() < 0.25);
}

TEST_CASE("w0_cut_limit sides are conjugate") {
  const Complex above = w0_cut_limit(-2.0, BranchSide::above);
  const Complex below = w0_cut_limit(-2.0, BranchSide::below);
  CHECK(std::abs(below - std::conj(above)) == 0.0);
  CHECK_THROWS_AS((void)w0_cut_limit(-kInvE, BranchSide::above), DomainError);
  CHECK_THROWS_AS((void)w0_cut_limit(0.5, BranchSide::above), DomainError);
}

TEST_CASE("w0_prime_real values") {
  CHECK(w0_prime_real(0.0) == 1.0);
  CHECK(w0_prime_real(kE) == doctest::Approx(1.0 / (2.0 * kE)).epsilon(1e-14));
  CHECK(w0_prime_real(10.0) == doctest::Approx(0.06357713346934510514).epsilon(1e-13));
  CHECK(w0_prime_real(1.0) == doctest::Approx(0.3618962566348892215).epsilon(1e-13));
  CHECK(w0_prime_real(5.0) == doctest::Approx(0.1140422573466890998).epsilon(1e-13));
  CHECK_THROWS_AS((void)w0_prime_real(-kInvE), DomainError);
  CHECK_THROWS_AS((void)w0_prime_real(-1.0), DomainError);
}

TEST_CASE("w0_prime_real matches central finite differences") {
  // the t = 10 oracle from the operation contract
  {
    const double h = 1e-4;
    const double fd = (w0_real(10.0 + h) - w0_real(10.0 - h)) / (2.0 * h);
    CHECK(std::abs(w0_prime_real(10.0) - fd) < 1e-8);
  }
  // 1e-7 relative over [0.1, 100]
  for (int i = 0; i <= 60; ++i) {
    const double t = 0.1 * std::pow(1000.0, i / 60.0);
    const double h = 1e-4 * (1.0 + t);
    const double fd = (w0_real(t + h) - w0_real(t - h)) / (2.0 * h);
    CHECK(std::abs(w0_prime_real(t) - fd) <= 1e-7 * std::abs(fd));
  }
}

TEST_CASE("w0_prime_real is positive and nonincreasing on [0, inf)") {
  double prev = 2.0;
  for (int i = 0; i <= 300; ++i) {
    const double t = i * 0.1;
    const double d = w0_prime_real(t);
    CHECK(d > 0.0);
    CHECK(d <= prev + 1e-15);
    prev = d;
  }
}

TEST_CASE("w0_prime_cut_limit frozen references, conjugation, decay") {
  const Complex d1 = w0_prime_cut_limit(-1.0, BranchSide::above);
  CHECK(d1.real() == doctest::Approx(-0.6973702056886965281).epsilon(1e-12));
  CHECK(d1.imag() == doctest::Approx(-0.5934976734644826134).epsilon(1e-12));
  const Complex d1b = w0_prime_cut_limit(-1.0, BranchSide::below);
  CHECK(std::abs(d1b - std::conj(d1)) == 0.0);

  const Complex d10 = w0_prime_cut_limit(-10.0, BranchSide::above);
  CHECK(d10.real() == doctest::Approx(-0.0767586090981951754).epsilon(1e-12));
  CHECK(d10.imag() == doctest::Approx(-0.0209879734353657057).epsilon(1e-12));

  // magnitude -> 0 as x -> -inf
  const Complex dbig = w0_prime_cut_limit(-1e6, BranchSide::above);
  CHECK(std::abs(dbig) == doctest::Approx(9.234377683e-7).epsilon(1e-8));
  CHECK(std::abs(w0_prime_cut_limit(-1e12, BranchSide::above)) < std::abs(dbig));
}

TEST_CASE("w0_prime_branch_series values") {
  // real side of the branch point
  // tolerance reflects conditioning: the half-ulp error of the stored 1/e
  // perturbs delta = z + 1/e by ~3e-9 relative at delta = 1e-8
  const Complex f = w0_prime_branch_series(Complex(-kInvE + 1e-8, 0.0));
  CHECK(f.real() == doctest::Approx(11656.40802127575678).epsilon(2e-9));
  CHECK(std::abs(f.imag()) < 1e-9);

  // leading behavior on the upper side of the cut: Im ~ -sqrt(e/2)/sqrt(eps)
  const double eps = 1e-6;
  const Complex g = w0_prime_branch_series(-(kInvE + eps), BranchSide::above);
  CHECK(g.imag() == doctest::Approx(-std::sqrt(kE / 2.0) / std::sqrt(eps)).epsilon(1e-3));
  CHECK(g.real() == doctest::Approx(-1.8121831785494858).epsilon(1e-10));
  CHECK(g.imag() == doctest::Approx(-1165.8190858721457895).epsilon(1e-11));
  // conjugate on the lower side
  const Complex gb = w0_prime_branch_series(-(kInvE + eps), BranchSide::below);
  CHECK(std::abs(gb - std::conj(g)) == 0.0);

  CHECK_THROWS_AS((void)w0_prime_branch_series(Complex(-kInvE, 0.0)), DomainError);
  CHECK_THROWS_AS((void)w0_prime_branch_series(Complex(0.0, 0.0)), DomainError);
  CHECK_THROWS_AS((void)w0_prime_branch_series(-1.0, BranchSide::above), DomainError);
}

TEST_CASE("series and iteration agree on the annulus around the branch point") {
  for (int i = 0; i <= 30; ++i) {
    const double eps = 1e-6 * std::pow(1e3, i / 30.0) * 0.999;
    // on the cut, both sides
    for (const auto side : {BranchSide::above, BranchSide::below}) {
      const Complex a = w0_prime_branch_series(-(kInvE + eps), side);
      const Complex b = w0_prime_cut_limit(-(kInvE + eps), side);
      CHECK(rel_diff(a, b) < 1e-6);
    }
    // right of the branch point the derivative is real
    const Complex c = w0_prime_branch_series(Complex(-kInvE + eps, 0.0));
    const double w = w0_real(-kInvE + eps);
    const double direct = w / ((-kInvE + eps) * (1.0 + w));
    CHECK(std::abs(c.real() - direct) / std::abs(direct) < 1e-6);
  }
}

TEST_CASE("asymptotic representations") {
  CHECK(w0_asymptotic(std::exp(kE)) == doctest::Approx(kE - 1.0).epsilon(1e-14));
  CHECK(std::abs(w0_asymptotic(1e6) / w0_real(1e6) - 1.0) < 0.02);
  CHECK(w0_prime_asymptotic(10.0) ==
        doctest::Approx(0.1 - 1.0 / (10.0 + std::log(10.0))).epsilon(1e-14));
  CHECK_THROWS_AS((void)w0_asymptotic(kE), DomainError);
  CHECK_THROWS_AS((void)w0_asymptotic(0.5), DomainError);
  CHECK_THROWS_AS((void)w0_prime_asymptotic(1.0), DomainError);

  // deviation |W/(log t - log log t) - 1| decreases along 1e3, 1e4, 1e6
  const double d3 = std::abs(w0_real(1e3) / w0_asymptotic(1e3) - 1.0);
  const double d4 = std::abs(w0_real(1e4) / w0_asymptotic(1e4) - 1.0);
  const double d6 = std::abs(w0_real(1e6) / w0_asymptotic(1e6) - 1.0);
  CHECK(d3 == doctest::Approx(0.05517310718).epsilon(1e-8));
  CHECK(d4 == doctest::Approx(0.0345968531).epsilon(1e-8));
  CHECK(d6 == doctest::Approx(0.01730512168).epsilon(1e-8));
  CHECK(d3 > d4);
  CHECK(d4 > d6);
  CHECK(d6 <= 0.02);
}
