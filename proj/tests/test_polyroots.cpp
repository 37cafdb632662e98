#include "hrfe/polyroots.hpp"

#include <doctest.h>

#include <cmath>
#include <random>

using namespace hrfe;
using cplx = std::complex<double>;

namespace {

CVecXd coeffs(std::initializer_list<cplx> list) {
  CVecXd c(static_cast<Index>(list.size()));
  Index i = 0;
  for (const cplx& v : list) c[i++] = v;
  return c;
}

}  // namespace

TEST_SUITE("polyroots") {

TEST_CASE("horner evaluation") {
  // 2 + 3z + z^2 at z = 2 -> 12
  CVecXd c = coeffs({2.0, 3.0, 1.0});
  CHECK(std::abs(poly_eval(c, cplx(2.0, 0.0)) - cplx(12.0, 0.0)) < 1e-15);
  CHECK(std::abs(poly_eval(c, cplx(0.0, 0.0)) - cplx(2.0, 0.0)) < 1e-15);
  // at z = i: 2 + 3i - 1 = 1 + 3i
  CHECK(std::abs(poly_eval(c, cplx(0.0, 1.0)) - cplx(1.0, 3.0)) < 1e-15);

  CHECK_THROWS_AS(poly_eval(CVecXd(), cplx(1.0, 0.0)), std::invalid_argument);
}

TEST_CASE("linear and quadratic roots") {
  // 3 - z  ->  z = 3
  auto lin = poly_roots(coeffs({3.0, -1.0}));
  REQUIRE(lin.roots.size() == 1);
  CHECK(std::abs(lin.roots[0] - cplx(3.0, 0.0)) < 1e-12);

  // (z-1)(z+2) = -2 + z + z^2
  auto quad = poly_roots(coeffs({-2.0, 1.0, 1.0}));
  REQUIRE(quad.roots.size() == 2);
  // sorted by real part
  CHECK(std::abs(quad.roots[0] - cplx(-2.0, 0.0)) < 1e-12);
  CHECK(std::abs(quad.roots[1] - cplx(1.0, 0.0)) < 1e-12);

  // z^2 + 1 -> +-i, sorted by imaginary part at equal real part
  auto conj = poly_roots(coeffs({1.0, 0.0, 1.0}));
  CHECK(std::abs(conj.roots[0] - cplx(0.0, -1.0)) < 1e-12);
  CHECK(std::abs(conj.roots[1] - cplx(0.0, 1.0)) < 1e-12);
}

TEST_CASE("unit-circle conjugate pair") {
  // (z - e^{j th})(z - e^{-j th}) = 1 - 2 cos(th) z + z^2
  const double th = 2.0 * 3.14159265358979323846 * 0.0705;
  auto r = poly_roots(coeffs({1.0, -2.0 * std::cos(th), 1.0}));
  REQUIRE(r.roots.size() == 2);
  CHECK(std::abs(r.roots[0] - std::polar(1.0, -th)) < 1e-12);
  CHECK(std::abs(r.roots[1] - std::polar(1.0, th)) < 1e-12);
}

TEST_CASE("leading zero coefficients are stripped") {
  // 3 - z plus two zero high-order terms still has the single root 3
  auto r = poly_roots(coeffs({3.0, -1.0, 0.0, 0.0}));
  REQUIRE(r.roots.size() == 1);
  CHECK(std::abs(r.roots[0] - cplx(3.0, 0.0)) < 1e-12);
  // echo keeps the caller's coefficients
  CHECK(r.coefficients.size() == 4);
}

TEST_CASE("degenerate inputs throw") {
  CHECK_THROWS_AS(poly_roots(coeffs({1.0})), std::invalid_argument);
  CHECK_THROWS_AS(poly_roots(coeffs({0.0, 0.0})), std::invalid_argument);
  CHECK_THROWS_AS(poly_roots(CVecXd()), std::invalid_argument);
}

TEST_CASE("random polynomials: every reported root is a root") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> uni(-1.0, 1.0);
  for (int trial = 0; trial < 200; ++trial) {
    const Index deg = 1 + static_cast<Index>(rng() % 12);
    CVecXd c(deg + 1);
    for (Index k = 0; k <= deg; ++k) c[k] = cplx(uni(rng), uni(rng));
    if (std::abs(c[deg]) < 0.1) c[deg] += cplx(0.5, 0.0);

    auto r = poly_roots(c);
    REQUIRE(r.roots.size() == deg);
    const double cmax = c.cwiseAbs().maxCoeff();
    for (Index k = 0; k < deg; ++k) {
      const cplx z = r.roots[k];
      const double bound =
          1e-8 * cmax * std::pow(1.0 + std::abs(z), static_cast<double>(deg));
      CHECK(std::abs(poly_eval(c, z)) <= bound);
    }
    // sort order is (real, imag)
    for (Index k = 1; k < deg; ++k) {
      const cplx a = r.roots[k - 1], b = r.roots[k];
      CHECK((a.real() < b.real() ||
             (a.real() == b.real() && a.imag() <= b.imag())));
    }
  }
}

TEST_CASE("real-coefficient polynomials yield conjugate-closed root sets") {
  std::mt19937_64 rng(13);
  std::uniform_real_distribution<double> uni(-1.0, 1.0);
  for (int trial = 0; trial < 50; ++trial) {
    const Index deg = 2 + static_cast<Index>(rng() % 8);
    CVecXd c(deg + 1);
    for (Index k = 0; k <= deg; ++k) c[k] = cplx(uni(rng), 0.0);
    if (std::abs(c[deg]) < 0.1) c[deg] += cplx(0.5, 0.0);
    auto r = poly_roots(c);
    for (Index k = 0; k < deg; ++k) {
      const cplx z = std::conj(r.roots[k]);
      double best = 1e300;
      for (Index j = 0; j < deg; ++j) best = std::min(best, std::abs(r.roots[j] - z));
      CHECK(best < 1e-6);
    }
  }
}

}  // TEST_SUITE
