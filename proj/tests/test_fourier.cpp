#include <doctest.h>

#include <cmath>
#include <complex>
#include <vector>

#include "archetypal/errors.hpp"
#include "archetypal/fourier.hpp"
#include "archetypal/presets.hpp"

using namespace archetypal;
using cplx = std::complex<double>;

namespace {
MeasureSpec bernoulli2() { return presets::preset("bernoulli_convolution", {{"a", 2.0}}); }
double sinc2(double s) { return std::sin(2.0 * s) / (2.0 * s); }
}  // namespace

TEST_CASE("beta characteristic function closed forms") {
  // Symmetric two-point beta: E e^{it beta} = cos t.
  const auto b2 = bernoulli2();
  for (double t : {0.3, 1.0, -2.5}) {
    const cplx v = fourier::beta_charfn(b2, t);
    CHECK(v.real() == doctest::Approx(std::cos(t)).epsilon(1e-15));
    CHECK(v.imag() == doctest::Approx(0.0));
  }
  CHECK(fourier::beta_charfn(b2, 0.0) == cplx(1.0, 0.0));

  // Exponential(2) at t = 1: 2/(2 - i) = (0.8, 0.4).
  const auto pant = MeasureSpec::product(Marginal::point_mass(2.0), Marginal::exponential(2.0));
  const cplx e = fourier::beta_charfn(pant, 1.0);
  CHECK(e.real() == doctest::Approx(0.8).epsilon(1e-14));
  CHECK(e.imag() == doctest::Approx(0.4).epsilon(1e-14));

  // Uniform[0,1] at t = pi: (e^{i pi} - 1)/(i pi) = 2i/pi.
  const auto uni = MeasureSpec::product(Marginal::point_mass(2.0), Marginal::uniform(0.0, 1.0));
  const cplx u = fourier::beta_charfn(uni, std::acos(-1.0));
  CHECK(u.real() == doctest::Approx(0.0).epsilon(1e-14));
  CHECK(u.imag() == doctest::Approx(2.0 / std::acos(-1.0)).epsilon(1e-14));
  CHECK(fourier::beta_charfn(uni, 0.0) == cplx(1.0, 0.0));

  // Conjugate symmetry.
  for (double t : {0.7, 3.0}) {
    const cplx plus = fourier::beta_charfn(pant, t);
    const cplx minus = fourier::beta_charfn(pant, -t);
    CHECK(std::abs(minus - std::conj(plus)) < 1e-15);
  }
}

TEST_CASE("monte carlo characteristic function of the series") {
  const auto spec = bernoulli2();
  std::vector<double> s{0.0, 0.5, 1.0, 2.0, 5.0, 10.0};
  const auto grid = fourier::charfn(spec, s, 20000, 3);
  REQUIRE(grid.values.size() == s.size());

  // s = 0 is exact in IEEE arithmetic: a mean of exact ones.
  CHECK(grid.values[0].real() == 1.0);
  CHECK(grid.values[0].imag() == 0.0);

  // The law of Upsilon is uniform on [-2,2]: phi(s) = sin(2s)/(2s).
  for (std::size_t i = 1; i < s.size(); ++i) {
    CHECK(std::abs(grid.values[i] - cplx(sinc2(s[i]))) < 0.03);
    CHECK(std::abs(grid.values[i]) <= 1.0 + 1e-12);
  }
}

TEST_CASE("degenerate series gives a pure phase") {
  const auto degen = MeasureSpec::discrete({{2.0, 1.0, 1.0}});
  const auto grid = fourier::charfn(degen, {1.0, 3.0}, 200, 0);
  CHECK(std::abs(grid.values[0] - std::exp(cplx(0.0, 2.0))) < 1e-9);
  CHECK(std::abs(grid.values[1] - std::exp(cplx(0.0, 6.0))) < 1e-9);
}

TEST_CASE("charfn is worker-independent bit for bit") {
  const auto spec = presets::preset("de_rham");
  const std::vector<double> s{0.1, 1.0, 7.0};
  const auto g1 = fourier::charfn(spec, s, 10000, 11, {}, 1);
  const auto g3 = fourier::charfn(spec, s, 10000, 11, {}, 3);
  for (std::size_t i = 0; i < s.size(); ++i) {
    CHECK(g1.values[i].real() == g3.values[i].real());
    CHECK(g1.values[i].imag() == g3.values[i].imag());
  }
}

TEST_CASE("frequency-domain recursion: exact one-step identity") {
  // z_1(s) = E e^{is beta} * z_0(s / alpha) with alpha a point mass.
  const auto spec = bernoulli2();
  const auto z0 = [](double s) { return cplx(std::exp(-s * s)); };
  const std::vector<double> s{0.4, 1.3, 2.0};
  const auto out = fourier::fourier_iterate(spec, z0, s, 1, 1, 0);
  for (std::size_t i = 0; i < s.size(); ++i) {
    const cplx expect = std::cos(s[i]) * std::exp(-0.25 * s[i] * s[i]);
    CHECK(std::abs(out.values[i] - expect) < 1e-14);
  }

  // Contracting alpha rescales the other way.
  const auto half = MeasureSpec::discrete({{0.5, 1.0, 1.0}});
  const auto out2 = fourier::fourier_iterate(half, z0, {0.3}, 1, 1, 0);
  const cplx expect2 = std::exp(cplx(0.0, 0.3)) * std::exp(-cplx(0.36, 0.0));
  CHECK(std::abs(out2.values[0] - expect2) < 1e-14);
}

TEST_CASE("deep exact recursion converges to the closed form") {
  // Viete's product: prod cos(s/2^k) -> sin(2s)/(2s) with z0 = 1.
  const auto spec = bernoulli2();
  const std::vector<double> s{0.1, 0.5, 1.0, 2.0, 5.0, 10.0};
  const auto out =
      fourier::fourier_iterate(spec, [](double) { return cplx(1.0); }, s, 40, 1, 0);
  for (std::size_t i = 0; i < s.size(); ++i)
    CHECK(std::abs(out.values[i] - cplx(sinc2(s[i]))) < 1e-6);
}

TEST_CASE("simulated recursion agrees with the exact path") {
  const auto spec = bernoulli2();
  const auto z0 = [](double s) { return cplx(std::exp(-s * s)); };
  const std::vector<double> s{0.3, 1.0, 3.0};
  const auto exact = fourier::fourier_iterate(spec, z0, s, 6, 1, 5);
  const auto mc = fourier::fourier_iterate(spec, z0, s, 6, 30000, 5, true);
  for (std::size_t i = 0; i < s.size(); ++i)
    CHECK(std::abs(exact.values[i] - mc.values[i]) < 0.03);

  // The simulated path is itself deterministic across worker counts.
  const auto mc3 = fourier::fourier_iterate(spec, z0, s, 6, 30000, 5, true, 3);
  for (std::size_t i = 0; i < s.size(); ++i) CHECK(mc.values[i] == mc3.values[i]);
}

TEST_CASE("recursion refuses sign-mixing specs") {
  const auto neg = presets::preset("negative_alpha_demo");
  CHECK_THROWS_AS(fourier::fourier_iterate(neg, [](double) { return cplx(1.0); }, {1.0}, 3, 10, 0),
                  NotApplicableError);
}

TEST_CASE("alternation probe: exact signs at s = 0") {
  const auto spec = presets::preset("negative_alpha_demo");
  const auto rep = fourier::alternation_probe(spec, {0.0, 0.05}, 1, 20, 2000, 1);
  CHECK(rep.excluded == 0);
  REQUIRE(rep.rows.size() == 20);
  for (const auto& row : rep.rows) {
    const double sign = (row.n % 2 == 0) ? 1.0 : -1.0;
    CHECK(row.values[0].real() == sign);
    CHECK(row.values[0].imag() == 0.0);
    CHECK(row.re_stderr[0] == 0.0);
  }
}

TEST_CASE("alternation probe: alternating sign with large magnitude at s = 0.05") {
  const auto spec = presets::preset("negative_alpha_demo");
  const auto rep = fourier::alternation_probe(spec, {0.05}, 10, 20, 10000, 1);
  for (const auto& row : rep.rows) {
    const double sign = (row.n % 2 == 0) ? 1.0 : -1.0;
    const double re = row.values[0].real();
    CHECK(re * sign > 0.5);  // alternates with the parity of n, |re| > 0.5
    CHECK(row.re_stderr[0] < 0.01);
  }
}

TEST_CASE("alternation rows do not depend on the requested window") {
  const auto spec = presets::preset("negative_alpha_demo");
  const auto narrow = fourier::alternation_probe(spec, {0.05}, 12, 14, 500, 2);
  const auto wide = fourier::alternation_probe(spec, {0.05}, 10, 20, 500, 2);
  CHECK(narrow.rows[0].values[0] == wide.rows[2].values[0]);
  CHECK(narrow.rows[2].values[0] == wide.rows[4].values[0]);
}

TEST_CASE("alternation probe error routing") {
  CHECK_THROWS_AS(fourier::alternation_probe(bernoulli2(), {0.1}, 1, 5, 100, 0),
                  NotApplicableError);
  const auto sub_neg = MeasureSpec::discrete({{-0.5, 1.0, 0.5}, {0.5, 1.0, 0.5}});
  CHECK_THROWS_AS(fourier::alternation_probe(sub_neg, {0.1}, 1, 5, 100, 0), RegimeError);
  const auto neg = presets::preset("negative_alpha_demo");
  CHECK_THROWS_AS(fourier::alternation_probe(neg, {}, 1, 5, 100, 0), SpecError);
  CHECK_THROWS_AS(fourier::alternation_probe(neg, {0.1}, 3, 2, 100, 0), SpecError);
}

TEST_CASE("default frequency grid") {
  const auto s = fourier::default_s_values();
  REQUIRE(s.size() == 257);
  CHECK(s[0] == 0.0);
  CHECK(s[1] == doctest::Approx(0.01));
  CHECK(s.back() == doctest::Approx(100.0));
  for (std::size_t i = 2; i < s.size(); ++i) CHECK(s[i] > s[i - 1]);
}
