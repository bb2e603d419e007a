#include <doctest.h>

#include <cmath>
#include <vector>

#include "archetypal/chain.hpp"
#include "archetypal/errors.hpp"
#include "archetypal/presets.hpp"
#include "archetypal/stats.hpp"

using namespace archetypal;

TEST_CASE("deterministic trajectory: alpha = 2, beta = 0 doubles") {
  const auto spec = MeasureSpec::discrete({{2.0, 0.0, 1.0}});
  RngStream rng(0, 0);
  const auto path = chain::simulate(spec, 1.0, 3, rng);
  REQUIRE(path.steps.size() == 3);
  CHECK(path.steps[0].x == doctest::Approx(2.0));
  CHECK(path.steps[1].x == doctest::Approx(4.0));
  CHECK(path.steps[2].x == doctest::Approx(8.0));
  CHECK(path.steps[2].a == doctest::Approx(8.0));
  CHECK(path.steps[2].b == doctest::Approx(0.0));
  CHECK(path.steps[2].d == doctest::Approx(0.0));
  CHECK(!path.overflowed);
}

TEST_CASE("the degenerate fixed point is invariant") {
  // alpha = 2, beta = 1 fixes c = 2.
  const auto spec = MeasureSpec::discrete({{2.0, 1.0, 1.0}});
  RngStream rng(1, 0);
  const auto path = chain::simulate(spec, 2.0, 5, rng);
  for (const auto& st : path.steps) CHECK(st.x == doctest::Approx(2.0));
}

TEST_CASE("X_n factorizations agree along random paths") {
  // X_n = A_n (x0 - B_n) and D_n = A_n B_n step by step.
  for (const char* name : {"de_rham", "negative_alpha_demo", "subcritical_demo"}) {
    const auto spec = presets::preset(name);
    for (std::uint64_t s = 0; s < 50; ++s) {
      RngStream rng(11, s);
      const auto path = chain::simulate(spec, 0.7, 12, rng);
      double a = 1.0, b = 0.0;
      for (const auto& st : path.steps) {
        b += st.beta / a;
        a *= st.alpha;
        CHECK(st.a == doctest::Approx(a).epsilon(1e-12));
        CHECK(st.b == doctest::Approx(b).epsilon(1e-12));
        CHECK(st.d == doctest::Approx(a * b).epsilon(1e-12));
        CHECK(st.x == doctest::Approx(a * (0.7 - b)).epsilon(1e-9));
      }
    }
  }
}

TEST_CASE("simulate truncates on floating-point overflow") {
  const auto spec = MeasureSpec::discrete({{1e200, 1.0, 1.0}});
  RngStream rng(0, 0);
  const auto path = chain::simulate(spec, 0.0, 10, rng);
  CHECK(path.overflowed);
  CHECK(path.steps.size() < 10);
}

TEST_CASE("reversed tail sum: deterministic geometric case") {
  // alpha = 1/2, beta = 1: sum_{i<=n} A_i = 1 - 2^{-n}.
  const auto spec = MeasureSpec::discrete({{0.5, 1.0, 1.0}});
  RngStream rng(0, 0);
  CHECK(chain::reversed_tail_sum(spec, 3, rng) == doctest::Approx(0.875).epsilon(1e-15));
  RngStream rng2(0, 0);
  CHECK(chain::reversed_tail_sum(spec, 20, rng2) ==
        doctest::Approx(1.0 - std::pow(2.0, -20.0)).epsilon(1e-15));
}

TEST_CASE("reversed tail sum vanishes when beta = 0") {
  const auto spec = MeasureSpec::discrete({{2.0, 0.0, 0.5}, {0.5, 0.0, 0.5}});
  RngStream rng(3, 0);
  CHECK(chain::reversed_tail_sum(spec, 10, rng) == 0.0);
}

TEST_CASE("forward and reversed partial sums agree in law") {
  // D_n and the reversed sum are the same polynomial in (alpha_i, beta_i)
  // read in opposite orders, so their laws coincide at every n.
  const auto spec = presets::preset("de_rham");
  const std::size_t n = 4000;
  std::vector<double> fwd(n), rev(n);
  for (std::size_t i = 0; i < n; ++i) {
    RngStream ra(21, i), rb(22, i);
    fwd[i] = chain::simulate(spec, 0.0, 8, ra).steps.back().d;
    rev[i] = chain::reversed_tail_sum(spec, 8, rb);
  }
  CHECK(stats::two_sample_ks(fwd, rev) < 0.035);
}

TEST_CASE("stopping time at the first negative product") {
  // alpha = -2 always: tau = 1, A_tau = -2 on every path.
  const auto always = MeasureSpec::discrete({{-2.0, 1.0, 1.0}});
  RngStream rng(5, 0);
  const auto run = chain::stopping_time_negative(always, rng);
  CHECK(run.terminated);
  CHECK(run.tau == 1);
  CHECK(run.a_tau == -2.0);

  // q = 0: the stopped functional is undefined.
  RngStream rng2(5, 0);
  CHECK_THROWS_AS(chain::stopping_time_negative(presets::preset("de_rham"), rng2),
                  NotApplicableError);
}

TEST_CASE("tau is geometric(1/2) for the negative-alpha demo") {
  const auto spec = presets::preset("negative_alpha_demo");
  const std::size_t n = 20000;
  std::size_t tau1 = 0;
  double mean = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    RngStream rng(6, i);
    const auto run = chain::stopping_time_negative(spec, rng);
    REQUIRE(run.terminated);
    CHECK(run.a_tau < 0.0);
    if (run.tau == 1) ++tau1;
    mean += static_cast<double>(run.tau);
  }
  CHECK(static_cast<double>(tau1) / n == doctest::Approx(0.5).epsilon(0.03));
  CHECK(mean / n == doctest::Approx(2.0).epsilon(0.03));
}

TEST_CASE("wald identity on the demo specs") {
  const auto rep = chain::wald_check(presets::preset("negative_alpha_demo"), 30000, 7);
  CHECK(rep.excluded == 0);
  CHECK(rep.n == 30000);
  CHECK(rep.rhs == doctest::Approx(std::log(6.0)).epsilon(1e-12));
  CHECK(std::abs(rep.lhs - rep.rhs) < 4.0 * rep.lhs_stderr);
  CHECK(std::abs(rep.mean_tau - 2.0) < 4.0 * rep.mean_tau_stderr);

  // Deterministic tau: every run stops at 1 with A = -2, so the estimate is
  // exact and the spread collapses.
  const auto det = chain::wald_check(MeasureSpec::discrete({{-2.0, 1.0, 1.0}}), 1000, 0);
  CHECK(det.lhs == doctest::Approx(std::log(2.0)).epsilon(1e-12));
  CHECK(det.lhs_stderr < 1e-12);
  CHECK(det.mean_tau == 1.0);
  CHECK(det.rhs == doctest::Approx(std::log(2.0)).epsilon(1e-12));
}

TEST_CASE("wald_check rejects inapplicable specs") {
  CHECK_THROWS_AS(chain::wald_check(presets::preset("de_rham"), 100, 0), NotApplicableError);
  // q > 0 but K < 0: the identity's right side is negative; it only holds
  // for K > 0.
  const auto sub_neg = MeasureSpec::discrete({{-0.5, 1.0, 0.5}, {0.5, 1.0, 0.5}});
  CHECK_THROWS_AS(chain::wald_check(sub_neg, 100, 0), RegimeError);
}

TEST_CASE("wald_check is worker-independent") {
  const auto spec = presets::preset("negative_alpha_demo");
  const auto r1 = chain::wald_check(spec, 5000, 3, 10000, 1);
  const auto r4 = chain::wald_check(spec, 5000, 3, 10000, 4);
  CHECK(r1.lhs == r4.lhs);
  CHECK(r1.mean_tau == r4.mean_tau);
  CHECK(r1.lhs_stderr == r4.lhs_stderr);
}

TEST_CASE("martingale property of approximate solutions") {
  // Exact solution oracle for the Bernoulli convolution: F(x) = (x+2)/4.
  const auto spec = MeasureSpec::discrete({{2.0, -1.0, 0.5}, {2.0, 1.0, 0.5}});
  const auto y = GridFunction::sampled(-6.0, 6.0, 1201, [](double x) {
    return std::min(1.0, std::max(0.0, (x + 2.0) / 4.0));
  });
  const auto rep = chain::martingale_check(spec, y, 0.5, 6, 20000, 9);
  CHECK(rep.reference == doctest::Approx(0.625).epsilon(1e-12));
  CHECK(std::abs(rep.estimate - rep.reference) < std::max(4.0 * rep.stderr_, 0.02));

  // A non-solution drifts: f(x) = x on a wide grid under doubling.
  const auto bad = GridFunction::sampled(-500.0, 500.0, 2001, [](double x) { return x; });
  const auto drift = chain::martingale_check(MeasureSpec::discrete({{2.0, 0.0, 1.0}}), bad, 1.0,
                                             5, 50, 9);
  CHECK(drift.reference == doctest::Approx(1.0));
  CHECK(drift.estimate == doctest::Approx(32.0).epsilon(1e-6));
}
