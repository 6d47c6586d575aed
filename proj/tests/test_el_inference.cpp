#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>

#include "dyadkde/el_inference.hpp"
#include "dyadkde/errors.hpp"
#include "oracle.hpp"

using namespace dyadkde;

namespace {

const KernelSpec kEpan{};

ErrorKind kind_of(auto&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("expected an error");
  return ErrorKind::InvalidArgument;
}

double rel_err(double a, double b, double scale) {
  return std::fabs(a - b) / std::max({std::fabs(a), std::fabs(b), scale});
}

// Sample whose mask is full but whose estimates come from the incomplete
// formulas (p_hat stays 1).
LeaveOutEstimates forced_incomplete(const DyadicSample& s, double x, double h) {
  KernelSums k = kernel_sums(s, kEpan, x, h);
  k.n_observed -= 1;
  return leave_out_estimates(k);
}

}  // namespace

TEST_CASE("symmetric sample has zero pseudo-values") {
  const double x = 0.3;
  const DyadicSample s(4, std::vector<double>(6, x));
  const PointInference inf(s, kEpan, x, 1.0);
  CHECK(inf.theta_hat() == 0.75);
  const PseudoValueSet pv = inf.pseudo_values(0.75);
  for (double v : pv.v_at_theta) CHECK(std::fabs(v) <= 1e-15);
  for (double q : pv.q) CHECK(std::fabs(q) <= 1e-15);
  CHECK(pv.gamma_sq <= 1e-30);
  CHECK(kind_of([&] { inf.wald_interval(0.05); }) == ErrorKind::NonPositiveModifiedVariance);
  CHECK(kind_of([&] { inf.mjel(0.7); }) == ErrorKind::NonPositiveModifiedVariance);
  CHECK(kind_of([&] { modified_pseudo_values(pv); }) == ErrorKind::NonPositiveModifiedVariance);
  // V(theta) = theta_hat - theta is one-signed away from theta_hat
  CHECK(inf.jel(0.75).statistic == 0.0);
  CHECK(inf.jel(0.5).statistic == std::numeric_limits<double>::infinity());
}

TEST_CASE("pseudo-values match brute force") {
  std::mt19937_64 rng(77);
  for (int t = 0; t < 200; ++t) {
    const std::size_t n = 4 + t % 3;
    const DyadicSample s = oracle::random_sample(rng, n, t % 3 == 2 ? 0.7 : 1.0);
    const double x = 0.2 * (t % 5) - 0.4;
    const double h = 1.0 + 0.1 * (t % 4);
    const PointInference inf(s, kEpan, x, h);
    const double theta = inf.theta_hat() * (0.5 + 0.01 * t);
    const PseudoValueSet pv = inf.pseudo_values(theta);
    const oracle::NaivePseudo naive =
        oracle::naive_pseudo(oracle::naive_estimates(s, kEpan, x, h), theta);
    const double vscale = std::max(oracle::max_abs(naive.v), 1e-300);
    for (std::size_t i = 0; i < n; ++i) {
      CHECK(rel_err(pv.v_at_theta[i], naive.v[i], 1e-12 * vscale) <= 1e-12);
    }
    double qscale = 1e-300;
    for (const auto& row : naive.q) qscale = std::max(qscale, oracle::max_abs(row));
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = i + 1; j < n; ++j) {
        CHECK(rel_err(pv.q[pair_index(n, i, j)], naive.q[i][j], qscale) <= 1e-12);
      }
    }
    CHECK(rel_err(pv.gamma_sq, naive.gamma_sq, 1e-300) <= 1e-12);
    CHECK(rel_err(pv.gamma_m_sq, naive.gamma_m_sq, 1e-12 * naive.gamma_sq) <= 1e-12);
  }
}

TEST_CASE("pseudo-value identities") {
  std::mt19937_64 rng(123);
  for (int t = 0; t < 500; ++t) {
    const std::size_t n = 4 + t % 25;
    const DyadicSample s = oracle::random_sample(rng, n, t % 2 ? 0.6 : 1.0);
    const PointInference inf(s, kEpan, 0.1, 0.9);
    const LeaveOutEstimates& est = inf.leave_out();
    const double th = est.theta_hat;
    const double nd = static_cast<double>(n);

    const auto& vh = inf.v_at_theta_hat();
    const double vsum = std::accumulate(vh.begin(), vh.end(), 0.0);
    CHECK(std::fabs(vsum) <= 1e-10);

    const double a = th + 0.37 * (t % 7) - 1.0;
    const double b = th * 1.5 + 0.01 * t;
    const auto va = jel_pseudo_values(est, a);
    const auto vb = jel_pseudo_values(est, b);
    double worst = 0.0;
    for (std::size_t i = 0; i < n; ++i) worst = std::max(worst, std::fabs((va[i] - vb[i]) - (b - a)));
    CHECK(worst <= 1e-12);
    CHECK(std::fabs(std::accumulate(va.begin(), va.end(), 0.0) / nd - (th - a)) <= 1e-12);

    const double qscale = std::max(oracle::max_abs(inf.q()), 1e-300);
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = i + 1; j < n; ++j) {
        const double q = inf.q()[pair_index(n, i, j)];
        CHECK(rel_err(pair_pseudo_value(est, i, j, 0.0), q, qscale) <= 1e-10);
        CHECK(rel_err(pair_pseudo_value(est, i, j, th + 17.3), q, qscale) <= 1e-10);
      }
    }

    const PseudoValueSet pv = pseudo_values(est, a);
    double vsq = 0.0, qsq = 0.0;
    for (double v : pv.v_at_theta_hat) vsq += v * v;
    for (double q : pv.q) qsq += q * q;
    CHECK(pv.gamma_m_sq + qsq / nd == doctest::Approx(vsq / nd).epsilon(1e-14));
    CHECK(pv.gamma_m_sq == inf.gamma_m_sq());

    CHECK(std::fabs(inf.jel(th).statistic) <= 1e-8);
    if (inf.gamma_m_sq() > 0.0) CHECK(std::fabs(inf.mjel(th).statistic) <= 1e-8);
  }
}

TEST_CASE("modified pseudo-values: closed form against the display formula") {
  std::mt19937_64 rng(9);
  int checked = 0;
  for (int t = 0; t < 100; ++t) {
    const DyadicSample s = oracle::random_sample(rng, 5 + t % 2);
    const PointInference inf(s, kEpan, 0.0, 1.2);
    if (!(inf.gamma_m_sq() > 0.0)) continue;
    ++checked;
    const double th = inf.theta_hat();
    const double theta = th + (t % 2 ? 0.01 : -0.01);
    const PseudoValueSet pv = inf.pseudo_values(theta);
    const auto closed = modified_pseudo_values(pv);
    const double ratio = std::sqrt(pv.gamma_sq) / std::sqrt(pv.gamma_m_sq);
    std::vector<double> display(pv.v_at_theta.size());
    for (std::size_t i = 0; i < display.size(); ++i) {
      display[i] = pv.v_at_theta_hat[i] - ratio * (pv.v_at_theta_hat[i] - pv.v_at_theta[i]);
      CHECK(std::fabs(closed[i] - display[i]) <= 1e-12 * std::max(1.0, std::fabs(display[i])));
    }
    const double a = inf.mjel(theta).statistic;
    const double b = el_log_ratio(display).statistic;
    CHECK(std::fabs(a - b) <= 1e-10 * std::max(1.0, std::fabs(b)));

    // theta_hat leaves V(theta_hat) unchanged
    const auto at_hat = modified_pseudo_values(inf.pseudo_values(th));
    for (std::size_t i = 0; i < at_hat.size(); ++i) CHECK(at_hat[i] == inf.v_at_theta_hat()[i]);

    // ratio one gives V^m = V
    PseudoValueSet same = pv;
    same.gamma_m_sq = same.gamma_sq;
    const auto vm = modified_pseudo_values(same);
    for (std::size_t i = 0; i < vm.size(); ++i) {
      CHECK(std::fabs(vm[i] - pv.v_at_theta[i]) <= 1e-12 * std::max(1.0, std::fabs(vm[i])));
    }
  }
  CHECK(checked > 50);
}

TEST_CASE("dual statistic agrees with the primal on n = 6") {
  std::mt19937_64 rng(606);
  int checked = 0;
  for (int t = 0; t < 40 && checked < 20; ++t) {
    const DyadicSample s = oracle::random_sample(rng, 6);
    const PointInference inf(s, kEpan, 0.0, 1.5);
    const double theta = inf.theta_hat() + 0.01;
    const auto v = jel_pseudo_values(inf.leave_out(), theta);
    const ElSolution d = inf.jel(theta);
    if (!d.feasible) continue;
    ++checked;
    CHECK(std::fabs(d.statistic - oracle::primal_el(v)) <= 1e-6);
  }
  CHECK(checked == 20);
}

TEST_CASE("full mask: incomplete formulas reduce to the complete ones") {
  std::mt19937_64 rng(55);
  for (int t = 0; t < 500; ++t) {
    const std::size_t n = 4 + t % 15;
    const DyadicSample s = oracle::random_sample(rng, n);
    const LeaveOutEstimates c = leave_out_estimates(kernel_sums(s, kEpan, 0.0, 1.0));
    const LeaveOutEstimates i = forced_incomplete(s, 0.0, 1.0);
    REQUIRE(i.incomplete);
    REQUIRE_FALSE(c.incomplete);
    CHECK(std::fabs(c.theta_hat - i.theta_hat) <= 1e-12 * c.theta_hat);
    const double th = c.theta_hat;
    for (double theta : {0.5 * th, th, 1.3 * th}) {
      const PseudoValueSet pc = pseudo_values(c, theta);
      const PseudoValueSet pi = pseudo_values(i, theta);
      CHECK(pi.incomplete);
      const double lc = el_log_ratio(pc.v_at_theta).statistic;
      const double li = el_log_ratio(pi.v_at_theta).statistic;
      if (std::isfinite(lc)) {
        CHECK(std::fabs(lc - li) <= 1e-12 * std::max(1.0, lc));
      } else {
        CHECK_FALSE(std::isfinite(li));
      }
      if (pc.gamma_m_sq > 0.0) {
        const double mc = el_log_ratio(modified_pseudo_values(pc)).statistic;
        const double mi = el_log_ratio(modified_pseudo_values(pi)).statistic;
        if (std::isfinite(mc)) {
          CHECK(std::fabs(mc - mi) <= 1e-12 * std::max(1.0, mc));
        } else {
          CHECK_FALSE(std::isfinite(mi));
        }
      }
    }
  }
}

TEST_CASE("critical values") {
  CHECK(chi2_critical_value(0.05) == doctest::Approx(3.841458820694124).epsilon(1e-12));
  CHECK(normal_critical_value(0.05) == doctest::Approx(1.959963984540054).epsilon(1e-12));
  const double z = normal_critical_value(0.05);
  CHECK(chi2_critical_value(0.05) == doctest::Approx(z * z).epsilon(1e-13));
  CHECK(chi2_critical_value(0.1) == doctest::Approx(2.705543454095404).epsilon(1e-12));
  CHECK(kind_of([] { chi2_critical_value(0.0); }) == ErrorKind::InvalidArgument);
  CHECK(kind_of([] { normal_critical_value(1.0); }) == ErrorKind::InvalidArgument);
}

TEST_CASE("intervals") {
  std::mt19937_64 rng(3);
  for (int t = 0; t < 60; ++t) {
    const std::size_t n = 10 + t;
    const DyadicSample s = oracle::random_sample(rng, n, t % 2 ? 0.5 : 1.0);
    const PointInference inf(s, kEpan, 0.5, 0.8);
    if (!(inf.gamma_m_sq() > 0.0)) continue;
    const InferenceResult w = inf.wald_interval(0.05);
    const double half = 1.959963984540054 * std::sqrt(inf.gamma_m_sq() / static_cast<double>(n));
    CHECK(w.upper - w.theta_hat == doctest::Approx(half).epsilon(1e-12));
    CHECK(w.theta_hat - w.lower == doctest::Approx(half).epsilon(1e-12));
    CHECK(inf.statistic(Method::MJKWald, w.upper) == doctest::Approx(1.959963984540054 * 1.959963984540054).epsilon(1e-9));

    for (Method m : {Method::JEL, Method::MJEL}) {
      const InferenceResult r = inf.invert_test(0.05, m);
      CHECK(r.critical_value == doctest::Approx(3.841458820694124).epsilon(1e-14));
      CHECK(r.lower <= r.theta_hat);
      CHECK(r.theta_hat <= r.upper);
      CHECK(r.lower >= 0.0);
      // endpoints sit on the level set up to the bisection tolerance
      CHECK(inf.statistic(m, r.upper - 1e-7) <= r.critical_value);
      CHECK(inf.statistic(m, r.upper + 1e-7) > r.critical_value);
      if (r.lower > 1e-7) {
        CHECK(inf.statistic(m, r.lower + 1e-7) <= r.critical_value);
        CHECK(inf.statistic(m, r.lower - 1e-7) > r.critical_value);
      }
      const auto profile = inf.statistic_profile(m, r.lower, r.upper, 51);
      for (const auto& p : profile) CHECK(p.statistic >= 0.0);
    }
  }
}

TEST_CASE("method names") {
  CHECK(method_from_name("MJEL") == Method::MJEL);
  CHECK(method_from_name("jel") == Method::JEL);
  CHECK(method_from_name("mjk") == Method::MJKWald);
  CHECK_FALSE(method_from_name("wald").has_value());
  CHECK(count_crossings({{0, 5}, {1, 1}, {2, 0}, {3, 2}, {4, 6}}, 3.0) == 2);
}
