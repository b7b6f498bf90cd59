// SPDX-License-Identifier: Apache-2.0
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "hybridseal/stats.hpp"
#include "test_support.hpp"

using namespace hybridseal;
using namespace hybridseal::stats;

namespace {

std::vector<double> normal_draws(std::mt19937_64& rng, std::size_t n, double mu, double sigma) {
    std::normal_distribution<double> dist(mu, sigma);
    std::vector<double> xs(n);
    for (auto& x : xs) x = dist(rng);
    return xs;
}

}  // namespace

TEST_CASE("trim applies max(1, floor(N*pct)) per sorted tail") {
    {
        std::mt19937_64 rng(1);
        std::vector<double> s(3000);
        for (auto& x : s) x = static_cast<double>(rng() % 100000) / 100.0 + 1.0;
        CHECK(trim(s, 0.01).size() == 2940);
    }
    {
        std::vector<double> s(50, 1.0);
        for (std::size_t i = 0; i < s.size(); ++i) s[i] = static_cast<double>(i + 1);
        auto t = trim(s, 0.01);
        CHECK(t.size() == 48);  // clip hits the max(1, .) floor
        CHECK(t.front() == 2.0);
        CHECK(t.back() == 49.0);
    }
    {
        auto t = trim({5.0, 1.0, 9.0}, 0.01);
        REQUIRE(t.size() == 1);
        CHECK(t[0] == 5.0);
    }
    CHECK_THROWS_AS((void)trim({1.0, 2.0}, 0.01), Error);
    try {
        (void)trim({1.0, 2.0}, 0.01);
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::insufficient_samples);
    }
}

TEST_CASE("re-trimming removes a further clip per tail, clip recomputed") {
    std::vector<double> s(50);
    for (std::size_t i = 0; i < s.size(); ++i) s[i] = static_cast<double>(50 - i);
    auto once = trim(s, 0.01);
    auto twice = trim(once, 0.01);
    std::vector<double> sorted = s;
    std::sort(sorted.begin(), sorted.end());
    CHECK(twice == std::vector<double>(sorted.begin() + 2, sorted.end() - 2));
}

TEST_CASE("summarize on degenerate and hand-computed inputs") {
    {
        TimingSampleSet set{std::vector<double>(100, 10.0), 0, 0.01, "const"};
        StatSummary s = summarize(set);
        CHECK(s.n == 100);
        CHECK(s.mean_us == doctest::Approx(10.0));
        CHECK(s.std_us == 0.0);
        CHECK(s.cov_pct == 0.0);
        CHECK(s.median_us == 10.0);
        CHECK(s.ci95_lo_us == 10.0);
        CHECK(s.ci95_hi_us == 10.0);
    }
    {
        // Hand oracle: mean 10, sample std 2, CoV 20%.
        TimingSampleSet set{{8.0, 10.0, 12.0}, 0, 0.01, "hand"};
        StatSummary s = summarize(set);
        CHECK(s.mean_us == doctest::Approx(10.0).epsilon(1e-12));
        CHECK(s.std_us == doctest::Approx(2.0).epsilon(1e-12));
        CHECK(s.cov_pct == doctest::Approx(20.0).epsilon(1e-12));
        CHECK(s.median_us == 10.0);
    }
}

TEST_CASE("summarize recovers the generating distribution's CoV") {
    std::mt19937_64 rng(7);
    TimingSampleSet set{normal_draws(rng, 10000, 100.0, 5.0), 0, 0.01, "normal"};
    StatSummary s = summarize(set);
    CHECK(s.cov_pct > 4.0);
    CHECK(s.cov_pct < 6.0);
    CHECK(s.mean_us == doctest::Approx(100.0).epsilon(0.01));
}

TEST_CASE("summarize is permutation-invariant") {
    std::mt19937_64 rng(8);
    std::vector<double> xs = normal_draws(rng, 500, 50.0, 3.0);
    StatSummary a = summarize({xs, 0, 0.01, "a"});
    std::shuffle(xs.begin(), xs.end(), rng);
    StatSummary b = summarize({xs, 0, 0.01, "b"});
    CHECK(a.mean_us == b.mean_us);
    CHECK(a.std_us == b.std_us);
    CHECK(a.median_us == b.median_us);
    CHECK(a.p95_us == b.p95_us);
    CHECK(a.ci95_lo_us == b.ci95_lo_us);
}

TEST_CASE("percentile ordering invariants") {
    std::mt19937_64 rng(9);
    for (int i = 0; i < 20; ++i) {
        std::vector<double> xs = normal_draws(rng, 200 + rng() % 300, 80.0, 15.0);
        StatSummary s = summarize({xs, 0, 0.01, "p"});
        std::sort(xs.begin(), xs.end());
        CHECK(s.median_us >= xs.front());
        CHECK(s.median_us <= xs.back());
        CHECK(s.p95_us <= s.p99_us);
        CHECK(s.p99_us <= xs.back());
        CHECK(s.cov_pct == doctest::Approx(s.std_us / s.mean_us * 100.0).epsilon(1e-12));
    }
}

TEST_CASE("welch reproduces the hand-computed example to 4 decimals") {
    const std::vector<double> a{1, 2, 3, 4, 5};
    const std::vector<double> b{2, 4, 6, 8, 10};
    WelchResult r = welch(a, b);
    // s_a^2 = 2.5, s_b^2 = 10, s_p = 2.5.
    CHECK(std::abs(r.t - 1.8973665961) < 1e-4);
    CHECK(std::abs(r.nu - 5.8823529412) < 1e-4);
    CHECK(std::abs(r.d - 1.2) < 1e-12);
    CHECK_FALSE(r.significant_at_001);
}

TEST_CASE("welch is antisymmetric and zero for identical samples") {
    std::mt19937_64 rng(10);
    for (int i = 0; i < 10; ++i) {
        const auto a = normal_draws(rng, 50, 10.0, 2.0);
        const auto b = normal_draws(rng, 60, 12.0, 3.0);
        WelchResult fwd = welch(a, b);
        WelchResult rev = welch(b, a);
        CHECK(fwd.t == doctest::Approx(-rev.t).epsilon(1e-12));
        CHECK(fwd.d == doctest::Approx(-rev.d).epsilon(1e-12));
        CHECK(fwd.nu == doctest::Approx(rev.nu).epsilon(1e-12));
    }
    const auto xs = normal_draws(rng, 40, 5.0, 1.0);
    WelchResult same = welch(xs, xs);
    CHECK(same.t == 0.0);
    CHECK(same.d == 0.0);
    CHECK_FALSE(same.significant_at_001);
}

TEST_CASE("equal variances and equal n reduce Satterthwaite to pooled dof") {
    const std::vector<double> a{1, 2, 3};
    const std::vector<double> b{7, 8, 9};
    WelchResult r = welch(a, b);
    CHECK(r.nu == doctest::Approx(4.0).epsilon(1e-12));  // n_a + n_b - 2
    CHECK(r.nu >= 2.0);                                  // min(n)-1
    CHECK(r.nu <= 4.0);                                  // n_a+n_b-2
}

TEST_CASE("welch raises degenerate_variance when both sides are constant") {
    const std::vector<double> a(10, 3.0);
    const std::vector<double> b(10, 4.0);
    CHECK_THROWS_AS((void)welch(a, b), Error);
    try {
        (void)welch(a, b);
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::degenerate_variance);
    }
    CHECK_THROWS_AS((void)welch(std::vector<double>{1.0}, a), Error);
}

TEST_CASE("welch from summaries equals welch from samples") {
    std::mt19937_64 rng(11);
    const auto a = normal_draws(rng, 300, 40.0, 4.0);
    const auto b = normal_draws(rng, 260, 42.0, 6.0);
    WelchResult from_samples = welch(a, b);

    auto to_summary = [](const std::vector<double>& xs) {
        return summarize({xs, 0, 0.01, "s"});
    };
    WelchResult from_summaries = welch(to_summary(a), to_summary(b));
    CHECK(from_summaries.t == doctest::Approx(from_samples.t).epsilon(1e-9));
    CHECK(from_summaries.nu == doctest::Approx(from_samples.nu).epsilon(1e-9));
    CHECK(from_summaries.d == doctest::Approx(from_samples.d).epsilon(1e-9));
}

TEST_CASE("welch matches the extended-precision reference on 50 random pairs") {
    std::mt19937_64 rng(12);
    for (int i = 0; i < 50; ++i) {
        const auto a = normal_draws(rng, 20 + rng() % 400, 50.0 + i, 2.0 + i % 7);
        const auto b = normal_draws(rng, 20 + rng() % 400, 52.0 + i, 3.0 + i % 5);
        WelchResult ours = welch(a, b);
        testsupport::WelchReference ref = testsupport::oracle_welch(a, b);
        CHECK(std::abs(ours.t - ref.t) <= 1e-9 * std::max(1.0, std::abs(ref.t)));
        CHECK(std::abs(ours.nu - ref.nu) <= 1e-9 * std::max(1.0, std::abs(ref.nu)));
        CHECK(std::abs(ours.d - ref.d) <= 1e-9 * std::max(1.0, std::abs(ref.d)));
        CHECK(ours.nu >= std::min(a.size(), b.size()) - 1.0);
        CHECK(ours.nu <= static_cast<double>(a.size() + b.size() - 2));
    }
}

TEST_CASE("clearly separated samples are significant at 0.001") {
    std::mt19937_64 rng(13);
    const auto a = normal_draws(rng, 100, 10.0, 1.0);
    const auto b = normal_draws(rng, 100, 20.0, 1.0);
    CHECK(welch(a, b).significant_at_001);
}

TEST_CASE("bootstrap CI of the median is deterministic, ordered and tight on constants") {
    BootstrapConfig cfg;
    cfg.seed = 99;
    {
        const std::vector<double> c(64, 7.5);
        auto [lo, hi] = bootstrap_ci_median(c, cfg);
        CHECK(lo == 7.5);
        CHECK(hi == 7.5);
    }
    std::mt19937_64 rng(14);
    const auto xs = normal_draws(rng, 400, 100.0, 5.0);
    auto first = bootstrap_ci_median(xs, cfg);
    auto second = bootstrap_ci_median(xs, cfg);
    CHECK(first == second);
    CHECK(first.first <= first.second);

    cfg.seed = 100;
    auto other_seed = bootstrap_ci_median(xs, cfg);
    CHECK(other_seed != first);

    std::vector<double> sorted = xs;
    std::sort(sorted.begin(), sorted.end());
    const double median = percentile(sorted, 50.0);
    CHECK(first.first <= median + 1e-9);
    CHECK(first.second >= median - 1e-9);

    BootstrapConfig tiny;
    tiny.resamples = 50;
    CHECK_THROWS_AS((void)bootstrap_ci_median(xs, tiny), Error);
}

TEST_CASE("classify_cov reproduces the published assessments") {
    auto with_cov = [](double cov) {
        StatSummary s{};
        s.cov_pct = cov;
        return s;
    };
    const StatSummary baseline = with_cov(2.1);
    CHECK(classify_cov(with_cov(3.9), baseline) == CovAssessment::timing_stable);
    CHECK(classify_cov(with_cov(51.5), baseline) == CovAssessment::design_variable);
    CHECK(classify_cov(with_cov(2.1), baseline) == CovAssessment::timing_stable);
    CHECK(classify_cov(with_cov(4.1), baseline) == CovAssessment::timing_stable);  // boundary
    CHECK(classify_cov(with_cov(5.9), baseline) == CovAssessment::scheduler_noise);
    CHECK(classify_cov(with_cov(18.6), baseline) == CovAssessment::scheduler_noise);
    CHECK(classify_cov(with_cov(30.2), baseline) == CovAssessment::design_variable);
    CHECK(std::string(to_string(CovAssessment::timing_stable)) == "timing-stable");
}

TEST_CASE("student t upper quantile approximation is accurate enough") {
    // Large nu converges to the normal quantile.
    CHECK(student_t_upper_quantile(0.9995, 1e8) == doctest::Approx(3.2905267).epsilon(1e-4));
    // Tabulated t_{0.0005, 10} = 4.5869.
    CHECK(student_t_upper_quantile(0.9995, 10.0) == doctest::Approx(4.5869).epsilon(0.02));
    // Tabulated t_{0.0005, 30} = 3.6460.
    CHECK(student_t_upper_quantile(0.9995, 30.0) == doctest::Approx(3.6460).epsilon(0.01));
    CHECK_THROWS_AS((void)student_t_upper_quantile(0.4, 10.0), Error);
}
