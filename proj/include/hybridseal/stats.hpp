// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "hybridseal/common.hpp"

namespace hybridseal::stats {

// Raw per-iteration durations plus the trim/warmup configuration that
// produced them. Input to every statistic below.
struct TimingSampleSet {
    std::vector<double> samples_us;
    std::size_t warmup_discarded = 0;
    double trim_pct = 0.01;
    std::string op_name;
};

struct BootstrapConfig {
    std::size_t resamples = 2000;
    double lo_pct = 2.5;
    double hi_pct = 97.5;
    std::uint64_t seed = 0x68733235ULL;
};

struct StatSummary {
    std::size_t n = 0;       // retained samples after trimming
    double mean_us = 0.0;
    double std_us = 0.0;     // sample standard deviation (n-1)
    double median_us = 0.0;
    double p95_us = 0.0;
    double p99_us = 0.0;
    double cov_pct = 0.0;    // std/mean * 100
    double ci95_lo_us = 0.0; // percentile bootstrap CI of the median
    double ci95_hi_us = 0.0;
};

struct WelchResult {
    double t = 0.0;   // (mean_b - mean_a) / sqrt(s_a^2/n_a + s_b^2/n_b)
    double nu = 0.0;  // Welch-Satterthwaite effective degrees of freedom
    double d = 0.0;   // Cohen's d with pooled standard deviation
    bool significant_at_001 = false;  // two-sided alpha = 0.001
};

enum class CovAssessment { timing_stable, scheduler_noise, design_variable };

const char* to_string(CovAssessment a) noexcept;

// Outlier trim: sorts ascending, then removes clip = max(1, floor(N * pct))
// samples from each tail. Requires N >= 3 (insufficient_samples otherwise).
// Re-trimming an already trimmed set removes a further clip per tail with
// clip recomputed from the smaller N; in the clip == 1 regime,
// trim(trim(s)) equals sorted(s) with two samples removed per tail.
std::vector<double> trim(std::vector<double> samples, double trim_pct);

// Percentile by linear interpolation between closest ranks (inclusive) on
// an ascending-sorted span. pct in [0, 100].
double percentile(std::span<const double> sorted_ascending, double pct);

// Computes every summary field over the sample set as given (the harness
// trims before building the set; trim_pct/warmup_discarded are the applied
// configuration). The CI is the percentile bootstrap of the median over
// the retained raw samples.
StatSummary summarize(const TimingSampleSet& set, const BootstrapConfig& boot = {});

// Welch's two-sample t-test with Satterthwaite degrees of freedom and
// Cohen's d. Requires n >= 2 per side; throws degenerate_variance when both
// sides have zero variance.
WelchResult welch(std::span<const double> a, std::span<const double> b);

// Same test computed exactly from stored summary statistics.
WelchResult welch(const StatSummary& a, const StatSummary& b);

// Percentile bootstrap (Efron) CI of the median: resamples with
// replacement, takes the (lo_pct, hi_pct) percentiles of the resampled
// medians. Deterministic for a fixed cfg.seed.
std::pair<double, double> bootstrap_ci_median(std::span<const double> samples,
                                              const BootstrapConfig& cfg);

// First-order timing side-channel screen against a constant-time baseline:
//   timing_stable    cov <= baseline.cov + 2.0 pp
//   design_variable  cov > 20 pp
//   scheduler_noise  otherwise
CovAssessment classify_cov(const StatSummary& op, const StatSummary& baseline) noexcept;

// Upper quantile of Student's t at probability p (e.g. 0.9995), via an
// asymptotic expansion around the normal quantile.
double student_t_upper_quantile(double p, double nu);

}  // namespace hybridseal::stats
