// SPDX-License-Identifier: Apache-2.0
//
// Summary statistics, outlier trim, Welch's t-test with Satterthwaite
// degrees of freedom, Cohen's d, CoV classification, and the Efron
// percentile bootstrap for the median.

#include "hybridseal/stats.hpp"

#include <algorithm>
#include <cmath>
#include <random>

namespace hybridseal::stats {

const char* to_string(CovAssessment a) noexcept {
    switch (a) {
        case CovAssessment::timing_stable: return "timing-stable";
        case CovAssessment::scheduler_noise: return "scheduler-noise";
        case CovAssessment::design_variable: return "design-variable";
    }
    return "unknown";
}

std::vector<double> trim(std::vector<double> samples, double trim_pct) {
    const std::size_t n = samples.size();
    if (n < 3) {
        raise(ErrorKind::insufficient_samples,
              "trim needs at least 3 samples, got " + std::to_string(n));
    }
    std::sort(samples.begin(), samples.end());
    const auto clip = std::max<std::size_t>(
        1, static_cast<std::size_t>(std::floor(static_cast<double>(n) * trim_pct)));
    if (2 * clip >= n) {
        raise(ErrorKind::insufficient_samples,
              "trim of " + std::to_string(clip) + " per tail would empty " + std::to_string(n) +
                  " samples");
    }
    return {samples.begin() + static_cast<std::ptrdiff_t>(clip),
            samples.end() - static_cast<std::ptrdiff_t>(clip)};
}

double percentile(std::span<const double> sorted_ascending, double pct) {
    if (sorted_ascending.empty()) {
        raise(ErrorKind::insufficient_samples, "percentile of an empty sample");
    }
    if (pct <= 0.0) return sorted_ascending.front();
    if (pct >= 100.0) return sorted_ascending.back();
    const double rank = (pct / 100.0) * static_cast<double>(sorted_ascending.size() - 1);
    const auto lo = static_cast<std::size_t>(std::floor(rank));
    const double frac = rank - static_cast<double>(lo);
    if (lo + 1 >= sorted_ascending.size()) return sorted_ascending.back();
    return sorted_ascending[lo] + frac * (sorted_ascending[lo + 1] - sorted_ascending[lo]);
}

namespace {

struct Moments {
    std::size_t n;
    double mean;
    double var;  // sample variance, n-1 denominator
};

Moments moments(std::span<const double> xs) {
    const std::size_t n = xs.size();
    double sum = 0.0;
    for (double x : xs) sum += x;
    const double mean = sum / static_cast<double>(n);
    double ss = 0.0;
    for (double x : xs) ss += (x - mean) * (x - mean);
    const double var = n > 1 ? ss / static_cast<double>(n - 1) : 0.0;
    return {n, mean, var};
}

WelchResult welch_from_moments(const Moments& a, const Moments& b) {
    if (a.n < 2 || b.n < 2) {
        raise(ErrorKind::insufficient_samples, "Welch's test needs n >= 2 per sample");
    }
    if (a.var == 0.0 && b.var == 0.0) {
        raise(ErrorKind::degenerate_variance, "both samples have zero variance");
    }

    const double na = static_cast<double>(a.n);
    const double nb = static_cast<double>(b.n);
    const double va = a.var / na;
    const double vb = b.var / nb;
    const double se = std::sqrt(va + vb);

    WelchResult r;
    r.t = (b.mean - a.mean) / se;
    r.nu = (va + vb) * (va + vb) / (va * va / (na - 1.0) + vb * vb / (nb - 1.0));
    const double pooled =
        std::sqrt(((na - 1.0) * a.var + (nb - 1.0) * b.var) / (na + nb - 2.0));
    r.d = pooled > 0.0 ? (b.mean - a.mean) / pooled : 0.0;
    r.significant_at_001 = std::abs(r.t) > student_t_upper_quantile(0.9995, r.nu);
    return r;
}

}  // namespace

WelchResult welch(std::span<const double> a, std::span<const double> b) {
    return welch_from_moments(moments(a), moments(b));
}

WelchResult welch(const StatSummary& a, const StatSummary& b) {
    return welch_from_moments({a.n, a.mean_us, a.std_us * a.std_us},
                              {b.n, b.mean_us, b.std_us * b.std_us});
}

std::pair<double, double> bootstrap_ci_median(std::span<const double> samples,
                                              const BootstrapConfig& cfg) {
    if (samples.empty()) {
        raise(ErrorKind::insufficient_samples, "bootstrap over an empty sample");
    }
    if (cfg.resamples < 100) {
        raise(ErrorKind::invalid_parameter, "bootstrap needs at least 100 resamples");
    }
    const std::size_t n = samples.size();
    std::mt19937_64 rng(cfg.seed);

    std::vector<double> medians(cfg.resamples);
    std::vector<double> resample(n);
    for (std::size_t b = 0; b < cfg.resamples; ++b) {
        for (std::size_t i = 0; i < n; ++i) {
            resample[i] = samples[rng() % n];
        }
        const std::size_t mid = n / 2;
        std::nth_element(resample.begin(), resample.begin() + static_cast<std::ptrdiff_t>(mid),
                         resample.end());
        double med = resample[mid];
        if (n % 2 == 0) {
            const double below =
                *std::max_element(resample.begin(), resample.begin() + static_cast<std::ptrdiff_t>(mid));
            med = (below + med) / 2.0;
        }
        medians[b] = med;
    }
    std::sort(medians.begin(), medians.end());
    return {percentile(medians, cfg.lo_pct), percentile(medians, cfg.hi_pct)};
}

StatSummary summarize(const TimingSampleSet& set, const BootstrapConfig& boot) {
    // Trimming happens upstream (see trim); the sample set holds the
    // retained samples plus the configuration that produced them.
    if (set.samples_us.empty()) {
        raise(ErrorKind::insufficient_samples, "summarize over an empty sample set");
    }
    std::vector<double> sorted = set.samples_us;
    std::sort(sorted.begin(), sorted.end());

    StatSummary s;
    s.n = sorted.size();
    const Moments m = moments(sorted);
    s.mean_us = m.mean;
    s.std_us = std::sqrt(m.var);
    s.median_us = percentile(sorted, 50.0);
    s.p95_us = percentile(sorted, 95.0);
    s.p99_us = percentile(sorted, 99.0);
    s.cov_pct = m.mean != 0.0 ? s.std_us / m.mean * 100.0 : 0.0;
    auto [lo, hi] = bootstrap_ci_median(sorted, boot);
    s.ci95_lo_us = lo;
    s.ci95_hi_us = hi;
    return s;
}

CovAssessment classify_cov(const StatSummary& op, const StatSummary& baseline) noexcept {
    if (op.cov_pct <= baseline.cov_pct + 2.0) {
        return CovAssessment::timing_stable;
    }
    if (op.cov_pct > 20.0) {
        return CovAssessment::design_variable;
    }
    return CovAssessment::scheduler_noise;
}

double student_t_upper_quantile(double p, double nu) {
    if (p <= 0.5 || p >= 1.0) {
        raise(ErrorKind::invalid_parameter, "quantile probability must be in (0.5, 1)");
    }
    if (nu < 1.0) {
        raise(ErrorKind::invalid_parameter, "degrees of freedom must be >= 1");
    }
    // Normal quantile via Acklam's rational approximation.
    const double plow = 0.02425;
    double z;
    if (p < 1.0 - plow) {
        const double q = p - 0.5;
        const double r = q * q;
        z = (((((-39.69683028665376 * r + 220.9460984245205) * r - 275.9285104469687) * r +
               138.3577518672690) *
                  r -
              30.66479806614716) *
                 r +
             2.506628277459239) *
            q /
            (((((-54.47609879822406 * r + 161.5858368580409) * r - 155.6989798598866) * r +
               66.80131188771972) *
                  r -
              13.28068155288572) *
                 r +
             1.0);
    } else {
        // Upper tail: negate the lower-tail rational form.
        const double q = std::sqrt(-2.0 * std::log(1.0 - p));
        z = -(((((-0.007784894002430293 * q - 0.3223964580411365) * q - 2.400758277161838) * q -
                2.549732539343734) *
                   q +
               4.374664141464968) *
                  q +
              2.938163982698783) /
            ((((0.007784695709041462 * q + 0.3224671290700398) * q + 2.445134137142996) * q +
              3.754408661907416) *
                 q +
             1.0);
    }
    // Cornish-Fisher-type expansion of the t quantile around z.
    const double z3 = z * z * z;
    const double z5 = z3 * z * z;
    const double z7 = z5 * z * z;
    const double g1 = (z3 + z) / 4.0;
    const double g2 = (5.0 * z5 + 16.0 * z3 + 3.0 * z) / 96.0;
    const double g3 = (3.0 * z7 + 19.0 * z5 + 17.0 * z3 - 15.0 * z) / 384.0;
    return z + g1 / nu + g2 / (nu * nu) + g3 / (nu * nu * nu);
}

}  // namespace hybridseal::stats
