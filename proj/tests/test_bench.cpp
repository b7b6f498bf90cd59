// SPDX-License-Identifier: Apache-2.0
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <memory>
#include <numeric>

#include "hybridseal/bench.hpp"
#include "hybridseal/kem_hybrid.hpp"
#include "test_support.hpp"

using namespace hybridseal;
using namespace hybridseal::bench;

namespace {

HarnessConfig small_config() {
    HarnessConfig cfg;
    cfg.iterations = 200;
    cfg.warmup = 20;
    cfg.runs = 1;
    return cfg;
}

void busy_wait_us(double us) {
    const auto t0 = std::chrono::steady_clock::now();
    while (std::chrono::duration<double, std::micro>(std::chrono::steady_clock::now() - t0)
               .count() < us) {
    }
}

bool has_warning(const BenchRecord& r, std::string_view needle) {
    for (const auto& w : r.warnings) {
        if (w.find(needle) != std::string::npos) return true;
    }
    return false;
}

}  // namespace

TEST_CASE("a calibrated 50us busy-wait lands in [50, 65]us") {
    BenchRecord r = run_op({"busy50", {}, [](std::size_t) { busy_wait_us(50.0); }}, small_config());
    CHECK(r.summary.median_us >= 50.0);
    CHECK(r.summary.median_us <= 65.0);
    CHECK(r.summary.n == 196);  // 200 trimmed by 2 per tail
}

TEST_CASE("the zero-work floor is below a microsecond") {
    BenchRecord r = run_op({"floor", {}, [](std::size_t) {
                                static volatile int sink = 0;
                                sink = sink + 1;
                            }},
                           small_config());
    CHECK(r.summary.median_us < 1.0);
}

TEST_CASE("tiny iteration counts produce a record with a low-sample warning") {
    HarnessConfig cfg = small_config();
    cfg.iterations = 10;
    cfg.warmup = 0;
    BenchRecord r = run_op({"tiny", {}, [](std::size_t) { busy_wait_us(5.0); }}, cfg);
    CHECK(r.summary.n == 8);
    CHECK(has_warning(r, "low-sample"));
}

TEST_CASE("iterations=0 is rejected") {
    HarnessConfig cfg = small_config();
    cfg.iterations = 0;
    CHECK_THROWS_AS((void)run_op({"x", {}, [](std::size_t) {}}, cfg), Error);
}

TEST_CASE("best-of-N selection picks a later, faster run") {
    HarnessConfig cfg = small_config();
    cfg.iterations = 50;
    cfg.warmup = 5;
    cfg.runs = 3;
    // The first run's iterations (warmup + timed) are three times slower.
    auto calls = std::make_shared<std::size_t>(0);
    const std::size_t first_run_calls = cfg.warmup + cfg.iterations;
    BenchRecord r = run_op({"two-speed", {}, [calls, first_run_calls](std::size_t) {
                                busy_wait_us(*calls < first_run_calls ? 150.0 : 50.0);
                                ++*calls;
                            }},
                           cfg);
    CHECK(r.run_index >= 1);
    CHECK(r.summary.median_us < 100.0);
}

TEST_CASE("prepare runs outside the timed window") {
    HarnessConfig cfg = small_config();
    cfg.iterations = 100;
    BenchRecord r = run_op({"prepare-heavy", [](std::size_t) { busy_wait_us(20000.0); },
                            [](std::size_t) { busy_wait_us(10.0); }},
                           cfg);
    CHECK(r.summary.median_us < 30.0);  // the 20ms prepare must not be counted
}

TEST_CASE("re-running with identical config lands near the same median") {
    // Stability smoke: a drifting environment is flagged, not failed.
    HarnessConfig cfg = small_config();
    BenchRecord a = run_op({"stable", {}, [](std::size_t) { busy_wait_us(40.0); }}, cfg);
    BenchRecord b = run_op({"stable", {}, [](std::size_t) { busy_wait_us(40.0); }}, cfg);
    const double drift = std::abs(a.summary.median_us - b.summary.median_us) /
                         std::max(a.summary.median_us, b.summary.median_us);
    WARN_MESSAGE(drift < 0.20, "medians drifted " << drift * 100.0
                                                  << "% between identical runs; noisy machine");
}

TEST_CASE("environment fingerprint is populated") {
    EnvFingerprint env = probe_environment(small_config());
    CHECK_FALSE(env.os.empty());
    CHECK(env.hardware_threads >= 1);
    CHECK(env.timer_resolution_ns > 0.0);
    CHECK(env.timer_resolution_ns < 1e6);
    CHECK_FALSE(env.gc.empty());
}

TEST_CASE("kem decomposition produces the eight tiers plus derived rows") {
    HarnessConfig cfg = small_config();
    cfg.iterations = 60;
    cfg.warmup = 5;
    KemDecomposition d = bench_kem_decomposition(cfg);

    const std::vector<std::string> expected_ops = {
        "X25519 keygen",        "X25519 DH exchange",     "ML-KEM-768 keygen",
        "ML-KEM-768 encapsulate", "ML-KEM-768 decapsulate", "HybridKEM keygen",
        "HybridKEM encapsulate",  "HybridKEM decapsulate"};
    auto find = [&](std::string_view name) -> const BenchRecord& {
        for (const auto& r : d.records) {
            if (r.op_name == name) return r;
        }
        FAIL("missing record " << std::string(name));
        return d.records.front();
    };
    for (const auto& name : expected_ops) {
        CHECK(find(name).summary.median_us > 0.0);
    }

    // Composition lower bound: hybrid >= max(component) per op class.
    CHECK(find("HybridKEM keygen").summary.median_us >=
          std::max(find("X25519 keygen").summary.median_us,
                   find("ML-KEM-768 keygen").summary.median_us));
    CHECK(find("HybridKEM encapsulate").summary.median_us >=
          std::max(find("X25519 DH exchange").summary.median_us,
                   find("ML-KEM-768 encapsulate").summary.median_us));
    CHECK(find("HybridKEM decapsulate").summary.median_us >=
          std::max(find("X25519 DH exchange").summary.median_us,
                   find("ML-KEM-768 decapsulate").summary.median_us));

    auto derived = [&](std::string_view name) {
        for (const auto& row : d.derived) {
            if (row.name == name) return row.median_us;
        }
        FAIL("missing derived row " << std::string(name));
        return 0.0;
    };
    const double h_kg = find("HybridKEM keygen").summary.median_us;
    const double h_enc = find("HybridKEM encapsulate").summary.median_us;
    const double h_dec = find("HybridKEM decapsulate").summary.median_us;
    CHECK(derived("full handshake") == h_kg + h_enc + h_dec);
    CHECK(derived("combiner overhead keygen") ==
          h_kg - find("X25519 keygen").summary.median_us -
              find("ML-KEM-768 keygen").summary.median_us);
    CHECK(derived("combiner overhead encapsulate") ==
          h_enc - find("X25519 DH exchange").summary.median_us -
              find("ML-KEM-768 encapsulate").summary.median_us);

    // The smallest real op dwarfs the harness floor: no overhead warnings.
    CHECK_FALSE(has_warning(find("ML-KEM-768 keygen"), "harness-overhead"));
}

TEST_CASE("signature suite rows have the expected structure") {
    HarnessConfig cfg = small_config();
    cfg.iterations = 60;
    cfg.warmup = 5;
    std::vector<BenchRecord> records = bench_signatures(cfg);

    auto find = [&](std::string_view name) -> const BenchRecord& {
        for (const auto& r : records) {
            if (r.op_name == name) return r;
        }
        FAIL("missing record " << std::string(name));
        return records.front();
    };

    for (const char* name :
         {"Ed25519 sign (32B)", "Ed25519 verify (32B)", "ML-DSA-65 keygen",
          "ML-DSA-65 sign (32B)", "ML-DSA-65 verify (32B)", "HybridSign keygen",
          "HybridSign sign (32B)", "HybridSign verify (32B)"}) {
        CHECK(find(name).summary.median_us > 0.0);
    }

    // Rejection sampling makes signing far noisier than verification.
    CHECK(find("ML-DSA-65 sign (32B)").summary.cov_pct > 20.0);
    CHECK(find("ML-DSA-65 sign (32B)").summary.cov_pct >
          find("ML-DSA-65 verify (32B)").summary.cov_pct);

    // The hybrid sign does both component signs. At this small iteration
    // count the ML-DSA median is quantized by whole rejection-loop attempts,
    // so compare against a bound that cannot flip on a plateau boundary.
    CHECK(find("HybridSign sign (32B)").summary.median_us >
          find("Ed25519 sign (32B)").summary.median_us +
              0.5 * find("ML-DSA-65 sign (32B)").summary.median_us);
    CHECK(find("HybridSign verify (32B)").summary.median_us >
          find("Ed25519 verify (32B)").summary.median_us +
              0.5 * find("ML-DSA-65 verify (32B)").summary.median_us);
}

TEST_CASE("noise floor record carries the contract name") {
    HarnessConfig cfg = small_config();
    cfg.iterations = 500;
    BenchRecord r = noise_floor(cfg);
    CHECK(r.op_name == "aead-enc-1kb");
    CHECK(r.summary.median_us > 0.0);
    CHECK(r.summary.n == 490);
    CHECK(r.summary.cov_pct >= 0.0);
    CHECK(std::isfinite(r.summary.cov_pct));
    // The quiet-machine screen itself lives in the acceptance suite, where
    // the baseline is measured with interleaved best-of-N runs.
    WARN_MESSAGE(r.summary.cov_pct < 30.0,
                 "noise floor CoV " << r.summary.cov_pct << "% suggests a loud machine");
}

TEST_CASE("concurrency accounting and single-user degeneracy") {
    HarnessConfig cfg = small_config();
    cfg.concurrency_window_s = 0.4;

    auto results = bench_concurrency({1, 2}, cfg);
    REQUIRE(results.size() == 2);
    for (const auto& r : results) {
        const std::uint64_t sum =
            std::accumulate(r.per_worker_ops.begin(), r.per_worker_ops.end(), std::uint64_t{0});
        CHECK(sum == r.total_ops);
        CHECK(r.total_ops > 0);
        CHECK(r.throughput_ops_s > 0.0);
        CHECK(r.median_latency_ms <= r.p95_ms);
        CHECK(r.window_s >= cfg.concurrency_window_s);
    }
    CHECK(results[0].users == 1);
    CHECK(results[0].per_worker_ops.size() == 1);

    // One worker's latency is roughly the single-op handshake time.
    BenchRecord single = run_op(
        {"handshake",
         {},
         [](std::size_t) {
             HybridKeyPair kp = generate_keypair();
             auto [ct, ss] = encapsulate(kp.public_key());
             (void)decapsulate(kp, ct);
         }},
        small_config());
    CHECK(results[0].median_latency_ms <
          5.0 * std::max(0.2, single.summary.median_us / 1000.0));

    CHECK_THROWS_AS((void)bench_concurrency({4, 2}, cfg), Error);
    CHECK_THROWS_AS((void)bench_concurrency({}, cfg), Error);
}
