// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <functional>
#include <string>
#include <vector>

#include "hybridseal/common.hpp"
#include "hybridseal/stats.hpp"

namespace hybridseal::bench {

// No collector exists in this runtime; the knob is kept so configurations
// echo faithfully into result files.
enum class GcControl { disable_if_supported, none };

struct HarnessConfig {
    std::size_t iterations = 3000;
    std::size_t warmup = 100;
    double trim_pct = 0.01;
    std::size_t runs = 3;                  // independent runs; lowest median selected
    std::vector<int> pinned_cores;         // empty = no pinning attempt
    GcControl gc_control = GcControl::disable_if_supported;
    std::uint64_t bootstrap_seed = 0x68733235ULL;
    double concurrency_window_s = 5.0;     // wall-clock window per concurrency level
};

struct EnvFingerprint {
    std::string os;
    std::string cpu_model;
    int hardware_threads = 0;
    double timer_resolution_ns = 0.0;
    bool pinned = false;
    std::string pinned_cores;
    std::string gc = "none (unmanaged runtime)";
};

EnvFingerprint probe_environment(const HarnessConfig& cfg);

double measure_timer_resolution_ns();

struct BenchRecord {
    std::string op_name;
    stats::StatSummary summary;
    std::size_t run_index = 0;  // which of the independent runs was selected
    EnvFingerprint env;
    std::vector<std::string> warnings;
};

// One operation under measurement. `prepare` runs untimed once per run and
// stages `count` fresh inputs (fresh keys per iteration, staged up front so
// input generation cannot disturb the timed loop); `body` is the timed call
// for iteration index i in [0, count).
struct OpUnderTest {
    std::string name;
    std::function<void(std::size_t count)> prepare;  // may be empty
    std::function<void(std::size_t i)> body;
};

// Core harness: per run, `warmup` discarded iterations followed by
// `iterations` timed ones on the monotonic high-resolution clock, trimmed
// and summarized; the run with the lowest median wins.
BenchRecord run_op(const OpUnderTest& op, const HarnessConfig& cfg);

struct DerivedRow {
    std::string name;
    double median_us;
};

// Three-tier KEM decomposition: X25519 alone, ML-KEM-768 alone, the full
// hybrid; plus derived combiner-overhead rows (hybrid minus components per
// op class) and the full-handshake row (sum of the three hybrid medians).
struct KemDecomposition {
    std::vector<BenchRecord> records;
    std::vector<DerivedRow> derived;
};

KemDecomposition bench_kem_decomposition(const HarnessConfig& cfg);

// Ed25519, ML-DSA-65 and HybridSign suites over 32-byte messages.
std::vector<BenchRecord> bench_signatures(const HarnessConfig& cfg);

struct ConcurrencyResult {
    unsigned users = 0;
    double median_latency_ms = 0.0;
    double p95_ms = 0.0;
    double throughput_ops_s = 0.0;
    double cov_pct = 0.0;
    std::uint64_t total_ops = 0;
    std::vector<std::uint64_t> per_worker_ops;
    double window_s = 0.0;
};

// Spawns `users` worker threads each running full hybrid handshakes for a
// fixed wall-clock window; reports per-op latency percentiles and aggregate
// throughput per level.
std::vector<ConcurrencyResult> bench_concurrency(const std::vector<unsigned>& users_list,
                                                 const HarnessConfig& cfg);

// AES-256-GCM encryption of a 1 KB buffer: the constant-time noise-floor
// reference for classify_cov. Record is named "aead-enc-1kb".
BenchRecord noise_floor(const HarnessConfig& cfg);

}  // namespace hybridseal::bench
