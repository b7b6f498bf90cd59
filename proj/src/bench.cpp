// SPDX-License-Identifier: Apache-2.0
//
// Measurement harness: warmup, monotonic per-iteration timing, 1% outlier
// trim, best-of-N run selection; plus the three benchmark programs (KEM
// decomposition, signature suite, concurrency sweep) and the AES-GCM noise
// floor.

#include "hybridseal/bench.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <fstream>
#include <memory>
#include <mutex>
#include <sstream>
#include <thread>

#if defined(__linux__)
#include <sched.h>
#include <sys/utsname.h>
#endif

#include "hybridseal/aead.hpp"
#include "hybridseal/backend.hpp"
#include "hybridseal/kem_hybrid.hpp"
#include "hybridseal/sign_hybrid.hpp"

namespace hybridseal::bench {

namespace {

using Clock = std::chrono::steady_clock;

double elapsed_us(Clock::time_point t0, Clock::time_point t1) {
    return std::chrono::duration<double, std::micro>(t1 - t0).count();
}

std::string detect_os() {
#if defined(__linux__)
    utsname u{};
    if (uname(&u) == 0) {
        return std::string(u.sysname) + " " + u.release + " " + u.machine;
    }
#endif
    return "unknown";
}

std::string detect_cpu_model() {
#if defined(__linux__)
    std::ifstream cpuinfo("/proc/cpuinfo");
    std::string line;
    while (std::getline(cpuinfo, line)) {
        if (line.rfind("model name", 0) == 0) {
            const auto colon = line.find(':');
            if (colon != std::string::npos) {
                auto start = line.find_first_not_of(" \t", colon + 1);
                return start == std::string::npos ? "" : line.substr(start);
            }
        }
    }
#endif
    return "unknown";
}

// Restores the calling thread's affinity mask on scope exit.
class ScopedAffinity {
public:
    explicit ScopedAffinity(const std::vector<int>& cores) {
#if defined(__linux__)
        if (cores.empty()) {
            return;
        }
        if (sched_getaffinity(0, sizeof(saved_), &saved_) != 0) {
            return;
        }
        cpu_set_t wanted;
        CPU_ZERO(&wanted);
        for (int core : cores) {
            if (core >= 0 && core < CPU_SETSIZE) {
                CPU_SET(core, &wanted);
            }
        }
        if (CPU_COUNT(&wanted) > 0 && sched_setaffinity(0, sizeof(wanted), &wanted) == 0) {
            applied_ = true;
            restore_ = true;
        }
#else
        (void)cores;
#endif
    }

    ~ScopedAffinity() {
#if defined(__linux__)
        if (restore_) {
            sched_setaffinity(0, sizeof(saved_), &saved_);
        }
#endif
    }

    bool applied() const noexcept { return applied_; }

private:
#if defined(__linux__)
    cpu_set_t saved_{};
#endif
    bool applied_ = false;
    bool restore_ = false;
};

std::string join_cores(const std::vector<int>& cores) {
    std::ostringstream out;
    for (std::size_t i = 0; i < cores.size(); ++i) {
        if (i) out << ",";
        out << cores[i];
    }
    return out.str();
}

}  // namespace

double measure_timer_resolution_ns() {
    double best = 1e12;
    for (int trial = 0; trial < 200; ++trial) {
        const auto t0 = Clock::now();
        auto t1 = Clock::now();
        while (t1 == t0) {
            t1 = Clock::now();
        }
        best = std::min(best, std::chrono::duration<double, std::nano>(t1 - t0).count());
    }
    return best;
}

EnvFingerprint probe_environment(const HarnessConfig& cfg) {
    EnvFingerprint env;
    env.os = detect_os();
    env.cpu_model = detect_cpu_model();
    env.hardware_threads = static_cast<int>(std::thread::hardware_concurrency());
    env.timer_resolution_ns = measure_timer_resolution_ns();
    env.pinned_cores = join_cores(cfg.pinned_cores);
    env.gc = cfg.gc_control == GcControl::disable_if_supported
                 ? "none (unmanaged runtime; nothing to disable)"
                 : "none";
    if (!cfg.pinned_cores.empty()) {
        ScopedAffinity probe(cfg.pinned_cores);
        env.pinned = probe.applied();
    }
    return env;
}

BenchRecord run_op(const OpUnderTest& op, const HarnessConfig& cfg) {
    if (cfg.iterations == 0 || cfg.runs == 0) {
        raise(ErrorKind::invalid_parameter, "iterations and runs must be positive");
    }

    BenchRecord record;
    record.op_name = op.name;
    record.env = probe_environment(cfg);

    ScopedAffinity affinity(cfg.pinned_cores);
    if (!cfg.pinned_cores.empty() && !affinity.applied()) {
        record.warnings.push_back("cpu-pinning-unavailable: requested cores " +
                                  join_cores(cfg.pinned_cores));
    }
    record.env.pinned = affinity.applied();

    if (cfg.iterations < 100) {
        record.warnings.push_back("low-sample: " + std::to_string(cfg.iterations) +
                                  " iterations is below the 100 needed for CI-quality output");
    }
    if (record.env.timer_resolution_ns > 1000.0) {
        record.warnings.push_back("environment-unsuitable: timer resolution " +
                                  std::to_string(record.env.timer_resolution_ns) +
                                  " ns is coarser than 1 us");
    }

    stats::BootstrapConfig boot;
    boot.seed = cfg.bootstrap_seed;

    bool have_best = false;
    stats::StatSummary best{};
    std::size_t best_run = 0;

    const std::size_t total = cfg.warmup + cfg.iterations;
    std::vector<double> samples(cfg.iterations);
    for (std::size_t run = 0; run < cfg.runs; ++run) {
        if (op.prepare) op.prepare(total);
        for (std::size_t i = 0; i < cfg.warmup; ++i) {
            op.body(i);
        }
        for (std::size_t i = 0; i < cfg.iterations; ++i) {
            const auto t0 = Clock::now();
            op.body(cfg.warmup + i);
            const auto t1 = Clock::now();
            samples[i] = elapsed_us(t0, t1);
        }
        stats::TimingSampleSet set{stats::trim(samples, cfg.trim_pct), cfg.warmup, cfg.trim_pct,
                                   op.name};
        stats::StatSummary summary = stats::summarize(set, boot);
        // Best of N: lowest median guards against thermal outlier runs.
        if (!have_best || summary.median_us < best.median_us) {
            have_best = true;
            best = summary;
            best_run = run;
        }
    }

    record.summary = best;
    record.run_index = best_run;
    return record;
}

namespace {

void append_floor_warnings(std::vector<BenchRecord>& records, const BenchRecord& floor) {
    double smallest = 0.0;
    bool have = false;
    for (const auto& r : records) {
        if (!have || r.summary.median_us < smallest) {
            smallest = r.summary.median_us;
            have = true;
        }
    }
    if (!have) {
        return;
    }
    for (auto& r : records) {
        if (floor.summary.median_us > 0.05 * r.summary.median_us) {
            r.warnings.push_back("harness-overhead: zero-work floor " +
                                 std::to_string(floor.summary.median_us) +
                                 " us exceeds 5% of this op's median");
        }
    }
}

BenchRecord measure_floor(const HarnessConfig& cfg) {
    OpUnderTest floor_op{"harness-floor", {}, [](std::size_t) {
                             // Prevent the loop from being optimized out.
                             static volatile int sink = 0;
                             sink = sink + 1;
                         }};
    return run_op(floor_op, cfg);
}

}  // namespace

KemDecomposition bench_kem_decomposition(const HarnessConfig& cfg) {
    const KemBackend& x25519 = kem_backend("X25519");
    const KemBackend& mlkem = kem_backend("ML-KEM-768");

    KemDecomposition out;

    // Tier 1: X25519 alone.
    out.records.push_back(
        run_op({"X25519 keygen", {}, [&](std::size_t) { (void)x25519.keygen(); }}, cfg));
    {
        auto kps = std::make_shared<std::vector<KemKeyPair>>();
        auto peers = std::make_shared<std::vector<Bytes>>();
        out.records.push_back(run_op({"X25519 DH exchange",
                                      [&, kps, peers](std::size_t n) {
                                          kps->clear();
                                          peers->clear();
                                          for (std::size_t i = 0; i < n; ++i) {
                                              kps->push_back(x25519.keygen());
                                              peers->push_back(
                                                  x25519.encapsulate((*kps)[i].public_key)
                                                      .ciphertext);
                                          }
                                      },
                                      [&, kps, peers](std::size_t i) {
                                          (void)x25519.decapsulate(
                                              (*kps)[i].secret_key.bytes(), (*peers)[i]);
                                      }},
                                     cfg));
    }

    // Tier 2: ML-KEM-768 alone.
    out.records.push_back(
        run_op({"ML-KEM-768 keygen", {}, [&](std::size_t) { (void)mlkem.keygen(); }}, cfg));
    {
        auto pks = std::make_shared<std::vector<Bytes>>();
        out.records.push_back(run_op({"ML-KEM-768 encapsulate",
                                      [&, pks](std::size_t n) {
                                          pks->clear();
                                          for (std::size_t i = 0; i < n; ++i) {
                                              pks->push_back(mlkem.keygen().public_key);
                                          }
                                      },
                                      [&, pks](std::size_t i) {
                                          (void)mlkem.encapsulate((*pks)[i]);
                                      }},
                                     cfg));
    }
    {
        auto kps = std::make_shared<std::vector<KemKeyPair>>();
        auto cts = std::make_shared<std::vector<Bytes>>();
        out.records.push_back(run_op({"ML-KEM-768 decapsulate",
                                      [&, kps, cts](std::size_t n) {
                                          kps->clear();
                                          cts->clear();
                                          for (std::size_t i = 0; i < n; ++i) {
                                              kps->push_back(mlkem.keygen());
                                              cts->push_back(
                                                  mlkem.encapsulate((*kps)[i].public_key)
                                                      .ciphertext);
                                          }
                                      },
                                      [&, kps, cts](std::size_t i) {
                                          (void)mlkem.decapsulate(
                                              (*kps)[i].secret_key.bytes(), (*cts)[i]);
                                      }},
                                     cfg));
    }

    // Tier 3: the full hybrid.
    out.records.push_back(
        run_op({"HybridKEM keygen", {}, [](std::size_t) { (void)generate_keypair(); }}, cfg));
    {
        auto pubs = std::make_shared<std::vector<HybridPublicKey>>();
        out.records.push_back(run_op({"HybridKEM encapsulate",
                                      [pubs](std::size_t n) {
                                          pubs->clear();
                                          for (std::size_t i = 0; i < n; ++i) {
                                              pubs->push_back(generate_keypair().public_key());
                                          }
                                      },
                                      [pubs](std::size_t i) {
                                          (void)encapsulate((*pubs)[i]);
                                      }},
                                     cfg));
    }
    {
        auto kps = std::make_shared<std::vector<HybridKeyPair>>();
        auto cts = std::make_shared<std::vector<HybridCiphertext>>();
        out.records.push_back(run_op({"HybridKEM decapsulate",
                                      [kps, cts](std::size_t n) {
                                          kps->clear();
                                          cts->clear();
                                          for (std::size_t i = 0; i < n; ++i) {
                                              kps->push_back(generate_keypair());
                                              cts->push_back(
                                                  encapsulate((*kps)[i].public_key()).first);
                                          }
                                      },
                                      [kps, cts](std::size_t i) {
                                          (void)decapsulate((*kps)[i], (*cts)[i]);
                                      }},
                                     cfg));
    }

    const BenchRecord floor = measure_floor(cfg);
    append_floor_warnings(out.records, floor);
    out.records.push_back(floor);

    auto median_of = [&](std::string_view name) {
        for (const auto& r : out.records) {
            if (r.op_name == name) return r.summary.median_us;
        }
        raise(ErrorKind::invalid_parameter, "missing record " + std::string(name));
    };

    const double h_kg = median_of("HybridKEM keygen");
    const double h_enc = median_of("HybridKEM encapsulate");
    const double h_dec = median_of("HybridKEM decapsulate");
    out.derived = {
        {"combiner overhead keygen",
         h_kg - median_of("X25519 keygen") - median_of("ML-KEM-768 keygen")},
        {"combiner overhead encapsulate",
         h_enc - median_of("X25519 DH exchange") - median_of("ML-KEM-768 encapsulate")},
        {"combiner overhead decapsulate",
         h_dec - median_of("X25519 DH exchange") - median_of("ML-KEM-768 decapsulate")},
        {"full handshake", h_kg + h_enc + h_dec},
    };
    return out;
}

std::vector<BenchRecord> bench_signatures(const HarnessConfig& cfg) {
    const SigBackend& ed25519 = sig_backend("Ed25519");
    const SigBackend& mldsa = sig_backend("ML-DSA-65");

    const Bytes message = random_bytes(32);

    std::vector<BenchRecord> records;
    auto component_rows = [&](const SigBackend& backend, const std::string& prefix,
                              bool with_keygen) {
        if (with_keygen) {
            records.push_back(run_op(
                {prefix + " keygen", {}, [&](std::size_t) { (void)backend.keygen(); }}, cfg));
        }
        {
            auto kps = std::make_shared<std::vector<SigKeyPair>>();
            records.push_back(run_op({prefix + " sign (32B)",
                                      [&, kps](std::size_t n) {
                                          kps->clear();
                                          for (std::size_t i = 0; i < n; ++i) {
                                              kps->push_back(backend.keygen());
                                          }
                                      },
                                      [&, kps](std::size_t i) {
                                          (void)backend.sign((*kps)[i].secret_key.bytes(),
                                                             message);
                                      }},
                                     cfg));
        }
        {
            auto kps = std::make_shared<std::vector<SigKeyPair>>();
            auto sigs = std::make_shared<std::vector<Bytes>>();
            records.push_back(run_op({prefix + " verify (32B)",
                                      [&, kps, sigs](std::size_t n) {
                                          kps->clear();
                                          sigs->clear();
                                          for (std::size_t i = 0; i < n; ++i) {
                                              kps->push_back(backend.keygen());
                                              sigs->push_back(backend.sign(
                                                  (*kps)[i].secret_key.bytes(), message));
                                          }
                                      },
                                      [&, kps, sigs](std::size_t i) {
                                          (void)backend.verify((*kps)[i].public_key, message,
                                                               (*sigs)[i]);
                                      }},
                                     cfg));
        }
    };

    component_rows(ed25519, "Ed25519", false);
    component_rows(mldsa, "ML-DSA-65", true);

    records.push_back(run_op(
        {"HybridSign keygen", {}, [](std::size_t) { (void)generate_signing_keypair(); }}, cfg));
    {
        auto kps = std::make_shared<std::vector<HybridSigKeyPair>>();
        records.push_back(run_op({"HybridSign sign (32B)",
                                  [kps](std::size_t n) {
                                      kps->clear();
                                      for (std::size_t i = 0; i < n; ++i) {
                                          kps->push_back(generate_signing_keypair());
                                      }
                                  },
                                  [kps, &message](std::size_t i) {
                                      (void)sign((*kps)[i], message);
                                  }},
                                 cfg));
    }
    {
        auto pubs = std::make_shared<std::vector<HybridSigPublicKey>>();
        auto sigs = std::make_shared<std::vector<HybridSignature>>();
        records.push_back(run_op({"HybridSign verify (32B)",
                                  [pubs, sigs, &message](std::size_t n) {
                                      pubs->clear();
                                      sigs->clear();
                                      for (std::size_t i = 0; i < n; ++i) {
                                          HybridSigKeyPair kp = generate_signing_keypair();
                                          pubs->push_back(kp.public_key());
                                          sigs->push_back(sign(kp, message));
                                      }
                                  },
                                  [pubs, sigs, &message](std::size_t i) {
                                      (void)verify((*pubs)[i], message, (*sigs)[i]);
                                  }},
                                 cfg));
    }

    const BenchRecord floor = measure_floor(cfg);
    append_floor_warnings(records, floor);
    records.push_back(floor);
    return records;
}

BenchRecord noise_floor(const HarnessConfig& cfg) {
    auto keys = std::make_shared<std::vector<Bytes>>();
    auto nonces = std::make_shared<std::vector<Bytes>>();
    auto payload = std::make_shared<Bytes>(random_bytes(1024));

    return run_op({"aead-enc-1kb",
                   [keys, nonces](std::size_t n) {
                       keys->clear();
                       nonces->clear();
                       for (std::size_t i = 0; i < n; ++i) {
                           keys->push_back(random_bytes(kAeadKeyLen));
                           nonces->push_back(random_bytes(kAeadNonceLen));
                       }
                   },
                   [keys, nonces, payload](std::size_t i) {
                       (void)aead_seal((*keys)[i], (*nonces)[i], {}, *payload);
                   }},
                  cfg);
}

namespace {

ConcurrencyResult run_concurrency_level(unsigned users, const HarnessConfig& cfg);

}  // namespace

std::vector<ConcurrencyResult> bench_concurrency(const std::vector<unsigned>& users_list,
                                                 const HarnessConfig& cfg) {
    if (users_list.empty()) {
        raise(ErrorKind::invalid_parameter, "users list must be non-empty");
    }
    if (cfg.runs == 0) {
        raise(ErrorKind::invalid_parameter, "runs must be positive");
    }
    for (std::size_t i = 1; i < users_list.size(); ++i) {
        if (users_list[i] < users_list[i - 1]) {
            raise(ErrorKind::invalid_parameter, "users list must be ascending");
        }
    }

    // Independent runs with best-median selection, like every other
    // benchmark; passes interleave the levels so one level cannot absorb a
    // noise burst the others never see.
    std::vector<ConcurrencyResult> best(users_list.size());
    std::vector<bool> have(users_list.size(), false);
    for (std::size_t run = 0; run < cfg.runs; ++run) {
        for (std::size_t level = 0; level < users_list.size(); ++level) {
            ConcurrencyResult r = run_concurrency_level(users_list[level], cfg);
            if (!have[level] || r.median_latency_ms < best[level].median_latency_ms) {
                best[level] = std::move(r);
                have[level] = true;
            }
        }
    }
    return best;
}

namespace {

ConcurrencyResult run_concurrency_level(unsigned users, const HarnessConfig& cfg) {
    {
        std::atomic<bool> start{false};
        std::atomic<bool> stop{false};

        std::vector<std::vector<double>> latencies_ms(users);
        std::vector<std::uint64_t> ops(users, 0);
        std::mutex panic_mutex;
        std::vector<std::string> panics;

        std::vector<std::thread> workers;
        workers.reserve(users);
        for (unsigned w = 0; w < users; ++w) {
            workers.emplace_back([&, w] {
                try {
                    while (!start.load(std::memory_order_acquire)) {
                        std::this_thread::yield();
                    }
                    while (!stop.load(std::memory_order_acquire)) {
                        const auto t0 = Clock::now();
                        HybridKeyPair kp = generate_keypair();
                        auto [ct, ss_sender] = encapsulate(kp.public_key());
                        SharedSecret ss_receiver = decapsulate(kp, ct);
                        if (ss_receiver != ss_sender) {
                            throw std::runtime_error("handshake secret mismatch");
                        }
                        const auto t1 = Clock::now();
                        // Fixed-window accounting: an op still in flight when
                        // the window closes belongs to no period.
                        if (stop.load(std::memory_order_acquire)) {
                            break;
                        }
                        latencies_ms[w].push_back(elapsed_us(t0, t1) / 1000.0);
                        ops[w] += 1;
                    }
                } catch (const std::exception& e) {
                    std::lock_guard<std::mutex> lock(panic_mutex);
                    panics.emplace_back("worker " + std::to_string(w) + ": " + e.what());
                }
            });
        }

        const auto t0 = Clock::now();
        start.store(true, std::memory_order_release);
        std::this_thread::sleep_for(std::chrono::duration<double>(cfg.concurrency_window_s));
        stop.store(true, std::memory_order_release);
        const auto t1 = Clock::now();
        for (auto& t : workers) {
            t.join();
        }

        if (!panics.empty()) {
            std::ostringstream msg;
            msg << "concurrency worker failure:";
            for (const auto& p : panics) msg << " [" << p << "]";
            throw std::runtime_error(msg.str());
        }

        ConcurrencyResult r;
        r.users = users;
        r.window_s = elapsed_us(t0, t1) / 1e6;
        r.per_worker_ops = ops;
        for (std::uint64_t n : ops) r.total_ops += n;

        std::vector<double> all;
        for (auto& v : latencies_ms) {
            all.insert(all.end(), v.begin(), v.end());
        }
        if (all.empty()) {
            raise(ErrorKind::insufficient_samples,
                  "no operations completed at " + std::to_string(users) + " users");
        }
        std::sort(all.begin(), all.end());
        r.median_latency_ms = stats::percentile(all, 50.0);
        r.p95_ms = stats::percentile(all, 95.0);
        r.throughput_ops_s = static_cast<double>(r.total_ops) / r.window_s;

        double sum = 0.0;
        for (double x : all) sum += x;
        const double mean = sum / static_cast<double>(all.size());
        double ss = 0.0;
        for (double x : all) ss += (x - mean) * (x - mean);
        const double sd =
            all.size() > 1 ? std::sqrt(ss / static_cast<double>(all.size() - 1)) : 0.0;
        r.cov_pct = mean != 0.0 ? sd / mean * 100.0 : 0.0;
        return r;
    }
}

}  // namespace

}  // namespace hybridseal::bench
