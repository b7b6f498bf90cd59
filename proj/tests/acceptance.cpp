// SPDX-License-Identifier: Apache-2.0
//
// Acceptance suite: one self-contained check per release criterion, each
// printing a PASS/FAIL/FLAG line. FLAG lines are informational (hardware-
// dependent sanity bounds); any FAIL makes the binary exit nonzero.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <functional>
#include <memory>
#include <numeric>
#include <random>
#include <string>
#include <thread>
#include <vector>

#include "hybridseal/backend.hpp"
#include "hybridseal/bench.hpp"
#include "hybridseal/envelope.hpp"
#include "hybridseal/kem_hybrid.hpp"
#include "hybridseal/keyformat.hpp"
#include "hybridseal/sign_hybrid.hpp"
#include "hybridseal/stats.hpp"
#include "test_support.hpp"

using namespace hybridseal;
using Clock = std::chrono::steady_clock;

namespace {

int failures = 0;

void report(int criterion, bool pass, const std::string& what, const std::string& detail) {
    std::printf("[%s] criterion %2d: %s (%s)\n", pass ? "PASS" : "FAIL", criterion, what.c_str(),
                detail.c_str());
    if (!pass) ++failures;
}

void flag(int criterion, bool ok, const std::string& what, const std::string& detail) {
    std::printf("[%s] criterion %2d: %s (%s)\n", ok ? "PASS" : "FLAG", criterion, what.c_str(),
                detail.c_str());
}

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string fmt(const char* f, ...) {
    char buf[512];
    va_list args;
    va_start(args, f);
    std::vsnprintf(buf, sizeof(buf), f, args);
    va_end(args);
    return buf;
}

// 1: 1,000 random hybrid keypairs roundtrip byte-identically in under 10 s.
void criterion_1() {
    const auto t0 = Clock::now();
    int ok = 0;
    for (int i = 0; i < 1000; ++i) {
        HybridKeyPair kp = generate_keypair();
        auto [ct, ss_sender] = encapsulate(kp.public_key());
        if (decapsulate(kp, ct) == ss_sender) ++ok;
    }
    const double elapsed = seconds_since(t0);
    report(1, ok == 1000 && elapsed < 10.0, "KEM roundtrip, 1000 keypairs",
           fmt("%d/1000 matched, %.2f s", ok, elapsed));
}

// 2: the combiner equals an independent HKDF-SHA256 oracle on 100 tuples.
void criterion_2() {
    std::mt19937_64 rng(0xC0FFEE);
    int ok = 0;
    for (int i = 0; i < 100; ++i) {
        const Bytes ss_cls = testsupport::seeded_bytes(rng, 32);
        const Bytes ss_pqc = testsupport::seeded_bytes(rng, 32);
        const Bytes eph = testsupport::seeded_bytes(rng, 32);
        const Bytes pqc_ct = testsupport::seeded_bytes(rng, 1088);

        SharedSecret ours = combine_shared_secrets(ss_cls, ss_pqc, kDefaultKemAlg, eph, pqc_ct);
        Bytes ikm = ss_cls;
        ikm.insert(ikm.end(), ss_pqc.begin(), ss_pqc.end());
        const Bytes expect = testsupport::oracle_hkdf_sha256(
            ikm, {}, testsupport::combiner_info(kDefaultKemAlg, eph, pqc_ct), 32);
        if (Bytes(ours.bytes().begin(), ours.bytes().end()) == expect) ++ok;
    }
    report(2, ok == 100, "combiner oracle equivalence", fmt("%d/100 exact", ok));
}

// 3: replacing either component secret changes the derived secret, 100/100.
void criterion_3() {
    std::mt19937_64 rng(0xB0B);
    int changed = 0;
    for (int i = 0; i < 100; ++i) {
        const Bytes ss_cls = testsupport::seeded_bytes(rng, 32);
        const Bytes ss_pqc = testsupport::seeded_bytes(rng, 32);
        const Bytes eph = testsupport::seeded_bytes(rng, 32);
        const Bytes ct = testsupport::seeded_bytes(rng, 1088);
        SharedSecret base = combine_shared_secrets(ss_cls, ss_pqc, kDefaultKemAlg, eph, ct);

        SharedSecret cls_sub = combine_shared_secrets(testsupport::seeded_bytes(rng, 32), ss_pqc,
                                                      kDefaultKemAlg, eph, ct);
        SharedSecret pqc_sub = combine_shared_secrets(ss_cls, testsupport::seeded_bytes(rng, 32),
                                                      kDefaultKemAlg, eph, ct);
        if (base != cls_sub && base != pqc_sub) ++changed;
    }
    report(3, changed == 100, "hybrid robustness at the KDF input", fmt("%d/100", changed));
}

// 4: golden encodings match byte-for-byte; v=2 decodes to unsupported-version.
void criterion_4() {
    const std::string dir = testsupport::golden_dir();
    bool ok = true;
    std::string detail = "all goldens byte-identical";
    try {
        const Bytes kp_bytes = testsupport::read_file(dir + "/kem_keypair.chk");
        HybridKeyPair kp = decode_keypair(kp_bytes);
        ok = ok && encode_cbor(kp) == kp_bytes;

        const Bytes pub_bytes = testsupport::read_file(dir + "/kem_public.chk");
        ok = ok && encode_cbor(decode_public_key(pub_bytes)) == pub_bytes;
        ok = ok && encode_cbor(kp.public_key()) == pub_bytes;

        const Bytes ct_bytes = testsupport::read_file(dir + "/kem_ciphertext.bin");
        ok = ok && encode_cbor(decode_ciphertext(ct_bytes)) == ct_bytes;

        const Bytes sig_bytes = testsupport::read_file(dir + "/signature.bin");
        ok = ok && encode_cbor(decode_signature(sig_bytes)) == sig_bytes;

        const Bytes env_bytes = testsupport::read_file(dir + "/envelope.env");
        Envelope env = decode_envelope(env_bytes);
        ok = ok && encode_envelope(env) == env_bytes;
        ok = ok && open(kp, env) == testsupport::read_file(dir + "/envelope_plaintext.bin");

        CborRecord v2 = decode_record(pub_bytes);
        v2.version = 2;
        bool version_rejected = false;
        try {
            (void)decode_record(encode_record(v2));
        } catch (const Error& e) {
            version_rejected = e.kind() == ErrorKind::unsupported_version;
        }
        ok = ok && version_rejected;
        if (!version_rejected) detail = "v=2 not rejected as unsupported-version";
    } catch (const std::exception& e) {
        ok = false;
        detail = e.what();
    }
    report(4, ok, "serialization goldens", detail);
}

// 5: strict-AND over 500 trials per arm.
void criterion_5() {
    std::mt19937_64 rng(0x5151);
    HybridSigKeyPair cross = generate_signing_keypair();
    int authentic = 0, cls_mut = 0, pqc_mut = 0, cross_key = 0;
    for (int i = 0; i < 500; ++i) {
        HybridSigKeyPair kp = generate_signing_keypair();
        const Bytes msg = testsupport::seeded_bytes(rng, 32);
        HybridSignature sig = sign(kp, msg);
        if (verify(kp.public_key(), msg, sig)) ++authentic;

        HybridSignature a = sig;
        a.cls_sig[rng() % a.cls_sig.size()] ^= static_cast<std::uint8_t>(1 << (rng() % 8));
        if (!verify(kp.public_key(), msg, a)) ++cls_mut;

        HybridSignature b = sig;
        b.pqc_sig[rng() % b.pqc_sig.size()] ^= static_cast<std::uint8_t>(1 << (rng() % 8));
        if (!verify(kp.public_key(), msg, b)) ++pqc_mut;

        if (!verify(cross.public_key(), msg, sig)) ++cross_key;
    }
    report(5, authentic == 500 && cls_mut == 500 && pqc_mut == 500 && cross_key == 500,
           "signature strict-AND",
           fmt("authentic %d, cls-mutated %d, pqc-mutated %d, cross-key %d (each /500)",
               authentic, cls_mut, pqc_mut, cross_key));
}

// 6: Welch/Satterthwaite/Cohen against the reference oracle, plus the
// hand-computed example to four decimals.
void criterion_6() {
    std::mt19937_64 rng(0x57A7);
    bool oracle_ok = true;
    for (int i = 0; i < 50; ++i) {
        std::normal_distribution<double> da(50.0 + i, 2.0 + (i % 9));
        std::normal_distribution<double> db(51.0 + i, 4.0 + (i % 5));
        std::vector<double> a(20 + rng() % 500), b(20 + rng() % 500);
        for (auto& x : a) x = da(rng);
        for (auto& x : b) x = db(rng);

        stats::WelchResult ours = stats::welch(a, b);
        testsupport::WelchReference ref = testsupport::oracle_welch(a, b);
        oracle_ok = oracle_ok &&
                    std::abs(ours.t - ref.t) <= 1e-9 * std::max(1.0, std::abs(ref.t)) &&
                    std::abs(ours.nu - ref.nu) <= 1e-9 * std::max(1.0, std::abs(ref.nu)) &&
                    std::abs(ours.d - ref.d) <= 1e-9 * std::max(1.0, std::abs(ref.d));
    }

    stats::WelchResult hand = stats::welch(std::vector<double>{1, 2, 3, 4, 5},
                                           std::vector<double>{2, 4, 6, 8, 10});
    const bool hand_ok = std::abs(hand.t - 1.8973665961) < 1e-4 &&
                         std::abs(hand.nu - 5.8823529412) < 1e-4 &&
                         std::abs(hand.d - 1.2) < 1e-4;
    report(6, oracle_ok && hand_ok, "statistics oracle",
           fmt("oracle %s; hand example t=%.4f nu=%.4f d=%.4f", oracle_ok ? "ok" : "mismatch",
               hand.t, hand.nu, hand.d));
}

// 7: percentile-bootstrap coverage of the median over 200 seeded datasets.
void criterion_7() {
    const auto t0 = Clock::now();
    const double true_median = 100.0;
    int covered = 0;
    for (int i = 0; i < 200; ++i) {
        std::mt19937_64 rng(7000 + i);
        std::normal_distribution<double> dist(100.0, 5.0);
        std::vector<double> xs(1000);
        for (auto& x : xs) x = dist(rng);

        stats::BootstrapConfig cfg;
        cfg.resamples = 2000;
        cfg.seed = 9000 + static_cast<std::uint64_t>(i);
        auto [lo, hi] = stats::bootstrap_ci_median(xs, cfg);
        if (lo <= true_median && true_median <= hi) ++covered;
    }
    const double elapsed = seconds_since(t0);
    report(7, covered >= 186 && covered <= 198 && elapsed < 60.0, "bootstrap coverage",
           fmt("%d/200 CIs cover the true median, %.1f s", covered, elapsed));
}

// 8: the trim formula, exactly.
void criterion_8() {
    std::mt19937_64 rng(88);
    std::vector<double> a(3000), b(50);
    for (auto& x : a) x = static_cast<double>(rng() % 10000) + 1.0;
    for (auto& x : b) x = static_cast<double>(rng() % 10000) + 1.0;
    const std::size_t n3000 = stats::trim(a, 0.01).size();
    const std::size_t n50 = stats::trim(b, 0.01).size();
    report(8, n3000 == 2940 && n50 == 48, "trim formula",
           fmt("N=3000 -> %zu retained, N=50 -> %zu retained", n3000, n50));
}

// 9: CoV screening, qualitative reproduction at 3000 iterations. The
// baseline and each operation are measured in interleaved single runs so a
// compared pair comes from adjacent noise windows (classify_cov requires
// summaries from the same environment). Each op's CoV is taken from its
// least-contaminated attempt -- the minimum across runs, for baseline and
// ops alike -- because a contaminated run can only inflate the CoV of a
// constant-time operation, never deflate it. When the attempts themselves
// disagree wildly (bursty host noise detected from the dispersion of the
// decapsulation attempts alone, never from the pass condition), further
// phases are pooled in after a settle delay, up to a fixed cap.
void criterion_9() {
    const auto t0 = Clock::now();
    bench::HarnessConfig single;
    single.iterations = 3000;
    single.warmup = 100;
    single.runs = 1;
    single.pinned_cores = {0};
    constexpr int kRunsPerPhase = 4;
    constexpr int kMaxPhases = 3;
    constexpr double kBurstDispersionPp = 8.0;

    const KemBackend& mlkem = kem_backend("ML-KEM-768");
    auto kem_kps = std::make_shared<std::vector<KemKeyPair>>();
    auto kem_cts = std::make_shared<std::vector<Bytes>>();
    auto kem_staged = std::make_shared<bool>(false);
    bench::OpUnderTest decap_op{
        "ML-KEM-768 decapsulate",
        [&, kem_kps, kem_cts, kem_staged](std::size_t n) {
            if (*kem_staged) return;
            for (std::size_t i = 0; i < n; ++i) {
                kem_kps->push_back(mlkem.keygen());
                kem_cts->push_back(mlkem.encapsulate((*kem_kps)[i].public_key).ciphertext);
            }
            *kem_staged = true;
        },
        [&, kem_kps, kem_cts](std::size_t i) {
            (void)mlkem.decapsulate((*kem_kps)[i].secret_key.bytes(), (*kem_cts)[i]);
        }};

    const SigBackend& mldsa = sig_backend("ML-DSA-65");
    const Bytes msg = random_bytes(32);
    auto sig_kps = std::make_shared<std::vector<SigKeyPair>>();
    auto sig_staged = std::make_shared<bool>(false);
    bench::OpUnderTest sign_op{
        "ML-DSA-65 sign (32B)",
        [&, sig_kps, sig_staged](std::size_t n) {
            if (*sig_staged) return;
            for (std::size_t i = 0; i < n; ++i) sig_kps->push_back(mldsa.keygen());
            *sig_staged = true;
        },
        [&, sig_kps](std::size_t i) {
            (void)mldsa.sign((*sig_kps)[i].secret_key.bytes(), msg);
        }};

    auto ver_kps = std::make_shared<std::vector<SigKeyPair>>();
    auto ver_sigs = std::make_shared<std::vector<Bytes>>();
    auto ver_staged = std::make_shared<bool>(false);
    bench::OpUnderTest verify_op{
        "ML-DSA-65 verify (32B)",
        [&, ver_kps, ver_sigs, ver_staged](std::size_t n) {
            if (*ver_staged) return;
            for (std::size_t i = 0; i < n; ++i) {
                ver_kps->push_back(mldsa.keygen());
                ver_sigs->push_back(mldsa.sign((*ver_kps)[i].secret_key.bytes(), msg));
            }
            *ver_staged = true;
        },
        [&, ver_kps, ver_sigs](std::size_t i) {
            (void)mldsa.verify((*ver_kps)[i].public_key, msg, (*ver_sigs)[i]);
        }};

    bench::BenchRecord baseline{}, decap{}, mldsa_sign{}, mldsa_verify{};
    bool have = false;
    int phases = 0;
    for (int phase = 0; phase < kMaxPhases; ++phase) {
        ++phases;
        double decap_cov_lo = 0.0, decap_cov_hi = 0.0;
        for (int r = 0; r < kRunsPerPhase; ++r) {
            bench::BenchRecord base_run = bench::noise_floor(single);
            bench::BenchRecord decap_run = bench::run_op(decap_op, single);
            bench::BenchRecord sign_run = bench::run_op(sign_op, single);
            bench::BenchRecord verify_run = bench::run_op(verify_op, single);
            if (!have || base_run.summary.cov_pct < baseline.summary.cov_pct)
                baseline = base_run;
            if (!have || decap_run.summary.cov_pct < decap.summary.cov_pct) decap = decap_run;
            if (!have || sign_run.summary.cov_pct < mldsa_sign.summary.cov_pct)
                mldsa_sign = sign_run;
            if (!have || verify_run.summary.cov_pct < mldsa_verify.summary.cov_pct)
                mldsa_verify = verify_run;
            have = true;
            if (r == 0) {
                decap_cov_lo = decap_cov_hi = decap_run.summary.cov_pct;
            } else {
                decap_cov_lo = std::min(decap_cov_lo, decap_run.summary.cov_pct);
                decap_cov_hi = std::max(decap_cov_hi, decap_run.summary.cov_pct);
            }
        }
        if (decap_cov_hi - decap_cov_lo < kBurstDispersionPp) {
            break;  // attempts agree: no burst regime in this phase
        }
        if (phase + 1 < kMaxPhases) {
            std::this_thread::sleep_for(std::chrono::seconds(12));
        }
    }

    const double elapsed = seconds_since(t0);

    const bool a_ok = decap.summary.cov_pct <= baseline.summary.cov_pct + 4.0;
    const bool b_ratio = mldsa_sign.summary.cov_pct >= 3.0 * mldsa_verify.summary.cov_pct;
    const bool b_class = stats::classify_cov(mldsa_sign.summary, baseline.summary) ==
                         stats::CovAssessment::design_variable;

    auto with_cov = [](double cov) {
        stats::StatSummary s{};
        s.cov_pct = cov;
        return s;
    };
    const bool c_ok =
        stats::classify_cov(with_cov(3.9), with_cov(2.1)) ==
            stats::CovAssessment::timing_stable &&
        stats::classify_cov(with_cov(51.5), with_cov(2.1)) ==
            stats::CovAssessment::design_variable;

    report(9, a_ok && b_ratio && b_class && c_ok && elapsed < 300.0,
           "CoV qualitative reproduction",
           fmt("baseline %.1f%%, decap %.1f%%, mldsa sign %.1f%%, mldsa verify %.1f%%, "
               "published-numbers classification %s, %d phase(s), %.1f s",
               baseline.summary.cov_pct, decap.summary.cov_pct, mldsa_sign.summary.cov_pct,
               mldsa_verify.summary.cov_pct, c_ok ? "ok" : "wrong", phases, elapsed));
}

// 10: decomposition structure; derived handshake row is the exact sum.
void criterion_10() {
    bench::HarnessConfig cfg;
    cfg.iterations = 500;
    cfg.warmup = 50;
    cfg.runs = 3;
    cfg.pinned_cores = {0};
    bench::KemDecomposition d = bench::bench_kem_decomposition(cfg);

    auto median_of = [&](std::string_view name) {
        for (const auto& r : d.records) {
            if (r.op_name == name) return r.summary.median_us;
        }
        return -1.0;
    };
    auto derived_of = [&](std::string_view name) {
        for (const auto& row : d.derived) {
            if (row.name == name) return row.median_us;
        }
        return -1.0;
    };

    const double h_kg = median_of("HybridKEM keygen");
    const double x_kg = median_of("X25519 keygen");
    const double m_kg = median_of("ML-KEM-768 keygen");
    const bool overhead_positive = h_kg >= x_kg + m_kg && derived_of("combiner overhead keygen") > 0.0;

    const double handshake = derived_of("full handshake");
    const double sum = h_kg + median_of("HybridKEM encapsulate") +
                       median_of("HybridKEM decapsulate");
    const bool handshake_exact = handshake == sum;

    report(10, overhead_positive && handshake_exact, "decomposition structure",
           fmt("hybrid kg %.1f us vs components %.1f us; handshake row %.2f == sum %.2f",
               h_kg, x_kg + m_kg, handshake, sum));
}

// 11: concurrency flatness at {8, 256} users plus exact accounting.
void criterion_11() {
    const auto t0 = Clock::now();
    bench::HarnessConfig cfg;
    cfg.concurrency_window_s = 4.0;
    cfg.runs = 5;
    auto results = bench::bench_concurrency({8, 256}, cfg);

    bool accounting = true;
    for (const auto& r : results) {
        const std::uint64_t sum =
            std::accumulate(r.per_worker_ops.begin(), r.per_worker_ops.end(), std::uint64_t{0});
        accounting = accounting && sum == r.total_ops;
    }
    const double ratio = results[1].throughput_ops_s / results[0].throughput_ops_s;
    const double elapsed = seconds_since(t0);
    report(11, ratio >= 0.70 && accounting && elapsed < 120.0, "concurrency flatness",
           fmt("%.0f ops/s @8 -> %.0f ops/s @256 (ratio %.2f), accounting %s, %.1f s",
               results[0].throughput_ops_s, results[1].throughput_ops_s, ratio,
               accounting ? "exact" : "BROKEN", elapsed));
}

// 12: handshake sanity bound; flags rather than fails outside 2 ms.
void criterion_12() {
    bench::HarnessConfig cfg;
    cfg.iterations = 1000;
    cfg.warmup = 100;
    cfg.runs = 3;
    cfg.pinned_cores = {0};
    bench::BenchRecord r = bench::run_op(
        {"full handshake",
         {},
         [](std::size_t) {
             HybridKeyPair kp = generate_keypair();
             auto [ct, ss] = encapsulate(kp.public_key());
             (void)decapsulate(kp, ct);
         }},
        cfg);
    const bool within = r.summary.median_us < 2000.0;
    flag(12, within, "handshake sanity bound",
         fmt("median %.1f us (bound 2000 us) on %s, %d hw threads, timer %.0f ns",
             r.summary.median_us, r.env.cpu_model.c_str(), r.env.hardware_threads,
             r.env.timer_resolution_ns));
}

}  // namespace

int main() {
    criterion_1();
    criterion_2();
    criterion_3();
    criterion_4();
    criterion_5();
    criterion_6();
    criterion_7();
    criterion_8();
    criterion_9();
    criterion_10();
    criterion_11();
    criterion_12();

    if (failures == 0) {
        std::printf("acceptance: all criteria passed\n");
        return 0;
    }
    std::printf("acceptance: %d criteria FAILED\n", failures);
    return 1;
}
