// SPDX-License-Identifier: Apache-2.0
//
// hybridseal command line: key management (gen/inspect/upgrade), envelope
// seal/open, the three benchmark programs with JSON persistence, and the
// CoV classification report.

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "hybridseal/backend.hpp"
#include "hybridseal/bench.hpp"
#include "hybridseal/envelope.hpp"
#include "hybridseal/kem_hybrid.hpp"
#include "hybridseal/keyformat.hpp"
#include "hybridseal/sign_hybrid.hpp"
#include "hybridseal/stats.hpp"

using json = nlohmann::json;
using namespace hybridseal;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 2;    // usage and I/O problems
constexpr int kExitRefused = 3;  // policy refusal (classical-only downgrade)

Bytes read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        raise(ErrorKind::io_error, "cannot read " + path);
    }
    return Bytes(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
}

void write_file(const std::string& path, ByteSpan data) {
    std::ofstream out(path, std::ios::binary);
    out.write(reinterpret_cast<const char*>(data.data()),
              static_cast<std::streamsize>(data.size()));
    if (!out) {
        raise(ErrorKind::io_error, "cannot write " + path);
    }
}

void write_file(const std::string& path, const std::string& text) {
    write_file(path, ByteSpan(reinterpret_cast<const std::uint8_t*>(text.data()), text.size()));
}

// --- bench ------------------------------------------------------------

struct BenchFlags {
    std::size_t iterations = 3000;
    std::size_t warmup = 100;
    std::size_t runs = 3;
    double trim_pct = 0.01;
    std::vector<int> pin;
    std::uint64_t seed = 0x68733235ULL;
    std::string save;
    std::vector<unsigned> users{8, 64, 256};
    double window_s = 5.0;
};

bench::HarnessConfig to_config(const BenchFlags& f) {
    bench::HarnessConfig cfg;
    cfg.iterations = f.iterations;
    cfg.warmup = f.warmup;
    cfg.runs = f.runs;
    cfg.trim_pct = f.trim_pct;
    cfg.pinned_cores = f.pin;
    cfg.bootstrap_seed = f.seed;
    cfg.concurrency_window_s = f.window_s;
    return cfg;
}

json env_to_json(const bench::EnvFingerprint& env) {
    return json{{"os", env.os},
                {"cpu_model", env.cpu_model},
                {"hardware_threads", env.hardware_threads},
                {"timer_resolution_ns", env.timer_resolution_ns},
                {"pinned", env.pinned},
                {"pinned_cores", env.pinned_cores},
                {"gc", env.gc}};
}

json config_to_json(const bench::HarnessConfig& cfg) {
    return json{{"iterations", cfg.iterations},
                {"warmup", cfg.warmup},
                {"trim_pct", cfg.trim_pct},
                {"runs", cfg.runs},
                {"pinned_cores", cfg.pinned_cores},
                {"gc_control", cfg.gc_control == bench::GcControl::disable_if_supported
                                   ? "disable_if_supported"
                                   : "none"},
                {"bootstrap_seed", cfg.bootstrap_seed},
                {"concurrency_window_s", cfg.concurrency_window_s}};
}

json operation_to_json(const bench::BenchRecord& r) {
    return json{{"name", r.op_name},
                {"n", r.summary.n},
                {"mean_us", r.summary.mean_us},
                {"std_us", r.summary.std_us},
                {"median_us", r.summary.median_us},
                {"p95_us", r.summary.p95_us},
                {"p99_us", r.summary.p99_us},
                {"cov_pct", r.summary.cov_pct},
                {"ci95_lo_us", r.summary.ci95_lo_us},
                {"ci95_hi_us", r.summary.ci95_hi_us}};
}

json result_file_skeleton(const bench::HarnessConfig& cfg) {
    json file;
    file["schema_version"] = 1;
    file["env"] = env_to_json(bench::probe_environment(cfg));
    file["config"] = config_to_json(cfg);
    file["operations"] = json::array();
    return file;
}

void add_operations(json& file, const std::vector<bench::BenchRecord>& records) {
    json warnings = json::object();
    for (const auto& r : records) {
        file["operations"].push_back(operation_to_json(r));
        if (!r.warnings.empty()) {
            warnings[r.op_name] = r.warnings;
        }
    }
    if (!warnings.empty()) {
        file["warnings"] = warnings;
    }
}

void save_result_file(const std::string& path, const json& file) {
    write_file(path, file.dump(2) + "\n");
    std::printf("saved %s\n", path.c_str());
}

void print_records(const std::vector<bench::BenchRecord>& records) {
    std::printf("%-28s %12s %12s %8s %10s %22s\n", "Operation", "Median (us)", "p95 (us)",
                "CoV", "n", "CI95 of median (us)");
    for (const auto& r : records) {
        char ci[48];
        std::snprintf(ci, sizeof(ci), "[%.2f, %.2f]", r.summary.ci95_lo_us,
                      r.summary.ci95_hi_us);
        std::printf("%-28s %12.2f %12.2f %7.1f%% %10zu %22s\n", r.op_name.c_str(),
                    r.summary.median_us, r.summary.p95_us, r.summary.cov_pct, r.summary.n, ci);
    }
    for (const auto& r : records) {
        for (const auto& w : r.warnings) {
            std::printf("warning [%s]: %s\n", r.op_name.c_str(), w.c_str());
        }
    }
}

int cmd_bench_kem(const BenchFlags& flags) {
    const bench::HarnessConfig cfg = to_config(flags);
    bench::KemDecomposition decomposition = bench::bench_kem_decomposition(cfg);

    print_records(decomposition.records);
    std::printf("\n");
    for (const auto& d : decomposition.derived) {
        std::printf("%-32s %12.2f us\n", d.name.c_str(), d.median_us);
    }

    if (!flags.save.empty()) {
        json file = result_file_skeleton(cfg);
        add_operations(file, decomposition.records);
        file["derived"] = json::array();
        for (const auto& d : decomposition.derived) {
            file["derived"].push_back({{"name", d.name}, {"median_us", d.median_us}});
        }
        save_result_file(flags.save, file);
    }
    return kExitOk;
}

int cmd_bench_sig(const BenchFlags& flags) {
    const bench::HarnessConfig cfg = to_config(flags);
    std::vector<bench::BenchRecord> records = bench::bench_signatures(cfg);
    print_records(records);

    if (!flags.save.empty()) {
        json file = result_file_skeleton(cfg);
        add_operations(file, records);
        save_result_file(flags.save, file);
    }
    return kExitOk;
}

int cmd_bench_concurrency(const BenchFlags& flags) {
    const bench::HarnessConfig cfg = to_config(flags);
    std::vector<bench::ConcurrencyResult> results =
        bench::bench_concurrency(flags.users, cfg);

    std::printf("%8s %16s %12s %16s %8s %12s\n", "Users", "Med.lat (ms)", "p95 (ms)",
                "Throughput", "CoV", "Total ops");
    for (const auto& r : results) {
        std::printf("%8u %16.2f %12.2f %11.0f ops/s %7.1f%% %12llu\n", r.users,
                    r.median_latency_ms, r.p95_ms, r.throughput_ops_s, r.cov_pct,
                    static_cast<unsigned long long>(r.total_ops));
    }

    if (!flags.save.empty()) {
        json file = result_file_skeleton(cfg);
        file["concurrency"] = json::array();
        for (const auto& r : results) {
            file["concurrency"].push_back({{"users", r.users},
                                           {"median_latency_ms", r.median_latency_ms},
                                           {"p95_ms", r.p95_ms},
                                           {"throughput_ops_s", r.throughput_ops_s},
                                           {"cov_pct", r.cov_pct},
                                           {"total_ops", r.total_ops},
                                           {"window_s", r.window_s}});
        }
        save_result_file(flags.save, file);
    }
    return kExitOk;
}

// --- key --------------------------------------------------------------

void write_keypair_files(const std::string& base, ByteSpan private_cbor, ByteSpan public_cbor) {
    write_file(base + ".chk", private_cbor);
    write_file(base + ".pem", pem_encode(PemLabel::hybrid_private_key, private_cbor));
    write_file(base + ".pub.chk", public_cbor);
    write_file(base + ".pub.pem", pem_encode(PemLabel::hybrid_public_key, public_cbor));
    std::printf("wrote %s.chk %s.pem %s.pub.chk %s.pub.pem\n", base.c_str(), base.c_str(),
                base.c_str(), base.c_str());
}

int cmd_key_gen(const std::string& alg, const std::string& out, bool classical_only,
                bool confirm_downgrade) {
    if (classical_only) {
        if (!confirm_downgrade) {
            std::fprintf(stderr,
                         "refusing classical-only key generation: pass "
                         "--i-understand-downgrade to opt out of post-quantum protection\n");
            return kExitRefused;
        }
        HybridKeyPair kp = classical_only_keypair(kAllowClassicalOnly);
        write_keypair_files(out, encode_cbor(kp), encode_cbor(kp.public_key()));
        return kExitOk;
    }

    const AlgorithmId& id = algorithm(alg);
    if (id.kind == AlgKind::kem) {
        HybridKeyPair kp = generate_keypair(alg);
        write_keypair_files(out, encode_cbor(kp), encode_cbor(kp.public_key()));
    } else {
        HybridSigKeyPair kp = generate_signing_keypair(alg);
        write_keypair_files(out, encode_cbor(kp), encode_cbor(kp.public_key()));
    }
    std::printf("algorithm: %s\n", alg.c_str());
    return kExitOk;
}

Bytes load_cbor_maybe_pem(const std::string& path) {
    Bytes raw = read_file(path);
    const std::string_view text(reinterpret_cast<const char*>(raw.data()), raw.size());
    if (text.rfind("-----BEGIN ", 0) == 0) {
        return pem_decode(text).second;
    }
    return raw;
}

int cmd_key_inspect(const std::string& path) {
    const Bytes cbor = load_cbor_maybe_pem(path);
    const CborRecord record = decode_record(cbor);
    const AlgorithmId& id = algorithm(record.alg);

    // Classify the record flavor by its component lengths.
    std::string flavor = "unrecognized";
    if (id.kind == AlgKind::kem) {
        const KemSuite& s = kem_suite(record.alg);
        const std::size_t pqc_pk = s.pqc ? s.pqc->public_key_len() : 0;
        const std::size_t pqc_ct = s.pqc ? s.pqc->ciphertext_len() : 0;
        const std::size_t pqc_kp = s.pqc ? s.pqc->secret_key_len() + s.pqc->public_key_len() : 0;
        if (record.cls.size() == s.classical->public_key_len() && record.pqc.size() == pqc_pk) {
            flavor = "public key";
        } else if (record.cls.size() ==
                       s.classical->secret_key_len() + s.classical->public_key_len() &&
                   record.pqc.size() == pqc_kp) {
            flavor = "private key";
        } else if (record.cls.size() == s.classical->ciphertext_len() &&
                   record.pqc.size() == pqc_ct) {
            flavor = "ciphertext";
        }
    } else {
        const SigSuite& s = sig_suite(record.alg);
        if (record.cls.size() == s.classical->public_key_len() &&
            record.pqc.size() == s.pqc->public_key_len()) {
            flavor = "signing public key";
        } else if (record.cls.size() ==
                       s.classical->secret_key_len() + s.classical->public_key_len() &&
                   record.pqc.size() == s.pqc->secret_key_len() + s.pqc->public_key_len()) {
            flavor = "signing private key";
        } else if (record.cls.size() == s.classical->signature_len() &&
                   record.pqc.size() == s.pqc->signature_len()) {
            flavor = "signature";
        }
    }

    std::printf("file:      %s\n", path.c_str());
    std::printf("version:   %u\n", record.version);
    std::printf("algorithm: %s (NIST level %d)\n", record.alg.c_str(), id.security_level);
    std::printf("flavor:    %s\n", flavor.c_str());
    std::printf("cls bytes: %zu\n", record.cls.size());
    std::printf("pqc bytes: %zu\n", record.pqc.size());
    std::printf("params:    %s\n", record.params_cbor.empty() ? "absent" : "present");
    return kExitOk;
}

int cmd_key_upgrade(const std::string& in, const std::string& kind, const std::string& out) {
    const Bytes classical = read_file(in);
    if (kind == "kem") {
        HybridKeyPair kp = upgrade_classical_kem(classical);
        write_keypair_files(out, encode_cbor(kp), encode_cbor(kp.public_key()));
    } else {
        HybridSigKeyPair kp = upgrade_classical_sig(classical);
        write_keypair_files(out, encode_cbor(kp), encode_cbor(kp.public_key()));
    }
    return kExitOk;
}

// --- envelope ---------------------------------------------------------

int cmd_env_seal(const std::string& key_path, const std::string& in, const std::string& out,
                 const std::string& aad_hex) {
    HybridPublicKey pub = decode_public_key(load_cbor_maybe_pem(key_path));
    const Bytes plaintext = read_file(in);
    const Bytes aad = aad_hex.empty() ? Bytes{} : from_hex(aad_hex);
    Envelope env = seal(pub, plaintext, aad);
    write_file(out, encode_envelope(env));
    std::printf("sealed %zu bytes for %s into %s\n", plaintext.size(), pub.alg.c_str(),
                out.c_str());
    return kExitOk;
}

int cmd_env_open(const std::string& key_path, const std::string& in, const std::string& out) {
    HybridKeyPair kp = decode_keypair(load_cbor_maybe_pem(key_path));
    Envelope env = decode_envelope(read_file(in));
    const Bytes plaintext = open(kp, env);
    write_file(out, plaintext);
    std::printf("opened %zu bytes into %s\n", plaintext.size(), out.c_str());
    return kExitOk;
}

// --- report -----------------------------------------------------------

int cmd_report(const std::string& in, const std::string& baseline_name) {
    const Bytes raw = read_file(in);
    json file;
    try {
        file = json::parse(raw.begin(), raw.end());
    } catch (const json::exception& e) {
        raise(ErrorKind::malformed_encoding, std::string("not a result file: ") + e.what());
    }
    if (!file.contains("operations") || !file["operations"].is_array() ||
        file["operations"].empty()) {
        raise(ErrorKind::invalid_parameter, "result file has an empty operations list");
    }

    const json* baseline = nullptr;
    for (const auto& op : file["operations"]) {
        if (op.at("name").get<std::string>() == baseline_name) {
            baseline = &op;
            break;
        }
    }
    if (baseline == nullptr) {
        std::string available;
        for (const auto& op : file["operations"]) {
            available += " \"" + op.at("name").get<std::string>() + "\"";
        }
        raise(ErrorKind::invalid_parameter,
              "baseline op \"" + baseline_name + "\" not in file; available:" + available);
    }

    stats::StatSummary base{};
    base.cov_pct = baseline->at("cov_pct").get<double>();

    std::printf("%-32s %8s %14s  %s\n", "Operation", "CoV", "vs baseline", "Assessment");
    std::printf("%-32s %7.1f%% %14s  %s\n", baseline_name.c_str(), base.cov_pct, "---",
                "Noise floor");
    for (const auto& op : file["operations"]) {
        const std::string name = op.at("name").get<std::string>();
        if (name == baseline_name) {
            continue;
        }
        stats::StatSummary s{};
        s.cov_pct = op.at("cov_pct").get<double>();
        char delta[24];
        std::snprintf(delta, sizeof(delta), "%+.1f pp", s.cov_pct - base.cov_pct);
        std::printf("%-32s %7.1f%% %14s  %s\n", name.c_str(), s.cov_pct, delta,
                    stats::to_string(stats::classify_cov(s, base)));
    }
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"hybrid post-quantum cryptography toolkit"};
    app.require_subcommand(1);

    // bench
    auto* bench_cmd = app.add_subcommand("bench", "run the benchmark programs");
    bench_cmd->require_subcommand(1);
    BenchFlags flags;
    auto add_common = [&flags](CLI::App* cmd) {
        cmd->add_option("--iterations", flags.iterations, "timed iterations per run")
            ->check(CLI::PositiveNumber)
            ->capture_default_str();
        cmd->add_option("--warmup", flags.warmup, "discarded warmup iterations")
            ->capture_default_str();
        cmd->add_option("--runs", flags.runs, "independent runs; lowest median selected")
            ->check(CLI::PositiveNumber)
            ->capture_default_str();
        cmd->add_option("--trim", flags.trim_pct, "per-tail outlier trim fraction")
            ->capture_default_str();
        cmd->add_option("--pin", flags.pin, "cores to pin the measuring thread to")
            ->delimiter(',');
        cmd->add_option("--seed", flags.seed, "bootstrap RNG seed")->capture_default_str();
        cmd->add_option("--save", flags.save, "write a JSON result file");
    };
    auto* bench_kem = bench_cmd->add_subcommand("kem", "three-tier KEM decomposition");
    add_common(bench_kem);
    auto* bench_sig = bench_cmd->add_subcommand("sig", "signature suite");
    add_common(bench_sig);
    auto* bench_conc = bench_cmd->add_subcommand("concurrency", "throughput sweep");
    add_common(bench_conc);
    bench_conc->add_option("--users", flags.users, "concurrent user counts (ascending)")
        ->delimiter(',')
        ->capture_default_str();
    bench_conc->add_option("--window", flags.window_s, "wall-clock seconds per level")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();

    // key
    auto* key_cmd = app.add_subcommand("key", "key management");
    key_cmd->require_subcommand(1);
    std::string key_alg{kDefaultKemAlg};
    std::string key_out = "hybridseal-key";
    bool classical_only = false;
    bool confirm_downgrade = false;
    auto* key_gen = key_cmd->add_subcommand("gen", "generate a hybrid keypair");
    key_gen->add_option("--alg", key_alg, "algorithm suite")->capture_default_str();
    key_gen->add_option("--out", key_out, "output basename")->capture_default_str();
    key_gen->add_flag("--classical-only", classical_only, "generate an X25519-only keypair");
    key_gen->add_flag("--i-understand-downgrade", confirm_downgrade,
                      "confirm loss of post-quantum protection");

    std::string inspect_path;
    auto* key_inspect = key_cmd->add_subcommand("inspect", "describe a key/ciphertext file");
    key_inspect->add_option("file", inspect_path, ".chk or .pem file")->required();

    std::string upgrade_in, upgrade_kind = "kem", upgrade_out = "hybridseal-upgraded";
    auto* key_upgrade =
        key_cmd->add_subcommand("upgrade", "upgrade a classical key to a hybrid keypair");
    key_upgrade->add_option("--in", upgrade_in, "raw classical secret key file")->required();
    key_upgrade->add_option("--kind", upgrade_kind, "kem|sig")
        ->check(CLI::IsMember({"kem", "sig"}))
        ->capture_default_str();
    key_upgrade->add_option("--out", upgrade_out, "output basename")->capture_default_str();

    // env
    auto* env_cmd = app.add_subcommand("env", "envelope encryption");
    env_cmd->require_subcommand(1);
    std::string env_key, env_in, env_out, env_aad;
    auto* env_seal = env_cmd->add_subcommand("seal", "encrypt a file to a recipient");
    env_seal->add_option("--key", env_key, "recipient public key (.chk/.pem)")->required();
    env_seal->add_option("--in", env_in, "plaintext file")->required();
    env_seal->add_option("--out", env_out, "envelope output file")->required();
    env_seal->add_option("--aad", env_aad, "additional authenticated data (hex)");
    auto* env_open = env_cmd->add_subcommand("open", "decrypt an envelope");
    env_open->add_option("--key", env_key, "recipient private key (.chk/.pem)")->required();
    env_open->add_option("--in", env_in, "envelope file")->required();
    env_open->add_option("--out", env_out, "plaintext output file")->required();

    // report
    auto* report_cmd = app.add_subcommand("report", "render the CoV classification table");
    std::string report_in, report_baseline = "aead-enc-1kb";
    report_cmd->add_option("--in", report_in, "JSON result file")->required();
    report_cmd->add_option("--baseline", report_baseline, "noise-floor operation name")
        ->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitUsage;
    }

    try {
        if (bench_kem->parsed()) return cmd_bench_kem(flags);
        if (bench_sig->parsed()) return cmd_bench_sig(flags);
        if (bench_conc->parsed()) return cmd_bench_concurrency(flags);
        if (key_gen->parsed())
            return cmd_key_gen(key_alg, key_out, classical_only, confirm_downgrade);
        if (key_inspect->parsed()) return cmd_key_inspect(inspect_path);
        if (key_upgrade->parsed()) return cmd_key_upgrade(upgrade_in, upgrade_kind, upgrade_out);
        if (env_seal->parsed()) return cmd_env_seal(env_key, env_in, env_out, env_aad);
        if (env_open->parsed()) return cmd_env_open(env_key, env_in, env_out);
        if (report_cmd->parsed()) return cmd_report(report_in, report_baseline);
    } catch (const Error& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return e.kind() == ErrorKind::downgrade_refused ? kExitRefused : kExitUsage;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "internal error: %s\n", e.what());
        return 1;
    }
    return kExitUsage;
}
