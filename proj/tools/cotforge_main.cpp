// cotforge - experiment harness for autoregressive linear-threshold thinkers.
//
// Subcommands: compile, simulate, boost, parity, fork, bench. Every run is
// reproducible from its seed: CSV outputs are byte-identical across reruns;
// wall-clock timing only ever appears in JSON summaries. COTFORGE_THREADS
// caps the trial worker pool.

#include <chrono>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"

#include "cotforge/boosting.hpp"
#include "cotforge/compiler.hpp"
#include "cotforge/consistency.hpp"
#include "cotforge/csv.hpp"
#include "cotforge/dnf_fork.hpp"
#include "cotforge/parity.hpp"
#include "cotforge/stats.hpp"
#include "cotforge/supervision.hpp"
#include "cotforge/threading.hpp"

namespace {

using namespace cotforge;
using nlohmann::json;

class Stopwatch {
public:
    Stopwatch() : start_(std::chrono::steady_clock::now()) {}
    double ms() const {
        return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start_)
            .count();
    }

private:
    std::chrono::steady_clock::time_point start_;
};

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw BadConfig("cannot open for writing: " + path);
    out << content;
}

void emit_summary(const json& summary, const std::string& path) {
    if (!path.empty()) write_file(path, summary.dump(2) + "\n");
    std::cout << summary.dump() << "\n";
}

// --config <file>: JSON object whose keys are long option names; they are
// injected as arguments ahead of the explicit command line, so explicit
// flags win (every option takes the last value).
std::vector<std::string> inject_config(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    std::string config_path;
    for (std::size_t i = 0; i + 1 < args.size();) {
        if (args[i] == "--config") {
            config_path = args[i + 1];
            args.erase(args.begin() + static_cast<std::ptrdiff_t>(i),
                       args.begin() + static_cast<std::ptrdiff_t>(i) + 2);
        } else {
            ++i;
        }
    }
    if (config_path.empty()) return args;

    std::ifstream in(config_path);
    if (!in) throw BadConfig("cannot open config: " + config_path);
    json cfg;
    in >> cfg;
    if (!cfg.is_object()) throw BadConfig("config must be a JSON object");

    std::vector<std::string> merged;
    if (!args.empty()) merged.push_back(args[0]);  // subcommand first
    for (const auto& [key, value] : cfg.items()) {
        merged.push_back("--" + key);
        if (value.is_boolean()) {
            if (!value.get<bool>()) merged.pop_back();
        } else if (value.is_string()) {
            merged.push_back(value.get<std::string>());
        } else {
            merged.push_back(value.dump());
        }
    }
    merged.insert(merged.end(), args.begin() + (args.empty() ? 0 : 1), args.end());
    return merged;
}

ThinkerPool load_or_build_pool(const std::string& pool_path, const std::string& circuit_path,
                               int kappa_cap) {
    if (!pool_path.empty()) return read_pool(pool_path);
    if (circuit_path.empty()) throw BadConfig("need --pool or --circuit");
    const auto circuit = parse_circuit_file(circuit_path);
    auto pool = permuted_compiled_pool(circuit);
    if (kappa_cap > 0 && kappa_cap < pool.kappa())
        pool.generators.resize(static_cast<std::size_t>(kappa_cap));
    verify_pool_on_inputs(pool, all_phi_images(circuit.n, circuit.size()));
    return pool;
}

// ---- compile ----

int run_compile(const std::string& circuit_path, const std::string& out_path,
                const std::string& pool_out, const std::string& verify_mode, int limit,
                std::uint64_t samples, std::uint64_t seed, const std::string& summary_path) {
    Stopwatch watch;
    const auto circuit = parse_circuit_file(circuit_path);
    const auto compiled = compile(circuit);
    if (!out_path.empty()) write_file(out_path, compiled_to_json(compiled) + "\n");
    if (!pool_out.empty()) {
        auto pool = permuted_compiled_pool(circuit);
        verify_pool_on_inputs(pool, all_phi_images(circuit.n, circuit.size()));
        write_pool(pool_out, pool);
    }

    json summary;
    summary["command"] = "compile";
    summary["n"] = compiled.n;
    summary["s"] = compiled.s;
    summary["d"] = compiled.d();
    summary["T"] = compiled.thinking_length;
    summary["B"] = compiled.blocking_magnitude;

    int violations = 0;
    if (verify_mode != "none") {
        const bool exhaustive = verify_mode == "exhaustive";
        const auto report =
            verify_compiled(compiled, circuit, exhaustive ? limit : -1, seed, samples);
        violations = static_cast<int>(report.violations.size());
        summary["verify"] = {{"mode", verify_mode},
                             {"inputs_checked", report.inputs_checked},
                             {"violations", violations}};
    }
    summary["wall_ms"] = watch.ms();
    emit_summary(summary, summary_path);
    return violations == 0 ? 0 : 1;
}

// ---- simulate ----

int run_simulate(const std::string& circuit_path, const std::string& pool_path,
                 const std::string& model_name, int m, int mstar, int kappa_cap, bool reveal_ids,
                 const std::string& out_path, std::uint64_t seed,
                 const std::string& summary_path) {
    Stopwatch watch;
    const auto pool = load_or_build_pool(pool_path, circuit_path, kappa_cap);
    InputSampler dist;
    if (!circuit_path.empty()) {
        const auto circuit = parse_circuit_file(circuit_path);
        dist = phi_image_sampler(circuit.n, circuit.size());
    } else {
        dist = uniform_input_sampler(pool.d);
    }

    if (model_name == "e2e") {  // final labels only
        const auto data = gen_e2e(pool.generators[0], dist, m, pool.T, seed);
        write_e2e_dataset(out_path, data, pool.d, pool.T, seed);
        json summary;
        summary["command"] = "simulate";
        summary["model"] = "e2e";
        summary["m"] = m;
        summary["d"] = pool.d;
        summary["T"] = pool.T;
        summary["out"] = out_path;
        summary["wall_ms"] = watch.ms();
        emit_summary(summary, summary_path);
        return 0;
    }

    CotDataset data;
    if (model_name == "uniform") {
        data = gen_cot(pool, UniformSelection{}, reveal_ids, dist, m, seed);
    } else if (model_name == "instance-label") {
        const auto& g = pool.generators[0];
        const int T = pool.T;
        data = gen_cot(pool,
                       IdentityModel{InstanceDependentSelection{[&g, T, &pool](const BitString& x) {
                           return end_to_end(g, x, T) % pool.kappa();
                       }}},
                       reveal_ids, dist, m, seed);
    } else if (model_name == "adversarial-roundrobin") {
        const int kappa = pool.kappa();
        data = gen_cot(pool,
                       IdentityModel{AdversarialSelection{[kappa](const std::vector<BitString>& xs) {
                           std::vector<int> ids(xs.size());
                           for (std::size_t i = 0; i < xs.size(); ++i)
                               ids[i] = static_cast<int>(i) % kappa;
                           return ids;
                       }}},
                       reveal_ids, dist, m, seed);
    } else if (model_name == "index") {
        data = gen_index_cot(pool, dist, m, mstar, seed);
    } else {
        throw BadConfig("unknown model: " + model_name);
    }
    write_cot_dataset(out_path, data, pool.d, pool.T, pool.kappa(), model_name, seed);

    json summary;
    summary["command"] = "simulate";
    summary["model"] = model_name;
    summary["m"] = m;
    summary["kappa"] = pool.kappa();
    summary["d"] = pool.d;
    summary["T"] = pool.T;
    summary["out"] = out_path;
    summary["wall_ms"] = watch.ms();
    emit_summary(summary, summary_path);
    return 0;
}

// ---- boost ----

ThinkerAdversary make_adversary(const std::string& name, std::uint64_t seed) {
    if (name == "round-robin") return round_robin_adversary();
    if (name == "random") return seeded_random_adversary(seed);
    if (name == "greedy") return disagreement_greedy_adversary();
    if (name.rfind("fixed:", 0) == 0) return fixed_adversary(std::stoi(name.substr(6)));
    throw BadConfig("unknown adversary: " + name);
}

int run_boost(const std::string& e2e_path, const std::string& pool_path,
              const std::string& adversary_name, bool relaxed, int mstar, int K, double delta,
              std::uint64_t seed, const std::string& model_out, const std::string& trace_out,
              const std::string& holdout_path, const std::string& summary_path) {
    Stopwatch watch;
    const auto e2e = read_e2e_dataset(e2e_path);
    auto pool = read_pool(pool_path);
    // Re-verify the end-to-end promise on the actual training support.
    std::vector<BitString> support;
    support.reserve(e2e.size());
    for (const auto& ex : e2e) support.push_back(ex.x);
    verify_pool_on_inputs(pool, support);

    auto session = open_active_session(e2e, pool, make_adversary(adversary_name, seed), mstar,
                                       !relaxed);
    BoostConfig config;
    config.K = K;
    config.delta = delta;
    config.seed = seed;
    const auto result = boost_fit(session, config);

    if (!model_out.empty()) write_file(model_out, boost_model_to_json(result.model) + "\n");
    if (!trace_out.empty()) write_file(trace_out, boost_trace_to_csv(result.trace));

    int train_wrong = 0;
    for (const auto& ex : e2e) train_wrong += predict(result.model, ex.x) != ex.y;

    json summary;
    summary["command"] = "boost";
    summary["m"] = e2e.size();
    summary["rounds"] = result.trace.rounds.size();
    summary["protocol_rounds"] = session.history().rounds.size();
    summary["training_error"] = static_cast<double>(train_wrong) / static_cast<double>(e2e.size());
    summary["error_product_bound"] = error_product_bound(result.trace);
    summary["early_terminated"] = result.trace.early_terminated;
    if (!holdout_path.empty()) {
        const auto holdout = read_e2e_dataset(holdout_path);
        int wrong = 0;
        for (const auto& ex : holdout) wrong += predict(result.model, ex.x) != ex.y;
        summary["holdout_error"] =
            static_cast<double>(wrong) / static_cast<double>(holdout.size());
    }
    summary["wall_ms"] = watch.ms();
    emit_summary(summary, summary_path);
    return 0;
}

// ---- parity ----

int run_parity(int d, int k, double eta, int m, int trials, const std::string& pi_mode,
               std::uint64_t seed, const std::string& out_path,
               const std::string& summary_path) {
    Stopwatch watch;
    struct TrialResult {
        bool recovered = false;
        int hamming = 0;
    };
    std::vector<TrialResult> results(static_cast<std::size_t>(trials));
    parallel_for(trials, [&](int trial) {
        const auto task =
            make_parity_task(d, k, eta, derive_seed(seed, "parity_task", static_cast<std::uint64_t>(trial)));
        OrderSource source;
        if (pi_mode == "fixed")
            source = FixedOrder{task.support};
        else if (pi_mode == "uniform")
            source = UniformOrder{};
        else if (pi_mode == "adversarial")
            source = sorted_by_bits_adversary(task.support);
        else
            throw BadConfig("unknown pi mode: " + pi_mode);
        const auto data = gen_parity_cot(
            task, source, m, derive_seed(seed, "parity_data", static_cast<std::uint64_t>(trial)));
        const auto recovered = recover_support(data, d, k);
        auto& res = results[static_cast<std::size_t>(trial)];
        res.recovered = recovered == task.support;
        std::vector<int> diff;
        std::set_symmetric_difference(recovered.begin(), recovered.end(), task.support.begin(),
                                      task.support.end(), std::back_inserter(diff));
        res.hamming = static_cast<int>(diff.size());
    });

    CsvWriter csv("trial,recovered,hamming");
    int successes = 0;
    for (int trial = 0; trial < trials; ++trial) {
        const auto& res = results[static_cast<std::size_t>(trial)];
        successes += res.recovered;
        csv.cell(trial).cell(static_cast<int>(res.recovered)).cell(res.hamming);
        csv.end_row();
    }
    if (!out_path.empty()) write_file(out_path, csv.str());

    json summary;
    summary["command"] = "parity";
    summary["d"] = d;
    summary["k"] = k;
    summary["eta"] = eta;
    summary["m"] = m;
    summary["trials"] = trials;
    summary["pi"] = pi_mode;
    summary["recovery_rate"] = static_cast<double>(successes) / std::max(trials, 1);
    summary["wall_ms"] = watch.ms();
    emit_summary(summary, summary_path);
    return 0;
}

// ---- fork ----

int run_fork(int N, int K, const std::string& predicate_name, const std::string& mode, int m,
             std::uint64_t seed, const std::string& out_path, const std::string& summary_path) {
    Stopwatch watch;
    Predicate p;
    if (predicate_name == "xor")
        p = xor_predicate(K);
    else if (predicate_name == "and")
        p = and_predicate(K);
    else if (predicate_name.rfind("table:", 0) == 0)
        p = predicate_from_hex(K, predicate_name.substr(6));
    else
        throw BadConfig("unknown predicate: " + predicate_name);

    json summary;
    summary["command"] = "fork";
    summary["N"] = N;
    summary["K"] = K;
    summary["predicate"] = predicate_name;

    if (mode == "sample") {
        const auto sample = sample_hard_distribution(N, K, m, seed);
        std::ostringstream lines;
        for (const auto& z : sample) lines << to_string(z) << "\n";
        if (!out_path.empty()) write_file(out_path, lines.str());
        summary["mode"] = "sample";
        summary["m"] = m;
        summary["wall_ms"] = watch.ms();
        emit_summary(summary, summary_path);
        return 0;
    }
    if (mode != "verify") throw BadConfig("mode must be verify or sample");

    // Exhaustive verification over every x and every ordered hyperedge:
    // psi = phi = P on encodings, single-term satisfaction, fork structure.
    const auto edges = all_hyperedges(N, K);
    std::vector<BitString> encodings;
    encodings.reserve(edges.size());
    for (const auto& edge : edges) encodings.push_back(encode_hyperedge(edge, N, K));

    long long checked = 0;
    json violations = json::array();
    for (unsigned xv = 0; xv < (1u << N); ++xv) {
        const BitString x = bits_of(xv, static_cast<std::size_t>(N));
        const auto psi = build_psi(p, x);
        const auto phi = build_phi(p, x);
        for (std::size_t e = 0; e < edges.size(); ++e) {
            const auto& z = encodings[e];
            BitString xs;
            for (int v : edges[e].vertices) xs.push_back(x[static_cast<std::size_t>(v)]);
            const bool expected = p.eval(xs);
            const bool psi_val = eval_dnf(psi, z);
            const bool phi_val = eval_cnf(phi, z);
            int satisfied = 0;
            for (const auto& term : psi.terms) {
                bool sat = true;
                for (const auto& lit : term)
                    if ((z[static_cast<std::size_t>(lit.var)] != 0) != lit.positive) {
                        sat = false;
                        break;
                    }
                satisfied += sat;
            }
            if (psi_val != expected || phi_val != expected || satisfied != (expected ? 1 : 0)) {
                violations.push_back({{"x", to_string(x)}, {"edge_encoding", to_string(z)}});
            }
            ++checked;
        }
        if (!psi.terms.empty() && !phi.clauses.empty()) {
            const auto report =
                check_fork(circuit_from_dnf(psi), circuit_from_cnf(phi), encodings);
            for (const auto& v : report.violations)
                violations.push_back({{"x", to_string(x)},
                                      {"edge_encoding", to_string(v.input)},
                                      {"kind", v.kind}});
        }
    }
    summary["mode"] = "verify";
    summary["checked"] = checked;
    summary["violations"] = violations;
    summary["ok"] = violations.empty();
    summary["wall_ms"] = watch.ms();
    if (!out_path.empty()) write_file(out_path, summary.dump(2) + "\n");
    emit_summary(summary, summary_path);
    return violations.empty() ? 0 : 1;
}

// ---- bench ----

// Smallest m on a sqrt(2) grid reaching the target recovery rate.
struct SweepPoint {
    int k = 0;
    std::string mode;
    int m_required = -1;
    double success_rate = 0.0;
};

double recovery_rate(int d, int k, double eta, int m, int trials, bool single_mode,
                     std::uint64_t seed) {
    std::vector<int> wins(static_cast<std::size_t>(trials), 0);
    parallel_for(trials, [&](int trial) {
        const auto task = make_parity_task(
            d, k, eta, derive_seed(seed, "bench_task", static_cast<std::uint64_t>(trial)));
        const auto data_seed = derive_seed(seed, "bench_data", static_cast<std::uint64_t>(trial));
        if (single_mode) {
            const auto data = gen_parity_cot(task, FixedOrder{task.support}, m, data_seed);
            wins[static_cast<std::size_t>(trial)] =
                recover_support_single(data, d, k) == task.support;
        } else {
            const auto data = gen_parity_cot(task, UniformOrder{}, m, data_seed);
            wins[static_cast<std::size_t>(trial)] = recover_support(data, d, k) == task.support;
        }
    });
    int total = 0;
    for (int w : wins) total += w;
    return static_cast<double>(total) / std::max(trials, 1);
}

SweepPoint sweep_one(int d, int k, double eta, double target, int trials, bool single_mode,
                     std::uint64_t seed) {
    SweepPoint point;
    point.k = k;
    point.mode = single_mode ? "single" : "multi";
    double m_real = 32.0;
    for (int step = 0; step < 40; ++step) {
        const int m = static_cast<int>(std::llround(m_real));
        const double rate = recovery_rate(d, k, eta, m, trials, single_mode,
                                          derive_seed(seed, "bench_step", static_cast<std::uint64_t>(step)));
        if (rate >= target) {
            point.m_required = m;
            point.success_rate = rate;
            return point;
        }
        m_real *= std::sqrt(2.0);
    }
    return point;  // m_required = -1: not reached within the grid
}

int run_bench(int d, const std::vector<int>& ks, double eta, const std::string& modes_arg,
              double target, int trials, std::uint64_t seed, const std::string& out_path,
              const std::string& summary_path) {
    Stopwatch watch;
    std::vector<std::string> modes;
    {
        std::stringstream ss(modes_arg);
        std::string tok;
        while (std::getline(ss, tok, ','))
            if (!tok.empty()) modes.push_back(tok);
    }
    std::vector<SweepPoint> points;
    for (const auto& mode : modes) {
        if (mode != "single" && mode != "multi") throw BadConfig("modes must be single|multi");
        for (int k : ks) points.push_back(sweep_one(d, k, eta, target, trials, mode == "single", seed));
    }

    CsvWriter csv("experiment,mode,k,m_required,success_rate");
    for (const auto& point : points) {
        csv.cell(std::string("parity_sweep")).cell(point.mode).cell(point.k).cell(point.m_required);
        csv.cell(point.success_rate);
        csv.end_row();
    }
    if (!out_path.empty()) write_file(out_path, csv.str());

    json summary;
    summary["command"] = "bench";
    summary["d"] = d;
    summary["eta"] = eta;
    summary["target"] = target;
    summary["trials"] = trials;
    json curve = json::array();
    for (const auto& point : points)
        curve.push_back({{"mode", point.mode},
                         {"k", point.k},
                         {"m_required", point.m_required},
                         {"success_rate", point.success_rate}});
    summary["curve"] = curve;
    summary["wall_ms"] = watch.ms();
    emit_summary(summary, summary_path);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"chain-of-thought thinker simulator and experiment harness"};
    app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
    app.require_subcommand(1);

    std::string config_path;
    app.add_option("--config", config_path, "JSON file with option defaults");

    // compile
    auto* compile_cmd = app.add_subcommand("compile", "compile a circuit into one generator");
    std::string circuit_path, out_path, pool_out, verify_mode = "exhaustive", summary_path;
    int limit = 16;
    std::uint64_t samples = 10000, seed = 0;
    compile_cmd->add_option("--circuit", circuit_path, "circuit text file")->required();
    compile_cmd->add_option("--out", out_path, "compiled generator JSON");
    compile_cmd->add_option("--pool-out", pool_out, "write the permuted-thinker pool JSON");
    compile_cmd->add_option("--verify", verify_mode, "exhaustive|sampled|none");
    compile_cmd->add_option("--limit", limit, "exhaustive verification limit on n");
    compile_cmd->add_option("--samples", samples, "sampled verification draws");
    compile_cmd->add_option("--seed", seed, "seed");
    compile_cmd->add_option("--summary", summary_path, "summary JSON path");

    // simulate
    auto* sim_cmd = app.add_subcommand("simulate", "generate CoT datasets under a supervision model");
    std::string sim_circuit, sim_pool, sim_model = "uniform", sim_out = "dataset.jsonl",
                sim_summary;
    int sim_m = 100, sim_mstar = 10, sim_kappa = 0;
    bool reveal_ids = false;
    std::uint64_t sim_seed = 0;
    sim_cmd->add_option("--circuit", sim_circuit, "circuit text file (pool = permuted thinkers)");
    sim_cmd->add_option("--pool", sim_pool, "pool JSON (alternative to --circuit)");
    sim_cmd->add_option("--model", sim_model,
                        "e2e|uniform|instance-label|adversarial-roundrobin|index");
    sim_cmd->add_option("--m", sim_m, "number of examples");
    sim_cmd->add_option("--mstar", sim_mstar, "batch size for the index model");
    sim_cmd->add_option("--kappa", sim_kappa, "cap the pool size (0 = all permutations)");
    sim_cmd->add_flag("--reveal-ids", reveal_ids, "attach thinker identities");
    sim_cmd->add_option("--out", sim_out, "output dataset (JSON lines)");
    sim_cmd->add_option("--seed", sim_seed, "seed");
    sim_cmd->add_option("--summary", sim_summary, "summary JSON path");

    // boost
    auto* boost_cmd = app.add_subcommand("boost", "boosting-based learner on an e2e dataset");
    std::string boost_e2e, boost_pool, boost_adversary = "greedy", boost_model_out,
                boost_trace_out, boost_holdout, boost_summary;
    bool relaxed = false;
    int boost_mstar = 100, boost_K = 0;
    double boost_delta = 0.1;
    std::uint64_t boost_seed = 0;
    boost_cmd->add_option("--e2e", boost_e2e, "end-to-end dataset (JSON lines)")->required();
    boost_cmd->add_option("--pool", boost_pool, "thinker pool JSON")->required();
    boost_cmd->add_option("--adversary", boost_adversary, "fixed:N|round-robin|random|greedy");
    boost_cmd->add_flag("--relaxed", relaxed, "relaxed protocol (thinker fixed before the subset)");
    boost_cmd->add_option("--mstar", boost_mstar, "per-round CoT budget");
    boost_cmd->add_option("--K", boost_K, "boosting rounds (0 = ceil(8 ln m))");
    boost_cmd->add_option("--delta", boost_delta, "confidence parameter");
    boost_cmd->add_option("--seed", boost_seed, "seed");
    boost_cmd->add_option("--model-out", boost_model_out, "model JSON path");
    boost_cmd->add_option("--trace-out", boost_trace_out, "trace CSV path");
    boost_cmd->add_option("--holdout", boost_holdout, "held-out e2e dataset for evaluation");
    boost_cmd->add_option("--summary", boost_summary, "summary JSON path");

    // parity
    auto* parity_cmd = app.add_subcommand("parity", "noisy parity support recovery trials");
    int par_d = 100, par_k = 50, par_m = 1000, par_trials = 100;
    double par_eta = 0.1;
    std::string par_pi = "uniform", par_out, par_summary;
    std::uint64_t par_seed = 0;
    parity_cmd->add_option("--d", par_d, "ambient dimension");
    parity_cmd->add_option("--k", par_k, "support size");
    parity_cmd->add_option("--eta", par_eta, "per-step flip probability");
    parity_cmd->add_option("--m", par_m, "samples per trial");
    parity_cmd->add_option("--trials", par_trials, "number of trials");
    parity_cmd->add_option("--pi", par_pi, "fixed|uniform|adversarial");
    parity_cmd->add_option("--seed", par_seed, "seed");
    parity_cmd->add_option("--out", par_out, "per-trial CSV path");
    parity_cmd->add_option("--summary", par_summary, "summary JSON path");

    // fork
    auto* fork_cmd = app.add_subcommand("fork", "hyperedge DNF/CNF fork constructions");
    int fork_N = 5, fork_K = 2, fork_m = 100;
    std::string fork_predicate = "xor", fork_mode = "verify", fork_out, fork_summary;
    std::uint64_t fork_seed = 0;
    fork_cmd->add_option("--N", fork_N, "vertex count");
    fork_cmd->add_option("--K", fork_K, "hyperedge arity");
    fork_cmd->add_option("--predicate", fork_predicate, "xor|and|table:<hex>");
    fork_cmd->add_option("--mode", fork_mode, "verify|sample");
    fork_cmd->add_option("--m", fork_m, "sample count (sample mode)");
    fork_cmd->add_option("--seed", fork_seed, "seed");
    fork_cmd->add_option("--out", fork_out, "report / sample output path");
    fork_cmd->add_option("--summary", fork_summary, "summary JSON path");

    // bench
    auto* bench_cmd = app.add_subcommand("bench", "parity sample-complexity sweeps");
    int bench_d = 100, bench_trials = 30;
    double bench_eta = 0.0, bench_target = 0.95;
    std::string bench_ks = "10,30,50,70,90", bench_modes = "single,multi", bench_out,
                bench_summary;
    std::uint64_t bench_seed = 0;
    bench_cmd->add_option("--d", bench_d, "ambient dimension");
    bench_cmd->add_option("--ks", bench_ks, "comma-separated support sizes");
    bench_cmd->add_option("--eta", bench_eta, "per-step flip probability");
    bench_cmd->add_option("--modes", bench_modes, "single,multi");
    bench_cmd->add_option("--target", bench_target, "required recovery rate");
    bench_cmd->add_option("--trials", bench_trials, "trials per grid point");
    bench_cmd->add_option("--seed", bench_seed, "seed");
    bench_cmd->add_option("--out", bench_out, "CSV path");
    bench_cmd->add_option("--summary", bench_summary, "summary JSON path");

    try {
        const auto args = inject_config(argc, argv);
        std::vector<const char*> cargs;
        cargs.push_back(argv[0]);
        for (const auto& a : args) cargs.push_back(a.c_str());
        app.parse(static_cast<int>(cargs.size()), cargs.data());

        if (*compile_cmd)
            return run_compile(circuit_path, out_path, pool_out, verify_mode, limit, samples, seed,
                               summary_path);
        if (*sim_cmd)
            return run_simulate(sim_circuit, sim_pool, sim_model, sim_m, sim_mstar, sim_kappa,
                                reveal_ids, sim_out, sim_seed, sim_summary);
        if (*boost_cmd)
            return run_boost(boost_e2e, boost_pool, boost_adversary, relaxed, boost_mstar, boost_K,
                             boost_delta, boost_seed, boost_model_out, boost_trace_out,
                             boost_holdout, boost_summary);
        if (*parity_cmd)
            return run_parity(par_d, par_k, par_eta, par_m, par_trials, par_pi, par_seed, par_out,
                              par_summary);
        if (*fork_cmd)
            return run_fork(fork_N, fork_K, fork_predicate, fork_mode, fork_m, fork_seed, fork_out,
                            fork_summary);
        if (*bench_cmd) {
            std::vector<int> ks;
            std::stringstream ss(bench_ks);
            std::string tok;
            while (std::getline(ss, tok, ','))
                if (!tok.empty()) ks.push_back(std::stoi(tok));
            return run_bench(bench_d, ks, bench_eta, bench_modes, bench_target, bench_trials,
                             bench_seed, bench_out, bench_summary);
        }
        return 1;
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
