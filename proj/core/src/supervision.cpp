#include "cotforge/supervision.hpp"

#include <algorithm>
#include <fstream>

#include "cotforge/compiler.hpp"
#include "cotforge/errors.hpp"
#include "json.hpp"

namespace cotforge {

InputSampler uniform_input_sampler(int d) {
    return [d](Rng& rng) { return random_bits(static_cast<std::size_t>(d), rng); };
}

InputSampler phi_image_sampler(int n, int s) {
    return [n, s](Rng& rng) {
        return feature_map(random_bits(static_cast<std::size_t>(n), rng), s);
    };
}

InputSampler table_sampler(std::vector<BitString> rows) {
    if (rows.empty()) throw BadConfig("table_sampler: empty table");
    return [rows = std::move(rows)](Rng& rng) {
        return rows[static_cast<std::size_t>(rng.below(rows.size()))];
    };
}

ThinkerPool permuted_compiled_pool(const ThresholdCircuit& c, int max_thinkers) {
    const int h = c.hidden_count();
    std::uint64_t count = 1;
    for (int i = 2; i <= h; ++i) {
        count *= static_cast<std::uint64_t>(i);
        if (count > static_cast<std::uint64_t>(max_thinkers))
            throw UnsupportedSize("permuted_compiled_pool: (s-1)! exceeds max_thinkers");
    }
    ThinkerPool pool;
    std::vector<int> pi(static_cast<std::size_t>(h));
    for (int i = 0; i < h; ++i) pi[static_cast<std::size_t>(i)] = i;
    do {
        const CompiledGenerator cg = compile(permute_hidden(c, pi));
        pool.generators.push_back(cg.generator);
        pool.d = cg.d();
        pool.T = cg.thinking_length;
    } while (std::next_permutation(pi.begin(), pi.end()));
    return pool;
}

void verify_pool_exhaustive(ThinkerPool& pool) {
    if (pool.d > 16) throw UnsupportedSize("exhaustive pool verification needs d <= 16");
    if (pool.generators.empty()) throw BadConfig("empty pool");
    for (int len = 1; len <= pool.d; ++len) {
        for (std::uint64_t v = 0; v < (1ull << len); ++v) {
            const BitString x = bits_of(v, static_cast<std::size_t>(len));
            const int ref = end_to_end(pool.generators[0], x, pool.T);
            for (std::size_t j = 1; j < pool.generators.size(); ++j)
                if (end_to_end(pool.generators[j], x, pool.T) != ref)
                    throw EteMismatch("pool members 0 and " + std::to_string(j) +
                                      " disagree on " + to_string(x));
        }
    }
    pool.verified_e2e_equal = true;
    pool.evidence = "exhaustive over all sequences of length 1.." + std::to_string(pool.d);
}

void verify_pool_on_inputs(ThinkerPool& pool, const std::vector<BitString>& inputs) {
    if (pool.generators.empty()) throw BadConfig("empty pool");
    if (inputs.empty()) throw BadConfig("empty verification set");
    for (const auto& x : inputs) {
        const int ref = end_to_end(pool.generators[0], x, pool.T);
        for (std::size_t j = 1; j < pool.generators.size(); ++j)
            if (end_to_end(pool.generators[j], x, pool.T) != ref)
                throw EteMismatch("pool members 0 and " + std::to_string(j) + " disagree on " +
                                  to_string(x));
    }
    pool.verified_e2e_equal = true;
    pool.evidence = "explicit support set of " + std::to_string(inputs.size()) + " inputs";
}

void verify_pool_sampled(ThinkerPool& pool, const InputSampler& dist, std::size_t samples,
                         std::uint64_t seed) {
    if (pool.generators.empty()) throw BadConfig("empty pool");
    Rng rng(derive_seed(seed, "verify_pool", 0));
    for (std::size_t i = 0; i < samples; ++i) {
        const BitString x = dist(rng);
        const int ref = end_to_end(pool.generators[0], x, pool.T);
        for (std::size_t j = 1; j < pool.generators.size(); ++j)
            if (end_to_end(pool.generators[j], x, pool.T) != ref)
                throw EteMismatch("pool members 0 and " + std::to_string(j) + " disagree on " +
                                  to_string(x));
    }
    pool.verified_e2e_equal = true;
    pool.evidence = "sampled, " + std::to_string(samples) + " points, seed " + std::to_string(seed);
}

std::string identity_model_name(const IdentityModel& model) {
    if (std::holds_alternative<AdversarialSelection>(model)) return "adversarial";
    if (std::holds_alternative<InstanceDependentSelection>(model)) return "instance";
    if (std::holds_alternative<InstanceDependentSampling>(model)) return "instance_sampling";
    return "uniform";
}

E2eDataset gen_e2e(const LinearThresholdGenerator& target, const InputSampler& dist, int m, int T,
                   std::uint64_t seed) {
    E2eDataset out;
    out.reserve(static_cast<std::size_t>(m));
    for (int i = 0; i < m; ++i) {
        Rng rng(derive_seed(seed, "e2e_x", static_cast<std::uint64_t>(i)));
        E2eExample ex;
        ex.x = dist(rng);
        ex.y = end_to_end(target, ex.x, T);
        out.push_back(std::move(ex));
    }
    return out;
}

CotDataset gen_cot(const ThinkerPool& pool, const IdentityModel& model, bool reveal_ids,
                   const InputSampler& dist, int m, std::uint64_t seed) {
    if (!pool.verified_e2e_equal) throw UnverifiedPool();
    const int kappa = pool.kappa();

    std::vector<BitString> xs(static_cast<std::size_t>(m));
    for (int i = 0; i < m; ++i) {
        Rng rng(derive_seed(seed, "cot_x", static_cast<std::uint64_t>(i)));
        xs[static_cast<std::size_t>(i)] = dist(rng);
    }

    std::vector<int> ids(static_cast<std::size_t>(m));
    if (const auto* adv = std::get_if<AdversarialSelection>(&model)) {
        ids = adv->assign(xs);
        if (static_cast<int>(ids.size()) != m)
            throw BadConfig("adversarial selection returned wrong identity count");
    } else if (const auto* sel = std::get_if<InstanceDependentSelection>(&model)) {
        for (int i = 0; i < m; ++i)
            ids[static_cast<std::size_t>(i)] = sel->selector(xs[static_cast<std::size_t>(i)]);
    } else if (const auto* smp = std::get_if<InstanceDependentSampling>(&model)) {
        for (int i = 0; i < m; ++i) {
            Rng rng(derive_seed(seed, "cot_id", static_cast<std::uint64_t>(i)));
            const auto probs = smp->conditional(xs[static_cast<std::size_t>(i)]);
            if (static_cast<int>(probs.size()) != kappa)
                throw BadConfig("conditional distribution has wrong arity");
            double u = rng.real01();
            int pick = kappa - 1;
            for (int j = 0; j < kappa; ++j) {
                u -= probs[static_cast<std::size_t>(j)];
                if (u < 0) {
                    pick = j;
                    break;
                }
            }
            ids[static_cast<std::size_t>(i)] = pick;
        }
    } else {
        for (int i = 0; i < m; ++i) {
            Rng rng(derive_seed(seed, "cot_id", static_cast<std::uint64_t>(i)));
            ids[static_cast<std::size_t>(i)] = static_cast<int>(rng.below(static_cast<std::uint64_t>(kappa)));
        }
    }

    CotDataset out;
    out.reserve(static_cast<std::size_t>(m));
    for (int i = 0; i < m; ++i) {
        const int j = ids[static_cast<std::size_t>(i)];
        if (j < 0 || j >= kappa) throw BadConfig("identity out of range");
        CotExample ex;
        ex.x = xs[static_cast<std::size_t>(i)];
        ex.z = chain_of_thought(pool.generators[static_cast<std::size_t>(j)], ex.x, pool.T);
        if (reveal_ids) ex.identity = j;
        out.push_back(std::move(ex));
    }
    return out;
}

CotDataset gen_index_cot(const ThinkerPool& pool, const InputSampler& dist, int m, int mstar,
                         std::uint64_t seed, bool identity_mapping) {
    if (!pool.verified_e2e_equal) throw UnverifiedPool();
    if (mstar < 1 || m % mstar != 0)
        throw BadPartition("gen_index_cot: batch size must divide the sample count");
    const int q = m / mstar;
    if (identity_mapping && q != pool.kappa())
        throw BadPartition("gen_index_cot: identity mapping needs exactly kappa batches");
    std::vector<int> batch_thinker(static_cast<std::size_t>(q));
    for (int k = 0; k < q; ++k) {
        if (identity_mapping) {
            batch_thinker[static_cast<std::size_t>(k)] = k;
            continue;
        }
        Rng rng(derive_seed(seed, "index_g", static_cast<std::uint64_t>(k)));
        batch_thinker[static_cast<std::size_t>(k)] =
            static_cast<int>(rng.below(static_cast<std::uint64_t>(pool.kappa())));
    }
    CotDataset out;
    out.reserve(static_cast<std::size_t>(m));
    for (int i = 0; i < m; ++i) {
        Rng rng(derive_seed(seed, "index_x", static_cast<std::uint64_t>(i)));
        const int k = i / mstar;
        CotExample ex;
        ex.x = dist(rng);
        ex.z = chain_of_thought(
            pool.generators[static_cast<std::size_t>(batch_thinker[static_cast<std::size_t>(k)])],
            ex.x, pool.T);
        ex.index = k;
        out.push_back(std::move(ex));
    }
    return out;
}

ThinkerAdversary fixed_adversary(int pool_index) {
    return [pool_index](const ThinkerPool&, const E2eDataset&, const ActiveHistory&,
                        const std::vector<int>*) { return pool_index; };
}

ThinkerAdversary round_robin_adversary() {
    return [](const ThinkerPool& pool, const E2eDataset&, const ActiveHistory& history,
              const std::vector<int>*) {
        return static_cast<int>(history.rounds.size() % pool.generators.size());
    };
}

ThinkerAdversary seeded_random_adversary(std::uint64_t seed) {
    return [seed](const ThinkerPool& pool, const E2eDataset&, const ActiveHistory& history,
                  const std::vector<int>*) {
        Rng rng(derive_seed(seed, "adversary", history.rounds.size()));
        return static_cast<int>(rng.below(pool.generators.size()));
    };
}

ThinkerAdversary disagreement_greedy_adversary() {
    return [](const ThinkerPool& pool, const E2eDataset& e2e, const ActiveHistory& history,
              const std::vector<int>* selected) {
        int best = 0;
        long best_score = -1;
        for (int j = 0; j < pool.kappa(); ++j) {
            long score = 0;
            for (const auto& round : history.rounds) {
                for (std::size_t r = 0; r < round.requested.size(); ++r) {
                    const int i = round.requested[r];
                    if (selected &&
                        std::find(selected->begin(), selected->end(), i) == selected->end())
                        continue;  // strict mode scores only the current subset
                    const BitString mine = chain_of_thought(
                        pool.generators[static_cast<std::size_t>(j)],
                        e2e[static_cast<std::size_t>(i)].x, pool.T);
                    const BitString& theirs = round.traces[r];
                    for (std::size_t b = 0; b < mine.size(); ++b)
                        if (mine[b] != theirs[b]) ++score;
                }
            }
            if (score > best_score) {
                best_score = score;
                best = j;
            }
        }
        return best;
    };
}

ActiveSession::ActiveSession(E2eDataset e2e, ThinkerPool pool, ThinkerAdversary adversary,
                             int budget, bool strict)
    : e2e_(std::move(e2e)),
      pool_(std::move(pool)),
      adversary_(std::move(adversary)),
      budget_(budget),
      strict_(strict) {
    if (!pool_.verified_e2e_equal) throw UnverifiedPool();
    if (budget_ < 1) throw BadConfig("active session: budget must be positive");
    // The e2e labels must be the pool's end-to-end function, or the protocol
    // promise (traces always end in h*(x)) breaks silently.
    for (const auto& ex : e2e_)
        if (end_to_end(pool_.generators[0], ex.x, pool_.T) != ex.y)
            throw EteMismatch("e2e label disagrees with the pool on " + to_string(ex.x));
}

std::vector<BitString> ActiveSession::request_cots(const std::vector<int>& indices) {
    if (static_cast<int>(indices.size()) > budget_)
        throw BudgetExceeded("requested " + std::to_string(indices.size()) + " CoTs, budget is " +
                             std::to_string(budget_));
    for (int i : indices)
        if (i < 0 || i >= static_cast<int>(e2e_.size()))
            throw BadConfig("request_cots: index out of range");

    const int thinker = strict_ ? adversary_(pool_, e2e_, history_, &indices)
                                : adversary_(pool_, e2e_, history_, nullptr);
    if (thinker < 0 || thinker >= pool_.kappa())
        throw BadConfig("adversary returned an invalid pool index");

    ActiveRound round;
    round.requested = indices;
    round.thinker = thinker;
    round.traces.reserve(indices.size());
    for (int i : indices)
        round.traces.push_back(chain_of_thought(pool_.generators[static_cast<std::size_t>(thinker)],
                                                e2e_[static_cast<std::size_t>(i)].x, pool_.T));
    history_.rounds.push_back(round);
    return round.traces;
}

ActiveSession open_active_session(E2eDataset e2e, ThinkerPool pool, ThinkerAdversary adversary,
                                  int budget, bool strict) {
    return ActiveSession(std::move(e2e), std::move(pool), std::move(adversary), budget, strict);
}

namespace {

nlohmann::json bits_to_json(const BitString& v) {
    nlohmann::json arr = nlohmann::json::array();
    for (auto b : v) arr.push_back(static_cast<int>(b));
    return arr;
}

BitString bits_from_json(const nlohmann::json& arr) {
    BitString v;
    v.reserve(arr.size());
    for (const auto& b : arr) v.push_back(static_cast<std::uint8_t>(b.get<int>()));
    return v;
}

}  // namespace

void write_cot_dataset(const std::string& path, const CotDataset& data, int d, int T, int kappa,
                       const std::string& model, std::uint64_t seed) {
    std::ofstream out(path);
    if (!out) throw BadConfig("cannot open for writing: " + path);
    nlohmann::json header;
    header["type"] = "cot";
    header["d"] = d;
    header["T"] = T;
    header["kappa"] = kappa;
    header["model"] = model;
    header["seed"] = seed;
    out << header.dump() << "\n";
    for (const auto& ex : data) {
        nlohmann::json j;
        j["x"] = bits_to_json(ex.x);
        j["z"] = bits_to_json(ex.z);
        if (ex.identity) j["identity"] = *ex.identity;
        if (ex.index) j["index"] = *ex.index;
        out << j.dump() << "\n";
    }
}

CotDataset read_cot_dataset(const std::string& path, int* d, int* T, int* kappa) {
    std::ifstream in(path);
    if (!in) throw BadConfig("cannot open dataset: " + path);
    std::string line;
    if (!std::getline(in, line)) throw BadConfig("dataset missing header: " + path);
    const auto header = nlohmann::json::parse(line);
    if (header.value("type", "") != "cot") throw BadConfig("not a CoT dataset: " + path);
    if (d) *d = header.at("d").get<int>();
    if (T) *T = header.at("T").get<int>();
    if (kappa) *kappa = header.at("kappa").get<int>();
    CotDataset data;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        const auto j = nlohmann::json::parse(line);
        CotExample ex;
        ex.x = bits_from_json(j.at("x"));
        ex.z = bits_from_json(j.at("z"));
        if (j.contains("identity")) ex.identity = j.at("identity").get<int>();
        if (j.contains("index")) ex.index = j.at("index").get<int>();
        data.push_back(std::move(ex));
    }
    return data;
}

void write_e2e_dataset(const std::string& path, const E2eDataset& data, int d, int T,
                       std::uint64_t seed) {
    std::ofstream out(path);
    if (!out) throw BadConfig("cannot open for writing: " + path);
    nlohmann::json header;
    header["type"] = "e2e";
    header["d"] = d;
    header["T"] = T;
    header["seed"] = seed;
    out << header.dump() << "\n";
    for (const auto& ex : data) {
        nlohmann::json j;
        j["x"] = bits_to_json(ex.x);
        j["y"] = ex.y;
        out << j.dump() << "\n";
    }
}

E2eDataset read_e2e_dataset(const std::string& path, int* d, int* T) {
    std::ifstream in(path);
    if (!in) throw BadConfig("cannot open dataset: " + path);
    std::string line;
    if (!std::getline(in, line)) throw BadConfig("dataset missing header: " + path);
    const auto header = nlohmann::json::parse(line);
    if (header.value("type", "") != "e2e") throw BadConfig("not an e2e dataset: " + path);
    if (d) *d = header.at("d").get<int>();
    if (T) *T = header.at("T").get<int>();
    E2eDataset data;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        const auto j = nlohmann::json::parse(line);
        E2eExample ex;
        ex.x = bits_from_json(j.at("x"));
        ex.y = j.at("y").get<int>();
        data.push_back(std::move(ex));
    }
    return data;
}

void write_pool(const std::string& path, const ThinkerPool& pool) {
    std::ofstream out(path);
    if (!out) throw BadConfig("cannot open for writing: " + path);
    nlohmann::json j;
    j["d"] = pool.d;
    j["T"] = pool.T;
    j["verified"] = pool.verified_e2e_equal;
    j["evidence"] = pool.evidence;
    nlohmann::json gens = nlohmann::json::array();
    for (const auto& g : pool.generators) gens.push_back(g.weights);
    j["generators"] = gens;
    out << j.dump(2) << "\n";
}

ThinkerPool read_pool(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw BadConfig("cannot open pool: " + path);
    nlohmann::json j;
    in >> j;
    ThinkerPool pool;
    pool.d = j.at("d").get<int>();
    pool.T = j.at("T").get<int>();
    pool.verified_e2e_equal = j.value("verified", false);
    pool.evidence = j.value("evidence", "");
    for (const auto& g : j.at("generators")) {
        LinearThresholdGenerator gen;
        gen.weights = g.get<std::vector<double>>();
        pool.generators.push_back(std::move(gen));
    }
    return pool;
}

}  // namespace cotforge
