#include "cotforge/boosting.hpp"

#include <limits>
#include <sstream>

#include "cotforge/consistency.hpp"
#include "cotforge/errors.hpp"
#include "json.hpp"

namespace cotforge {

long long sample_size(double eps, double delta, double vc, double c) {
    if (eps <= 0 || eps >= 1 || delta <= 0 || delta >= 1)
        throw BadConfig("sample_size: eps and delta must be in (0,1)");
    if (vc < 1) throw BadConfig("sample_size: vc must be at least 1");
    const double log_eps = std::log(1.0 / eps);
    const double log_ratio = std::log(vc / eps);
    const double value = c * (vc * log_eps * log_ratio * log_ratio + std::log(1.0 / delta)) / eps;
    return static_cast<long long>(std::ceil(value));
}

int choose_k(long long m) {
    if (m < 1) throw BadConfig("choose_k: m must be positive");
    return static_cast<int>(std::ceil(8.0 * std::log(static_cast<double>(m))));
}

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::vector<int> sample_from_distribution(const std::vector<double>& dist, int count, Rng& rng) {
    std::vector<double> cdf(dist.size());
    double acc = 0.0;
    for (std::size_t i = 0; i < dist.size(); ++i) {
        acc += dist[i];
        cdf[i] = acc;
    }
    std::vector<int> picks;
    picks.reserve(static_cast<std::size_t>(count));
    for (int i = 0; i < count; ++i) {
        const double u = rng.real01() * acc;
        const auto it = std::upper_bound(cdf.begin(), cdf.end(), u);
        picks.push_back(static_cast<int>(std::min<std::size_t>(
            static_cast<std::size_t>(it - cdf.begin()), dist.size() - 1)));
    }
    return picks;
}

double shannon_entropy(const std::vector<double>& dist) {
    double h = 0.0;
    for (double p : dist)
        if (p > 0) h -= p * std::log(p);
    return h;
}

}  // namespace

BoostResult boost_fit(ActiveSession& session, const BoostConfig& config) {
    const E2eDataset& data = session.e2e();
    const int m = static_cast<int>(data.size());
    if (m < 1) throw NoData();
    const int K = config.K > 0 ? config.K : choose_k(m);
    const int L = config.inner_attempts > 0
                      ? config.inner_attempts
                      : static_cast<int>(std::ceil(std::log(2.0 * K / config.delta)));
    const int T = session.T();
    const int d = session.d();

    BoostResult result;
    result.model.T = T;
    result.model.d = d;

    std::vector<double> dist(static_cast<std::size_t>(m), 1.0 / m);
    std::uint64_t round_counter = 0;

    for (int k = 1; k <= K; ++k) {
        BoostTrace::Round round;
        round.entropy = shannon_entropy(dist);

        LinearThresholdGenerator weak;
        std::vector<int> preds(static_cast<std::size_t>(m));
        double eps = 1.0;
        for (int attempt = 1; attempt <= L; ++attempt) {
            Rng rng(derive_seed(config.seed, "boost_subsample", round_counter++));
            std::vector<int> picks = sample_from_distribution(dist, session.budget(), rng);
            std::sort(picks.begin(), picks.end());
            picks.erase(std::unique(picks.begin(), picks.end()), picks.end());

            const std::vector<BitString> traces = session.request_cots(picks);

            FeasibilityProblem problem;
            problem.dimension = d;
            for (std::size_t i = 0; i < picks.size(); ++i) {
                auto cs = cot_to_constraints(data[static_cast<std::size_t>(picks[i])].x, traces[i], d);
                problem.constraints.insert(problem.constraints.end(), cs.begin(), cs.end());
            }
            try {
                weak = consistent_generator(problem, config.engine);
            } catch (const NoConsistentGenerator&) {
                // A single round's traces come from one thinker, so this can
                // only mean the protocol was violated upstream.
                throw Error("boost_fit: consistency oracle failed in round " + std::to_string(k) +
                            " attempt " + std::to_string(attempt));
            }

            eps = 0.0;
            for (int i = 0; i < m; ++i) {
                preds[static_cast<std::size_t>(i)] = end_to_end(weak, data[static_cast<std::size_t>(i)].x, T);
                if (preds[static_cast<std::size_t>(i)] != data[static_cast<std::size_t>(i)].y)
                    eps += dist[static_cast<std::size_t>(i)];
            }
            round.attempts.push_back({eps, static_cast<int>(picks.size())});
            round.queries += static_cast<int>(picks.size());
            if (eps <= config.weak_error_threshold) break;
        }

        round.epsilon = eps;
        if (eps == 0.0) {
            round.alpha = kInf;
            result.model.members.push_back({weak, kInf});
            result.trace.rounds.push_back(std::move(round));
            result.trace.early_terminated = true;
            break;
        }

        const double alpha = 0.5 * std::log((1.0 - eps) / eps);
        round.alpha = alpha;
        result.model.members.push_back({weak, alpha});
        result.trace.rounds.push_back(std::move(round));

        double total = 0.0;
        for (int i = 0; i < m; ++i) {
            const double factor =
                preds[static_cast<std::size_t>(i)] != data[static_cast<std::size_t>(i)].y
                    ? std::exp(alpha)
                    : std::exp(-alpha);
            dist[static_cast<std::size_t>(i)] *= factor;
            total += dist[static_cast<std::size_t>(i)];
        }
        double check = 0.0;
        for (auto& p : dist) {
            p /= total;
            if (p < 0) throw Error("boost_fit: negative weight in D");
            check += p;
        }
        if (std::abs(check - 1.0) > 1e-12) throw Error("boost_fit: D does not sum to 1");
    }
    return result;
}

int predict(const BoostModel& model, const BitString& x) {
    if (model.members.empty()) throw Error("predict: empty model");
    for (const auto& member : model.members)
        if (member.alpha == kInf) return end_to_end(member.generator, x, model.T);
    double vote1 = 0.0;
    double vote0 = 0.0;
    for (const auto& member : model.members) {
        if (end_to_end(member.generator, x, model.T) == 1)
            vote1 += member.alpha;
        else
            vote0 += member.alpha;
    }
    return vote1 >= vote0 ? 1 : 0;  // ties resolve to 1, like thr(0)
}

double error_product_bound(const BoostTrace& trace) {
    if (trace.early_terminated) return 0.0;
    double prod = 1.0;
    for (const auto& round : trace.rounds)
        prod *= 2.0 * std::sqrt(round.epsilon * (1.0 - round.epsilon));
    return prod;
}

std::string boost_model_to_json(const BoostModel& model) {
    nlohmann::json j;
    j["d"] = model.d;
    j["T"] = model.T;
    nlohmann::json members = nlohmann::json::array();
    for (const auto& member : model.members) {
        nlohmann::json mj;
        mj["weights"] = member.generator.weights;
        if (member.alpha == kInf)
            mj["alpha"] = nullptr;  // sentinel: zero-error round
        else
            mj["alpha"] = member.alpha;
        members.push_back(mj);
    }
    j["members"] = members;
    return j.dump(2);
}

BoostModel boost_model_from_json(const std::string& text) {
    const auto j = nlohmann::json::parse(text);
    BoostModel model;
    model.d = j.at("d").get<int>();
    model.T = j.at("T").get<int>();
    for (const auto& mj : j.at("members")) {
        BoostModel::Member member;
        member.generator.weights = mj.at("weights").get<std::vector<double>>();
        member.alpha = mj.at("alpha").is_null() ? kInf : mj.at("alpha").get<double>();
        model.members.push_back(std::move(member));
    }
    return model;
}

std::string boost_trace_to_csv(const BoostTrace& trace) {
    std::ostringstream out;
    out << "round,epsilon,alpha,queries\n";
    for (std::size_t k = 0; k < trace.rounds.size(); ++k) {
        const auto& round = trace.rounds[k];
        out << (k + 1) << ",";
        out << round.epsilon << ",";
        if (round.alpha == kInf)
            out << "inf";
        else
            out << round.alpha;
        out << "," << round.queries << "\n";
    }
    return out.str();
}

}  // namespace cotforge
