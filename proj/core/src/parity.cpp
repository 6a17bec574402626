#include "cotforge/parity.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "cotforge/errors.hpp"
#include "cotforge/rng.hpp"

namespace cotforge {

ParityTask make_parity_task(int d, int k, double eta, std::uint64_t seed) {
    if (k < 1 || k > d) throw BadArity("parity task: need 1 <= k <= d");
    if (eta < 0 || eta >= 0.5) throw BadArity("parity task: need eta in [0, 1/2)");
    ParityTask task;
    task.d = d;
    task.k = k;
    task.eta = eta;
    Rng rng(derive_seed(seed, "parity_support", 0));
    task.support = rng.subset(d, k);
    return task;
}

AdversarialOrder sorted_by_bits_adversary(std::vector<int> support) {
    return AdversarialOrder{[support = std::move(support)](const std::vector<BitString>& xs) {
        std::vector<std::vector<int>> orders;
        orders.reserve(xs.size());
        for (const auto& x : xs) {
            std::vector<int> order = support;
            std::stable_sort(order.begin(), order.end(), [&x](int a, int b) {
                return x[static_cast<std::size_t>(a)] < x[static_cast<std::size_t>(b)];
            });
            orders.push_back(std::move(order));
        }
        return orders;
    }};
}

std::vector<ParityCotExample> gen_parity_cot(const ParityTask& task, const OrderSource& source,
                                             int m, std::uint64_t seed, bool noisy_z0) {
    std::vector<ParityCotExample> out(static_cast<std::size_t>(m));
    for (int i = 0; i < m; ++i) {
        Rng rng(derive_seed(seed, "parity_x", static_cast<std::uint64_t>(i)));
        out[static_cast<std::size_t>(i)].x = random_bits(static_cast<std::size_t>(task.d), rng);
    }

    std::vector<std::vector<int>> orders;
    if (const auto* fixed = std::get_if<FixedOrder>(&source)) {
        if (static_cast<int>(fixed->order.size()) != task.k)
            throw BadArity("fixed order must list all k support coordinates");
        orders.assign(static_cast<std::size_t>(m), fixed->order);
    } else if (std::holds_alternative<UniformOrder>(source)) {
        orders.resize(static_cast<std::size_t>(m));
        for (int i = 0; i < m; ++i) {
            Rng rng(derive_seed(seed, "parity_pi", static_cast<std::uint64_t>(i)));
            std::vector<int> order = task.support;
            rng.shuffle(order);
            orders[static_cast<std::size_t>(i)] = std::move(order);
        }
    } else {
        std::vector<BitString> xs(static_cast<std::size_t>(m));
        for (int i = 0; i < m; ++i) xs[static_cast<std::size_t>(i)] = out[static_cast<std::size_t>(i)].x;
        orders = std::get<AdversarialOrder>(source).choose(xs);
        if (static_cast<int>(orders.size()) != m)
            throw BadArity("adversarial order source returned wrong count");
    }

    for (int i = 0; i < m; ++i) {
        Rng rng(derive_seed(seed, "parity_noise", static_cast<std::uint64_t>(i)));
        const auto& x = out[static_cast<std::size_t>(i)].x;
        const auto& order = orders[static_cast<std::size_t>(i)];
        BitString trace(static_cast<std::size_t>(task.k));
        int z = noisy_z0 ? (rng.bernoulli(task.eta) ? 1 : 0) : 0;
        for (int t = 0; t < task.k; ++t) {
            z ^= x[static_cast<std::size_t>(order[static_cast<std::size_t>(t)])];
            if (task.eta > 0 && rng.bernoulli(task.eta)) z ^= 1;
            trace[static_cast<std::size_t>(t)] = static_cast<std::uint8_t>(z);
        }
        out[static_cast<std::size_t>(i)].trace = std::move(trace);
    }
    return out;
}

double eff_noise(double eta, int k) {
    return 0.5 * (1.0 - std::pow(1.0 - 2.0 * eta, k));
}

namespace {

// Top-k indices by score, ties to the smallest index.
std::vector<int> top_k(const std::vector<double>& score, int k) {
    std::vector<int> idx(score.size());
    std::iota(idx.begin(), idx.end(), 0);
    std::stable_sort(idx.begin(), idx.end(), [&score](int a, int b) {
        return score[static_cast<std::size_t>(a)] > score[static_cast<std::size_t>(b)];
    });
    idx.resize(static_cast<std::size_t>(k));
    std::sort(idx.begin(), idx.end());
    return idx;
}

}  // namespace

std::vector<int> recover_support(const std::vector<ParityCotExample>& data, int d, int k) {
    if (data.empty()) throw NoData();
    if (k < 1 || k > d) throw BadArity("recover_support: need 1 <= k <= d");
    // score(j) * m stays integral; accumulate in integers.
    std::vector<long long> acc(static_cast<std::size_t>(d), 0);
    for (const auto& ex : data) {
        int prev = 0;
        long long stat = 0;
        for (std::size_t t = 0; t < ex.trace.size(); ++t) {
            const int cur = ex.trace[t];
            stat += 1 - 2 * (cur ^ prev);
            prev = cur;
        }
        for (int j = 0; j < d; ++j)
            acc[static_cast<std::size_t>(j)] += ex.x[static_cast<std::size_t>(j)] ? -stat : stat;
    }
    std::vector<double> score(static_cast<std::size_t>(d));
    for (int j = 0; j < d; ++j)
        score[static_cast<std::size_t>(j)] =
            static_cast<double>(acc[static_cast<std::size_t>(j)]) / static_cast<double>(data.size());
    return top_k(score, k);
}

std::vector<int> recover_support_single(const std::vector<ParityCotExample>& data, int d, int k) {
    if (data.empty()) throw NoData();
    if (k < 1 || k > d) throw BadArity("recover_support_single: need 1 <= k <= d");
    // acc[t][j] = m * Score_t(j)
    std::vector<std::vector<long long>> acc(static_cast<std::size_t>(k),
                                            std::vector<long long>(static_cast<std::size_t>(d), 0));
    for (const auto& ex : data) {
        int prev = 0;
        for (int t = 0; t < k; ++t) {
            const int cur = ex.trace[static_cast<std::size_t>(t)];
            const long long delta = 1 - 2 * (cur ^ prev);
            prev = cur;
            auto& row = acc[static_cast<std::size_t>(t)];
            for (int j = 0; j < d; ++j)
                row[static_cast<std::size_t>(j)] += ex.x[static_cast<std::size_t>(j)] ? -delta : delta;
        }
    }
    std::vector<int> ordered(static_cast<std::size_t>(k));
    for (int t = 0; t < k; ++t) {
        const auto& row = acc[static_cast<std::size_t>(t)];
        int best = 0;
        for (int j = 1; j < d; ++j)
            if (row[static_cast<std::size_t>(j)] > row[static_cast<std::size_t>(best)]) best = j;
        ordered[static_cast<std::size_t>(t)] = best;
    }
    return ordered;
}

double it_lower_bound(int d, int k, double delta) {
    if (k < 1 || k > d - 1) throw BadArity("it_lower_bound: need 1 <= k <= d-1");
    if (delta <= 0 || delta >= 1) throw BadArity("it_lower_bound: need delta in (0,1)");
    // log2 C(d,k) via lgamma; the acceptance tests pin this against an exact
    // big-integer evaluation.
    const double log2_binom =
        (std::lgamma(d + 1.0) - std::lgamma(k + 1.0) - std::lgamma(d - k + 1.0)) / std::log(2.0);
    return ((1.0 - delta) * log2_binom - 1.0) / std::log2(static_cast<double>(k + 1));
}

double it_lower_bound_simplified(int d, int k, double delta) {
    if (k < 1 || 2 * k > d) throw BadArity("it_lower_bound_simplified: need 1 <= k <= d/2");
    if (delta <= 0 || delta >= 1) throw BadArity("it_lower_bound_simplified: need delta in (0,1)");
    const double log2_term = static_cast<double>(k) * std::log2(static_cast<double>(d) / k);
    return ((1.0 - delta) * log2_term - 1.0) / std::log2(static_cast<double>(k + 1));
}

}  // namespace cotforge
