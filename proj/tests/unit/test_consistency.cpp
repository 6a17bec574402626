#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "cotforge/compiler.hpp"
#include "cotforge/consistency.hpp"
#include "cotforge/rng.hpp"

using namespace cotforge;

namespace {

LinearThresholdGenerator random_integer_generator(int d, int bound, Rng& rng) {
    LinearThresholdGenerator g;
    g.weights.resize(static_cast<std::size_t>(d));
    for (auto& w : g.weights)
        w = static_cast<double>(static_cast<long long>(rng.below(2 * bound + 1)) - bound);
    return g;
}

CotDataset traces_from(const LinearThresholdGenerator& g, int examples, int T, Rng& rng,
                       bool mixed_lengths = true) {
    CotDataset data;
    for (int i = 0; i < examples; ++i) {
        CotExample ex;
        const std::size_t len = mixed_lengths
                                    ? 1 + rng.below(static_cast<std::uint64_t>(g.window()))
                                    : static_cast<std::size_t>(g.window());
        ex.x = random_bits(len, rng);
        ex.z = chain_of_thought(g, ex.x, T);
        data.push_back(std::move(ex));
    }
    return data;
}

int violations(const LinearThresholdGenerator& g, const std::vector<PrefixConstraint>& cs) {
    int bad = 0;
    for (const auto& c : cs) {
        double acc = 0.0;
        const std::size_t len = c.window_view.size();
        for (std::size_t i = 0; i < len; ++i)
            if (c.window_view[i]) acc += g.weights[g.weights.size() - len + i];
        if (thr(acc) != c.label) ++bad;
    }
    return bad;
}

}  // namespace

TEST_CASE("cot_to_constraints hand expansion") {
    const auto cs = cot_to_constraints({1, 0}, {1, 0}, 3);
    REQUIRE(cs.size() == 2);
    CHECK(cs[0].window_view == BitString{1, 0});
    CHECK(cs[0].label == 1);
    CHECK(cs[1].window_view == BitString{1, 0, 1});
    CHECK(cs[1].label == 0);

    const auto single = cot_to_constraints({1, 1, 0}, {1}, 2);
    REQUIRE(single.size() == 1);
    CHECK(single[0].window_view == BitString{1, 0});
}

TEST_CASE("decomposing a generator's own chain yields constraints it satisfies") {
    Rng rng(73);
    for (int trial = 0; trial < 50; ++trial) {
        const int d = 2 + static_cast<int>(rng.below(8));
        const auto g = random_integer_generator(d, 4, rng);
        const BitString x = random_bits(static_cast<std::size_t>(d), rng);
        const auto z = chain_of_thought(g, x, 6);
        CHECK(violations(g, cot_to_constraints(x, z, d)) == 0);
    }
}

TEST_CASE("consistent_generator worked examples") {
    FeasibilityProblem empty;
    empty.dimension = 3;
    CHECK(consistent_generator(empty).weights == std::vector<double>(3, 0.0));

    FeasibilityProblem p;
    p.dimension = 2;
    p.constraints = {{{1, 0}, 1}, {{1, 1}, 0}};
    const auto g = consistent_generator(p);
    CHECK(g.weights[0] >= 0.0);             // w_{-2} >= 0
    CHECK(g.weights[0] + g.weights[1] <= -1.0);
    CHECK(violations(g, p.constraints) == 0);

    FeasibilityProblem contradictory;
    contradictory.dimension = 1;
    contradictory.constraints = {{{1}, 1}, {{1}, 0}};
    CHECK_THROWS_AS(consistent_generator(contradictory), NoConsistentGenerator);

    FeasibilityProblem zero_window;
    zero_window.dimension = 2;
    zero_window.constraints = {{{0, 0}, 0}};
    CHECK_THROWS_AS(consistent_generator(zero_window), NoConsistentGenerator);
}

TEST_CASE("completeness on data from bounded integer generators") {
    Rng rng(79);
    for (int trial = 0; trial < 40; ++trial) {
        const int d = 2 + static_cast<int>(rng.below(11));  // up to 12
        const auto target = random_integer_generator(d, 5, rng);
        const auto data = traces_from(target, 30, 6, rng);
        const auto problem = dataset_problem(data, d);
        const auto learned = consistent_generator(problem);
        CHECK(violations(learned, problem.constraints) == 0);
    }
}

TEST_CASE("scale closure of returned weights") {
    FeasibilityProblem p;
    p.dimension = 3;
    p.constraints = {{{1, 0, 1}, 1}, {{0, 1, 1}, 0}, {{1, 1, 1}, 0}};
    const auto g = consistent_generator(p);
    for (double lambda : {1.0, 2.0, 10.0}) {
        LinearThresholdGenerator scaled = g;
        for (auto& w : scaled.weights) w *= lambda;
        CHECK(violations(scaled, p.constraints) == 0);
    }
}

TEST_CASE("partition_consistent on permuted compiled thinkers") {
    ThresholdCircuit c;
    c.n = 4;
    c.hidden_weights = {{1, 1, 0, 0}, {0, 0, 1, -1}};
    c.hidden_biases = {-1, 0};
    c.output_weights = {1, 1};
    c.output_bias = -2;
    const auto cg0 = compile(c);
    const auto cg1 = compile(permute_hidden(c, {1, 0}));
    const int T = cg0.thinking_length;
    const int d = cg0.d();

    Rng rng(83);
    std::vector<CotDataset> groups(2);
    std::vector<BitString> eval_points;
    for (unsigned v = 0; v < 16; ++v) {
        const BitString phi = feature_map(bits_of(v, 4), cg0.s);
        eval_points.push_back(phi);
        CotExample e0{phi, chain_of_thought(cg0.generator, phi, T), 0, {}};
        CotExample e1{phi, chain_of_thought(cg1.generator, phi, T), 1, {}};
        groups[0].push_back(e0);
        groups[1].push_back(e1);
    }
    const auto gens = partition_consistent(groups, d, T, eval_points);
    REQUIRE(gens.size() == 2);
    for (const auto& pt : eval_points)
        CHECK(end_to_end(gens[0], pt, T) == end_to_end(gens[1], pt, T));

    // data from two genuinely different targets must trip the agreement check
    ThresholdCircuit other = c;
    other.output_bias = -1;  // OR instead of AND: differs on some input
    const auto cg2 = compile(other);
    std::vector<CotDataset> bad_groups(2);
    for (unsigned v = 0; v < 16; ++v) {
        const BitString phi = feature_map(bits_of(v, 4), cg0.s);
        bad_groups[0].push_back({phi, chain_of_thought(cg0.generator, phi, T), 0, {}});
        bad_groups[1].push_back({phi, chain_of_thought(cg2.generator, phi, T), 1, {}});
    }
    CHECK_THROWS_AS(partition_consistent(bad_groups, d, T, eval_points), EteMismatch);
}

TEST_CASE("partition_consistent reports the infeasible group") {
    CotDataset good, bad;
    LinearThresholdGenerator g{{1.0, -1.0}};
    good.push_back({{1, 0}, chain_of_thought(g, {1, 0}, 2), 0, {}});
    // conflicting labels on the same window
    bad.push_back({{1}, {1}, 1, {}});
    bad.push_back({{1}, {0}, 1, {}});
    try {
        partition_consistent({good, bad}, 2, 2, {{1, 0}});
        FAIL("expected NoConsistentGenerator");
    } catch (const NoConsistentGenerator& e) {
        CHECK(e.group == 1);
    }
}

TEST_CASE("pigeonhole_learn picks the largest identity group") {
    Rng rng(89);
    const int d = 6;
    const int T = 4;
    const auto target = random_integer_generator(d, 3, rng);
    CotDataset data;
    for (int i = 0; i < 40; ++i) {
        CotExample ex;
        ex.x = random_bits(static_cast<std::size_t>(d), rng);
        ex.z = chain_of_thought(target, ex.x, T);
        ex.identity = i % 4 == 0 ? 1 : 0;  // group 0 dominates
        data.push_back(std::move(ex));
    }
    const auto learned = pigeonhole_learn(data, d, T);
    const auto problem = dataset_problem(data, d);  // single thinker: all constraints hold
    CHECK(violations(learned, problem.constraints) == 0);

    CotDataset missing;
    missing.push_back({{1}, {1}, {}, {}});
    CHECK_THROWS_AS(pigeonhole_learn(missing, 1, 1), Error);
}

TEST_CASE("pool_restricted_kcons finds covering subsets") {
    ThresholdCircuit c;
    c.n = 3;
    c.hidden_weights = {{1, 0, 0}, {0, 1, 0}, {0, 0, 1}};
    c.hidden_biases = {-1, -1, -1};
    c.output_weights = {1, 1, 1};
    c.output_bias = -1;

    std::vector<LinearThresholdGenerator> pool;
    std::vector<int> pi = {0, 1, 2};
    std::vector<CompiledGenerator> compiled;
    do {
        compiled.push_back(compile(permute_hidden(c, pi)));
        pool.push_back(compiled.back().generator);
    } while (std::next_permutation(pi.begin(), pi.end()));
    const int T = compiled[0].thinking_length;

    std::vector<BitString> eval_points;
    for (unsigned v = 0; v < 8; ++v) eval_points.push_back(feature_map(bits_of(v, 3), 4));

    // data from pool members 1 and 4
    CotDataset data;
    for (unsigned v = 0; v < 8; ++v) {
        const auto phi = feature_map(bits_of(v, 3), 4);
        data.push_back({phi, chain_of_thought(pool[1], phi, T), {}, {}});
        data.push_back({phi, chain_of_thought(pool[4], phi, T), {}, {}});
    }

    const auto pair = pool_restricted_kcons(data, pool, 2, T, eval_points);
    CHECK(pair == std::vector<int>{1, 4});

    // kappa = 1 from a single member finds that member (or an exact twin)
    CotDataset solo;
    for (unsigned v = 0; v < 8; ++v) {
        const auto phi = feature_map(bits_of(v, 3), 4);
        solo.push_back({phi, chain_of_thought(pool[3], phi, T), {}, {}});
    }
    const auto one = pool_restricted_kcons(solo, pool, 1, T, eval_points);
    REQUIRE(one.size() == 1);
    for (const auto& ex : solo)
        CHECK(chain_of_thought(pool[static_cast<std::size_t>(one[0])], ex.x, T) == ex.z);

    // kappa = |pool| always succeeds on pool-generated data
    CHECK(pool_restricted_kcons(data, pool, 6, T, eval_points).size() == 6);

    // no single member covers a two-thinker mix
    CHECK_THROWS_AS(pool_restricted_kcons(data, pool, 1, T, eval_points), NoCover);
}
