#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cstdio>
#include <fstream>

#include "cotforge/compiler.hpp"
#include "cotforge/consistency.hpp"
#include "cotforge/stats.hpp"
#include "cotforge/supervision.hpp"

using namespace cotforge;

namespace {

ThresholdCircuit small_circuit() {
    // n=2, hidden gates pass through x1 and x2, OR output; d = 19, T = 5.
    ThresholdCircuit c;
    c.n = 2;
    c.hidden_weights = {{1, 0}, {0, 1}};
    c.hidden_biases = {-1, -1};
    c.output_weights = {1, 1};
    c.output_bias = -1;
    return c;
}

// Compiled pools agree end-to-end on feature-map images, their support.
ThinkerPool compiled_pool() {
    auto pool = permuted_compiled_pool(small_circuit());
    verify_pool_on_inputs(pool, all_phi_images(2, 3));
    return pool;
}

InputSampler compiled_dist() { return phi_image_sampler(2, 3); }

// Two generators that agree end-to-end on the whole cube (constant 1 at T=2)
// while producing different intermediate tokens; usable with uniform inputs.
ThinkerPool hand_pool() {
    ThinkerPool pool;
    pool.d = 3;
    pool.T = 2;
    pool.generators = {{{0.0, 0.0, 0.0}}, {{0.0, -1.0, 2.0}}};
    verify_pool_exhaustive(pool);
    return pool;
}

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    return std::string(std::istreambuf_iterator<char>(in), {});
}

}  // namespace

TEST_CASE("permuted_compiled_pool builds the whole f_pi family") {
    const auto pool = compiled_pool();
    CHECK(pool.kappa() == 2);  // (s-1)! with two hidden gates
    CHECK(pool.d == compiled_dimension(2, 3));
    CHECK(pool.T == 5);
    CHECK(pool.verified_e2e_equal);
}

TEST_CASE("hand pool members differ in traces but not end-to-end") {
    const auto pool = hand_pool();
    CHECK(pool.verified_e2e_equal);
    bool traces_differ = false;
    for (unsigned v = 0; v < 8; ++v) {
        const BitString x = bits_of(v, 3);
        traces_differ |= chain_of_thought(pool.generators[0], x, 2) !=
                         chain_of_thought(pool.generators[1], x, 2);
    }
    CHECK(traces_differ);
}

TEST_CASE("pool verification catches end-to-end disagreement") {
    ThinkerPool fake;
    fake.d = 2;
    fake.T = 1;
    fake.generators = {{{1.0, 1.0}}, {{-1.0, -1.0}}};
    CHECK_THROWS_AS(verify_pool_exhaustive(fake), EteMismatch);

    // a compiled pool is NOT equal on the whole cube, only on its support
    ThinkerPool compiled = permuted_compiled_pool(small_circuit());
    CHECK_THROWS_AS(
        verify_pool_sampled(compiled, uniform_input_sampler(compiled.d), 2000, 1), EteMismatch);
    verify_pool_on_inputs(compiled, all_phi_images(2, 3));
    CHECK(compiled.verified_e2e_equal);

    ThinkerPool unverified = permuted_compiled_pool(small_circuit());
    CHECK_THROWS_AS(gen_cot(unverified, UniformSelection{}, false, compiled_dist(), 3, 1),
                    UnverifiedPool);
}

TEST_CASE("input samplers: uniform cube, phi images, user tables") {
    Rng rng(99);
    const auto cube = uniform_input_sampler(9);
    CHECK(cube(rng).size() == 9);

    const auto phi = phi_image_sampler(3, 2);
    const auto images = all_phi_images(3, 2);
    for (int i = 0; i < 30; ++i) {
        const auto x = phi(rng);
        CHECK(std::find(images.begin(), images.end(), x) != images.end());
    }

    const std::vector<BitString> rows = {{1, 0, 1}, {0, 0, 0}, {1, 1, 1}};
    const auto table = table_sampler(rows);
    int seen[3] = {0, 0, 0};
    for (int i = 0; i < 300; ++i) {
        const auto x = table(rng);
        const auto it = std::find(rows.begin(), rows.end(), x);
        REQUIRE(it != rows.end());
        ++seen[it - rows.begin()];
    }
    for (int s : seen) CHECK(s > 50);  // all rows drawn, roughly uniformly
    CHECK_THROWS_AS(table_sampler({}), BadConfig);
}

TEST_CASE("gen_e2e basics") {
    const LinearThresholdGenerator zero{{0.0, 0.0, 0.0}};
    CHECK(gen_e2e(zero, uniform_input_sampler(3), 0, 2, 1).empty());
    const auto data = gen_e2e(zero, uniform_input_sampler(3), 50, 2, 1);
    for (const auto& ex : data) CHECK(ex.y == 1);  // thr(0) = 1 everywhere

    // compiled circuit target agrees with direct circuit evaluation
    const auto c = small_circuit();
    const auto cg = compile(c);
    const auto labeled =
        gen_e2e(cg.generator, phi_image_sampler(c.n, cg.s), 100, cg.thinking_length, 7);
    for (const auto& ex : labeled) {
        // recover the raw x from the feature map layout: x_i sits after the
        // sentinel block, in reverse order
        BitString x(static_cast<std::size_t>(c.n));
        const int r = cg.s - 1;
        for (int i = c.n; i >= 1; --i) {
            const std::size_t pos = static_cast<std::size_t>((c.n - i + 2) * (2 * r + 1) - 1);
            x[static_cast<std::size_t>(i - 1)] = ex.x[pos];
        }
        CHECK(ex.y == eval(c, x));
    }
}

TEST_CASE("gen_cot: kappa=1 collapses every identity model") {
    ThresholdCircuit c = small_circuit();
    c.hidden_weights.pop_back();  // single hidden gate -> single permutation
    c.hidden_biases.pop_back();
    c.output_weights.pop_back();
    auto pool = permuted_compiled_pool(c);
    verify_pool_on_inputs(pool, all_phi_images(c.n, 2));
    REQUIRE(pool.kappa() == 1);

    const auto dist = phi_image_sampler(c.n, 2);
    const auto uniform = gen_cot(pool, UniformSelection{}, true, dist, 20, 3);
    const auto adversarial = gen_cot(
        pool,
        IdentityModel{AdversarialSelection{[](const std::vector<BitString>& xs) {
            return std::vector<int>(xs.size(), 0);
        }}},
        true, dist, 20, 3);
    const auto instance = gen_cot(
        pool, IdentityModel{InstanceDependentSelection{[](const BitString&) { return 0; }}}, true,
        dist, 20, 3);
    REQUIRE(uniform.size() == 20);
    for (std::size_t i = 0; i < uniform.size(); ++i) {
        CHECK(uniform[i].x == adversarial[i].x);
        CHECK(uniform[i].z == adversarial[i].z);
        CHECK(uniform[i].z == instance[i].z);
    }
}

TEST_CASE("uniform identities hit frequencies within 3 sigma") {
    const auto pool = hand_pool();
    const int m = 10000;
    const auto data = gen_cot(pool, UniformSelection{}, true, uniform_input_sampler(pool.d), m, 11);
    int count0 = 0;
    for (const auto& ex : data) count0 += *ex.identity == 0 ? 1 : 0;
    CHECK(std::abs(count0 - m / 2) <= 3 * 50);  // sigma = sqrt(m/4) = 50
}

TEST_CASE("uniform identities are independent of the input (chi-square)") {
    const auto pool = hand_pool();
    const int m = 10000;
    const auto data = gen_cot(pool, UniformSelection{}, true, uniform_input_sampler(pool.d), m, 13);
    std::vector<std::vector<long long>> table(2, std::vector<long long>(2, 0));
    for (const auto& ex : data) ++table[static_cast<std::size_t>(*ex.identity)][ex.x[0]];
    CHECK(chi_square_independence_pvalue(table) > 0.001);
}

TEST_CASE("every emitted trace ends in h*(x), whatever the model") {
    const auto pool = compiled_pool();
    const auto dist = compiled_dist();
    const IdentityModel models[] = {
        IdentityModel{UniformSelection{}},
        IdentityModel{InstanceDependentSelection{[](const BitString& x) { return x[4]; }}},
        IdentityModel{AdversarialSelection{[](const std::vector<BitString>& xs) {
            std::vector<int> ids(xs.size());
            for (std::size_t i = 0; i < xs.size(); ++i) ids[i] = static_cast<int>(i % 2);
            return ids;
        }}},
        IdentityModel{InstanceDependentSampling{
            [](const BitString&) { return std::vector<double>{0.3, 0.7}; }}},
    };
    for (const auto& model : models) {
        const auto data = gen_cot(pool, model, false, dist, 200, 17);
        for (const auto& ex : data) {
            CHECK(ex.z.back() == end_to_end(pool.generators[0], ex.x, pool.T));
            CHECK_FALSE(ex.identity.has_value());
        }
    }
}

TEST_CASE("instance-dependent selection with the target as selector forks on the label") {
    const auto pool = compiled_pool();
    const auto h_star = [&pool](const BitString& x) {
        return end_to_end(pool.generators[0], x, pool.T);
    };
    const auto data = gen_cot(pool, IdentityModel{InstanceDependentSelection{h_star}}, true,
                              compiled_dist(), 300, 19);
    bool saw_both = false;
    for (const auto& ex : data) {
        CHECK(*ex.identity == ex.z.back());
        saw_both |= *ex.identity == 0;
    }
    CHECK(saw_both);  // the label actually varies on phi images
}

TEST_CASE("gen_index_cot batches are single-thinker consistent") {
    const auto pool = compiled_pool();
    const auto data = gen_index_cot(pool, compiled_dist(), 60, 10, 23);
    REQUIRE(data.size() == 60);
    for (int batch = 0; batch < 6; ++batch) {
        // every batch must be exactly reproducible by some single pool member
        bool covered = false;
        for (const auto& g : pool.generators) {
            bool all = true;
            for (int i = batch * 10; i < (batch + 1) * 10; ++i) {
                const auto& ex = data[static_cast<std::size_t>(i)];
                CHECK(*ex.index == batch);
                if (chain_of_thought(g, ex.x, pool.T) != ex.z) {
                    all = false;
                    break;
                }
            }
            covered |= all;
        }
        CHECK(covered);
    }
    CHECK_THROWS_AS(gen_index_cot(pool, compiled_dist(), 61, 10, 23), BadPartition);

    // q = 1 reduces to a single-thinker dataset
    const auto single = gen_index_cot(pool, compiled_dist(), 12, 12, 29);
    bool covered = false;
    for (const auto& g : pool.generators) {
        bool all = true;
        for (const auto& ex : single) all &= chain_of_thought(g, ex.x, pool.T) == ex.z;
        covered |= all;
    }
    CHECK(covered);

    // identity mapping: batch k answered by thinker k, needs q = kappa
    const auto mapped = gen_index_cot(pool, compiled_dist(), 20, 10, 31, true);
    for (const auto& ex : mapped) {
        const auto& g = pool.generators[static_cast<std::size_t>(*ex.index)];
        CHECK(chain_of_thought(g, ex.x, pool.T) == ex.z);
    }
    CHECK_THROWS_AS(gen_index_cot(pool, compiled_dist(), 30, 10, 31, true), BadPartition);
}

TEST_CASE("seeded determinism is byte-for-byte") {
    const auto pool = compiled_pool();
    const auto a = gen_cot(pool, UniformSelection{}, true, compiled_dist(), 100, 31);
    const auto b = gen_cot(pool, UniformSelection{}, true, compiled_dist(), 100, 31);
    write_cot_dataset("/tmp/cotforge_det_a.jsonl", a, pool.d, pool.T, pool.kappa(), "uniform", 31);
    write_cot_dataset("/tmp/cotforge_det_b.jsonl", b, pool.d, pool.T, pool.kappa(), "uniform", 31);
    CHECK(slurp("/tmp/cotforge_det_a.jsonl") == slurp("/tmp/cotforge_det_b.jsonl"));
    std::remove("/tmp/cotforge_det_a.jsonl");
    std::remove("/tmp/cotforge_det_b.jsonl");
}

TEST_CASE("dataset files round-trip") {
    const auto pool = compiled_pool();
    const auto data = gen_index_cot(pool, compiled_dist(), 20, 5, 37);
    write_cot_dataset("/tmp/cotforge_rt.jsonl", data, pool.d, pool.T, pool.kappa(), "index", 37);
    int d = 0, T = 0, kappa = 0;
    const auto back = read_cot_dataset("/tmp/cotforge_rt.jsonl", &d, &T, &kappa);
    CHECK(d == pool.d);
    CHECK(T == pool.T);
    CHECK(kappa == pool.kappa());
    REQUIRE(back.size() == data.size());
    for (std::size_t i = 0; i < data.size(); ++i) {
        CHECK(back[i].x == data[i].x);
        CHECK(back[i].z == data[i].z);
        CHECK(back[i].index == data[i].index);
    }
    std::remove("/tmp/cotforge_rt.jsonl");

    const LinearThresholdGenerator g{{1.0, -0.5}};
    const auto e2e = gen_e2e(g, uniform_input_sampler(2), 15, 3, 41);
    write_e2e_dataset("/tmp/cotforge_e2e.jsonl", e2e, 2, 3, 41);
    const auto e2e_back = read_e2e_dataset("/tmp/cotforge_e2e.jsonl");
    REQUIRE(e2e_back.size() == e2e.size());
    for (std::size_t i = 0; i < e2e.size(); ++i) {
        CHECK(e2e_back[i].x == e2e[i].x);
        CHECK(e2e_back[i].y == e2e[i].y);
    }
    std::remove("/tmp/cotforge_e2e.jsonl");

    const auto pool2 = hand_pool();
    write_pool("/tmp/cotforge_pool.json", pool2);
    const auto pool_back = read_pool("/tmp/cotforge_pool.json");
    CHECK(pool_back.d == pool2.d);
    CHECK(pool_back.generators.size() == pool2.generators.size());
    CHECK(pool_back.generators[1].weights == pool2.generators[1].weights);
    std::remove("/tmp/cotforge_pool.json");
}

TEST_CASE("active session: budget, adversary order, trace consistency") {
    const auto pool = compiled_pool();
    const auto e2e = gen_e2e(pool.generators[0], compiled_dist(), 40, pool.T, 43);

    // strict mode: the adversary must see the current selection
    bool saw_selection = false;
    auto probe = [&saw_selection](const ThinkerPool&, const E2eDataset&, const ActiveHistory&,
                                  const std::vector<int>* sel) {
        saw_selection = sel != nullptr;
        return 0;
    };
    auto strict = open_active_session(e2e, pool, probe, 5, true);
    strict.request_cots({0, 1, 2});
    CHECK(saw_selection);

    auto relaxed = open_active_session(e2e, pool, probe, 5, false);
    relaxed.request_cots({0, 1, 2});
    CHECK_FALSE(saw_selection);

    CHECK_THROWS_AS(strict.request_cots({0, 1, 2, 3, 4, 5}), BudgetExceeded);
    CHECK_THROWS_AS(strict.request_cots({-1}), BadConfig);

    // round-robin adversary cycles through the pool; traces stay e2e-correct
    auto session = open_active_session(e2e, pool, round_robin_adversary(), 10, true);
    for (int round = 0; round < 4; ++round) {
        const auto traces = session.request_cots({0, 5, 7});
        CHECK(session.history().rounds.back().thinker == round % pool.kappa());
        for (std::size_t i = 0; i < traces.size(); ++i) {
            const int idx = session.history().rounds.back().requested[i];
            CHECK(traces[i].back() == e2e[static_cast<std::size_t>(idx)].y);
        }
    }
}

TEST_CASE("disagreement-greedy adversary maximizes clash with revealed traces") {
    const auto pool = compiled_pool();
    const auto e2e = gen_e2e(pool.generators[0], compiled_dist(), 30, pool.T, 47);
    auto session = open_active_session(e2e, pool, disagreement_greedy_adversary(), 8, true);
    const std::vector<int> subset = {0, 1, 2, 3};
    session.request_cots(subset);  // first round: no history, lowest index
    CHECK(session.history().rounds[0].thinker == 0);
    session.request_cots(subset);  // same subset: the clashing member wins
    const int second = session.history().rounds[1].thinker;
    long best = -1;
    int best_j = 0;
    for (int j = 0; j < pool.kappa(); ++j) {
        long score = 0;
        for (std::size_t i = 0; i < subset.size(); ++i) {
            const auto mine = chain_of_thought(pool.generators[static_cast<std::size_t>(j)],
                                               e2e[static_cast<std::size_t>(subset[i])].x, pool.T);
            const auto& revealed = session.history().rounds[0].traces[i];
            for (std::size_t b = 0; b < mine.size(); ++b) score += mine[b] != revealed[b];
        }
        if (score > best) {
            best = score;
            best_j = j;
        }
    }
    CHECK(second == best_j);

    // the e2e labels must match the pool, otherwise the session refuses
    E2eDataset corrupt = e2e;
    corrupt[0].y ^= 1;
    CHECK_THROWS_AS(open_active_session(corrupt, pool, fixed_adversary(0), 8, true), EteMismatch);
}
