#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "cotforge/compiler.hpp"
#include "cotforge/dnf_fork.hpp"
#include "cotforge/stats.hpp"

using namespace cotforge;

namespace {

int satisfied_terms(const DnfFormula& f, const BitString& z) {
    int count = 0;
    for (const auto& term : f.terms) {
        bool sat = true;
        for (const auto& lit : term)
            if ((z[static_cast<std::size_t>(lit.var)] != 0) != lit.positive) {
                sat = false;
                break;
            }
        count += sat;
    }
    return count;
}

BitString x_restrict(const BitString& x, const Hyperedge& edge) {
    BitString r;
    for (int v : edge.vertices) r.push_back(x[static_cast<std::size_t>(v)]);
    return r;
}

}  // namespace

TEST_CASE("encode_hyperedge worked examples") {
    CHECK(encode_hyperedge({{1}}, 3, 1) == BitString{1, 0, 1});
    CHECK(encode_hyperedge({{0, 1}}, 2, 2) == BitString{0, 1, 1, 0});
    CHECK_THROWS_AS(encode_hyperedge({{0, 0}}, 3, 2), BadEdge);
    CHECK_THROWS_AS(encode_hyperedge({{3}}, 3, 1), BadEdge);
    CHECK_THROWS_AS(encode_hyperedge({{0}}, 3, 2), BadEdge);

    // each slice has exactly one zero
    for (const auto& edge : all_hyperedges(4, 3)) {
        const auto z = encode_hyperedge(edge, 4, 3);
        for (int j = 0; j < 3; ++j) {
            int zeros = 0;
            for (int l = 0; l < 4; ++l) zeros += z[static_cast<std::size_t>(j * 4 + l)] == 0;
            CHECK(zeros == 1);
        }
    }
}

TEST_CASE("all_hyperedges enumerates ordered distinct tuples") {
    CHECK(all_hyperedges(4, 2).size() == 12);  // 4*3
    CHECK(all_hyperedges(5, 3).size() == 60);  // 5*4*3
}

TEST_CASE("predicates") {
    const auto px = xor_predicate(2);
    CHECK(px.eval({0, 0}) == false);
    CHECK(px.eval({1, 0}) == true);
    CHECK(px.eval({1, 1}) == false);
    const auto pa = and_predicate(3);
    CHECK(pa.eval({1, 1, 1}) == true);
    CHECK(pa.eval({1, 0, 1}) == false);
    CHECK(predicate_from_hex(2, "6").table == xor_predicate(2).table);
    CHECK_THROWS_AS(predicate_from_hex(2, "zz"), BadArity);
}

TEST_CASE("build_psi: equality with the predicate and single-term satisfaction") {
    // P identically 0 gives the empty DNF
    Predicate never;
    never.arity = 2;
    never.table = {0, 0, 0, 0};
    CHECK(build_psi(never, {1, 0, 1}).terms.empty());

    const auto p = xor_predicate(2);
    const BitString x = {1, 0, 1};
    const auto psi = build_psi(p, x);
    for (const auto& edge : all_hyperedges(3, 2)) {
        const auto z = encode_hyperedge(edge, 3, 2);
        const bool expected = p.eval(x_restrict(x, edge));
        CHECK(eval_dnf(psi, z) == expected);
        CHECK(satisfied_terms(psi, z) == (expected ? 1 : 0));
    }
}

TEST_CASE("build_phi agrees with build_psi on all encodings; clause semantics") {
    const auto p = xor_predicate(2);
    const BitString x = {1, 0, 1};
    const auto psi = build_psi(p, x);
    const auto phi = build_phi(p, x);
    CHECK(phi.clauses.size() <= 4);
    for (const auto& edge : all_hyperedges(3, 2)) {
        const auto z = encode_hyperedge(edge, 3, 2);
        CHECK(eval_cnf(phi, z) == eval_dnf(psi, z));
    }

    // c_g(z^S) = 1 iff x_S != g, clause by clause
    std::size_t clause_index = 0;
    for (std::size_t v = 0; v < p.table.size(); ++v) {
        if (p.table[v]) continue;
        BitString g(2);
        for (int j = 0; j < 2; ++j) g[static_cast<std::size_t>(j)] = (v >> j) & 1u;
        const auto& clause = phi.clauses[clause_index++];
        CnfFormula single{phi.vars, {clause}};
        for (const auto& edge : all_hyperedges(3, 2)) {
            const auto z = encode_hyperedge(edge, 3, 2);
            CHECK(eval_cnf(single, z) == (x_restrict(x, edge) != g));
        }
    }

    // P identically 1 gives the empty CNF, constant true
    Predicate always;
    always.arity = 2;
    always.table = {1, 1, 1, 1};
    CHECK(build_phi(always, {0, 1}).clauses.empty());
    CHECK(eval_cnf(build_phi(always, {0, 1}), encode_hyperedge({{0, 1}}, 2, 2)));
}

TEST_CASE("exhaustive single-term satisfaction for N <= 5, K <= 3") {
    for (int K = 1; K <= 3; ++K) {
        for (int N = K; N <= 5; ++N) {
            const auto predicates = {xor_predicate(K), and_predicate(K),
                                     table_predicate(K, 0xB6DEull)};
            for (const auto& p : predicates) {
                for (unsigned xv = 0; xv < (1u << N); ++xv) {
                    const BitString x = bits_of(xv, static_cast<std::size_t>(N));
                    const auto psi = build_psi(p, x);
                    const auto phi = build_phi(p, x);
                    for (const auto& edge : all_hyperedges(N, K)) {
                        const auto z = encode_hyperedge(edge, N, K);
                        const bool expected = p.eval(x_restrict(x, edge));
                        REQUIRE(eval_dnf(psi, z) == expected);
                        REQUIRE(eval_cnf(phi, z) == expected);
                        REQUIRE(satisfied_terms(psi, z) == (expected ? 1 : 0));
                    }
                }
            }
        }
    }
}

TEST_CASE("check_fork on derived circuit pairs") {
    const auto p = xor_predicate(2);
    const BitString x = {1, 0, 1, 0};
    const auto psi = build_psi(p, x);
    const auto phi = build_phi(p, x);
    const auto c0 = circuit_from_dnf(psi);
    const auto c1 = circuit_from_cnf(phi);

    std::vector<BitString> encodings;
    for (const auto& edge : all_hyperedges(4, 2)) encodings.push_back(encode_hyperedge(edge, 4, 2));

    const auto report = check_fork(c0, c1, encodings);
    CHECK(report.ok());
    CHECK(report.inputs_checked == encodings.size());

    auto tampered = c1;
    tampered.output_bias += 1;  // turn the AND output into something looser
    CHECK_FALSE(check_fork(c0, tampered, encodings).ok());

    auto wrong_arity = c1;
    wrong_arity.n += 1;
    CHECK_THROWS_AS(check_fork(c0, wrong_arity, encodings), BadPair);
}

TEST_CASE("sample_hard_distribution marginals and edge shape") {
    CHECK(sample_hard_distribution(6, 2, 0, 1).empty());
    const int N = 6, K = 2, m = 12000;
    const auto sample = sample_hard_distribution(N, K, m, 5);
    std::vector<long long> zero_pos(static_cast<std::size_t>(N), 0);
    for (const auto& z : sample) {
        for (int j = 0; j < K; ++j) {
            int zeros = 0, where = -1;
            for (int l = 0; l < N; ++l)
                if (!z[static_cast<std::size_t>(j * N + l)]) {
                    ++zeros;
                    where = l;
                }
            REQUIRE(zeros == 1);
            if (j == 0) ++zero_pos[static_cast<std::size_t>(where)];
        }
    }
    // the first slice's zero position should be uniform over [N]
    const double expected = static_cast<double>(m) / N;
    const double sigma = std::sqrt(expected * (1.0 - 1.0 / N));
    for (long long c : zero_pos) CHECK(std::abs(c - expected) <= 3.0 * sigma);
}

TEST_CASE("resampler distribution: zeros for 0, uniform basis vector for 1") {
    Rng rng(77);
    CHECK(resample_term_vector(0, 5, rng) == BitString(5, 0));

    const int ell = 7, m = 10000;
    std::vector<long long> counts(static_cast<std::size_t>(ell), 0);
    for (int i = 0; i < m; ++i) {
        const auto v = resample_term_vector(1, ell, rng);
        int ones = 0, where = -1;
        for (int j = 0; j < ell; ++j)
            if (v[static_cast<std::size_t>(j)]) {
                ++ones;
                where = j;
            }
        REQUIRE(ones == 1);
        ++counts[static_cast<std::size_t>(where)];
    }
    CHECK(chi_square_uniform_pvalue(counts) > 0.001);
}

TEST_CASE("pipeline closure: compiled psi-circuit leaks term values on schedule") {
    const auto p = xor_predicate(2);
    const int N = 3, K = 2;
    const BitString x = {1, 0, 1};
    const auto psi = build_psi(p, x);
    const auto circuit = circuit_from_dnf(psi);
    const auto cg = compile(circuit);
    const int ell = static_cast<int>(psi.terms.size());

    // Exhaustive: the chain exposes each term's value at its scheduled step.
    for (const auto& edge : all_hyperedges(N, K)) {
        const auto z = encode_hyperedge(edge, N, K);
        const auto chain = chain_of_thought(cg.generator, feature_map(z, cg.s), cg.thinking_length);
        for (int t = 1; t <= ell; ++t) {
            const int step = cg.gate_schedule[static_cast<std::size_t>(t - 1)];
            REQUIRE(chain[static_cast<std::size_t>(step - 1)] == eval_gate(circuit, t, z));
        }
        REQUIRE(chain.back() == (p.eval(x_restrict(x, edge)) ? 1 : 0));
    }

    // Permuted-thinker sampling: conditioned on label 1, the satisfied-term
    // position under a uniformly drawn permutation is uniform on [ell].
    Rng rng(91);
    std::vector<long long> position_counts(static_cast<std::size_t>(ell), 0);
    const auto edges = all_hyperedges(N, K);
    int collected = 0;
    while (collected < 10000) {
        const auto& edge = edges[static_cast<std::size_t>(rng.below(edges.size()))];
        if (!p.eval(x_restrict(x, edge))) continue;
        const auto z = encode_hyperedge(edge, N, K);
        std::vector<int> pi(static_cast<std::size_t>(ell));
        for (int i = 0; i < ell; ++i) pi[static_cast<std::size_t>(i)] = i;
        rng.shuffle(pi);
        const auto permuted = permute_hidden(circuit, pi);
        int fired = -1;
        for (int t = 1; t <= ell; ++t)
            if (eval_gate(permuted, t, z)) {
                REQUIRE(fired == -1);  // single-term satisfaction survives permutation
                fired = t - 1;
            }
        REQUIRE(fired >= 0);
        ++position_counts[static_cast<std::size_t>(fired)];
        ++collected;
    }
    CHECK(chi_square_uniform_pvalue(position_counts) > 0.001);
}
