#include "cotforge/dnf_fork.hpp"

#include <algorithm>

#include "cotforge/errors.hpp"

namespace cotforge {

bool Predicate::eval(const BitString& b) const {
    std::size_t index = 0;
    for (int j = 0; j < arity; ++j)
        if (b[static_cast<std::size_t>(j)]) index |= (1ull << j);
    return table[index] != 0;
}

Predicate xor_predicate(int arity) {
    Predicate p;
    p.arity = arity;
    p.table.resize(1ull << arity);
    for (std::size_t v = 0; v < p.table.size(); ++v)
        p.table[v] = static_cast<std::uint8_t>(__builtin_popcountll(v) & 1);
    return p;
}

Predicate and_predicate(int arity) {
    Predicate p;
    p.arity = arity;
    p.table.assign(1ull << arity, 0);
    p.table.back() = 1;
    return p;
}

Predicate table_predicate(int arity, std::uint64_t bits) {
    if (arity < 1 || arity > 6) throw BadArity("table_predicate: arity must be in 1..6");
    Predicate p;
    p.arity = arity;
    p.table.resize(1ull << arity);
    for (std::size_t v = 0; v < p.table.size(); ++v)
        p.table[v] = static_cast<std::uint8_t>((bits >> v) & 1u);
    return p;
}

Predicate predicate_from_hex(int arity, const std::string& hex) {
    if (hex.empty() || hex.size() > 16) throw BadArity("predicate hex must have 1..16 digits");
    std::uint64_t bits = 0;
    for (char c : hex) {
        int digit;
        if (c >= '0' && c <= '9') digit = c - '0';
        else if (c >= 'a' && c <= 'f') digit = 10 + (c - 'a');
        else if (c >= 'A' && c <= 'F') digit = 10 + (c - 'A');
        else throw BadArity("invalid hex digit in predicate table");
        bits = (bits << 4) | static_cast<std::uint64_t>(digit);
    }
    return table_predicate(arity, bits);
}

BitString encode_hyperedge(const Hyperedge& edge, int N, int K) {
    if (static_cast<int>(edge.vertices.size()) != K)
        throw BadEdge("hyperedge must have exactly K vertices");
    std::vector<bool> seen(static_cast<std::size_t>(N), false);
    for (int v : edge.vertices) {
        if (v < 0 || v >= N) throw BadEdge("hyperedge vertex out of range");
        if (seen[static_cast<std::size_t>(v)]) throw BadEdge("hyperedge vertices must be distinct");
        seen[static_cast<std::size_t>(v)] = true;
    }
    BitString z(static_cast<std::size_t>(N) * static_cast<std::size_t>(K), 1);
    for (int j = 0; j < K; ++j)
        z[static_cast<std::size_t>(j) * static_cast<std::size_t>(N) +
          static_cast<std::size_t>(edge.vertices[static_cast<std::size_t>(j)])] = 0;
    return z;
}

std::vector<Hyperedge> all_hyperedges(int N, int K) {
    std::vector<Hyperedge> out;
    std::vector<int> current;
    std::vector<bool> used(static_cast<std::size_t>(N), false);
    auto rec = [&](auto&& self) -> void {
        if (static_cast<int>(current.size()) == K) {
            out.push_back({current});
            return;
        }
        for (int v = 0; v < N; ++v) {
            if (used[static_cast<std::size_t>(v)]) continue;
            used[static_cast<std::size_t>(v)] = true;
            current.push_back(v);
            self(self);
            current.pop_back();
            used[static_cast<std::size_t>(v)] = false;
        }
    };
    rec(rec);
    return out;
}

std::vector<BitString> sample_hard_distribution(int N, int K, int m, std::uint64_t seed) {
    if (K < 1 || K > N) throw BadEdge("sample_hard_distribution: need 1 <= K <= N");
    std::vector<BitString> out;
    out.reserve(static_cast<std::size_t>(m));
    for (int i = 0; i < m; ++i) {
        Rng rng(derive_seed(seed, "hyperedge", static_cast<std::uint64_t>(i)));
        // Ordered tuple of distinct vertices via partial Fisher-Yates.
        std::vector<int> pool(static_cast<std::size_t>(N));
        for (int v = 0; v < N; ++v) pool[static_cast<std::size_t>(v)] = v;
        Hyperedge edge;
        for (int j = 0; j < K; ++j) {
            const std::size_t pick =
                static_cast<std::size_t>(j) +
                static_cast<std::size_t>(rng.below(static_cast<std::uint64_t>(N - j)));
            std::swap(pool[static_cast<std::size_t>(j)], pool[pick]);
            edge.vertices.push_back(pool[static_cast<std::size_t>(j)]);
        }
        out.push_back(encode_hyperedge(edge, N, K));
    }
    return out;
}

DnfFormula build_psi(const Predicate& p, const BitString& x) {
    const int N = static_cast<int>(x.size());
    const int K = p.arity;
    DnfFormula f;
    f.vars = N * K;
    for (std::size_t v = 0; v < p.table.size(); ++v) {
        if (!p.table[v]) continue;
        std::vector<Literal> term;
        for (int j = 0; j < K; ++j) {
            const int bj = static_cast<int>((v >> j) & 1u);
            for (int l = 0; l < N; ++l)
                if (x[static_cast<std::size_t>(l)] != bj) term.push_back({j * N + l, true});
        }
        f.terms.push_back(std::move(term));  // empty term = constant true
    }
    return f;
}

CnfFormula build_phi(const Predicate& p, const BitString& x) {
    const int N = static_cast<int>(x.size());
    const int K = p.arity;
    CnfFormula f;
    f.vars = N * K;
    for (std::size_t v = 0; v < p.table.size(); ++v) {
        if (p.table[v]) continue;
        std::vector<Literal> clause;
        for (int j = 0; j < K; ++j) {
            const int gj = static_cast<int>((v >> j) & 1u);
            for (int l = 0; l < N; ++l)
                if (x[static_cast<std::size_t>(l)] != gj) clause.push_back({j * N + l, false});
        }
        f.clauses.push_back(std::move(clause));  // empty clause = constant false
    }
    return f;
}

ForkReport check_fork(const ThresholdCircuit& c0, const ThresholdCircuit& c1,
                      const std::vector<BitString>& inputs) {
    if (c0.n != c1.n) throw BadPair("check_fork: circuits have different arity");
    ForkReport report;
    for (const auto& z : inputs) {
        const int v0 = eval(c0, z);
        const int v1 = eval(c1, z);
        if (v0 != v1) report.violations.push_back({z, "eval_mismatch"});
        if (v0 == 0) {
            for (int t = 1; t <= c0.hidden_count(); ++t)
                if (eval_gate(c0, t, z) != 0) {
                    report.violations.push_back({z, "dnf_gate_not_zero"});
                    break;
                }
        }
        if (v1 == 1) {
            for (int t = 1; t <= c1.hidden_count(); ++t)
                if (eval_gate(c1, t, z) != 1) {
                    report.violations.push_back({z, "cnf_gate_not_one"});
                    break;
                }
        }
        ++report.inputs_checked;
    }
    return report;
}

BitString resample_term_vector(int label, int term_count, Rng& rng) {
    if (term_count < 1) throw BadArity("resample_term_vector: need at least one term");
    BitString v(static_cast<std::size_t>(term_count), 0);
    if (label)
        v[static_cast<std::size_t>(rng.below(static_cast<std::uint64_t>(term_count)))] = 1;
    return v;
}

}  // namespace cotforge
