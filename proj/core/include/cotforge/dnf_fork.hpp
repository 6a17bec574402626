#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "cotforge/bits.hpp"
#include "cotforge/circuits.hpp"
#include "cotforge/rng.hpp"

namespace cotforge {

// Ordered K-tuple of distinct vertices in [N], 0-based.
struct Hyperedge {
    std::vector<int> vertices;
};

// Boolean predicate over K bits as a truth table. table[i] is the value at
// the assignment whose j-th bit (1-based) is bit j-1 of i, i.e. b_1 = LSB.
struct Predicate {
    int arity = 0;
    std::vector<std::uint8_t> table;  // length 2^arity

    bool eval(const BitString& b) const;
};

Predicate xor_predicate(int arity);
Predicate and_predicate(int arity);
Predicate table_predicate(int arity, std::uint64_t bits);
// Hex string, lowest nibble first bit = table[0].
Predicate predicate_from_hex(int arity, const std::string& hex);

// One-cold encoding: K slices of length N; slice j is 1 everywhere except
// position i_j. Variable z_{j,l} lives at index (j-1)*N + (l-1).
BitString encode_hyperedge(const Hyperedge& edge, int N, int K);

// All ordered K-tuples of distinct vertices (N!/(N-K)! edges, lexicographic).
std::vector<Hyperedge> all_hyperedges(int N, int K);

// Encodings of m uniform random hyperedges.
std::vector<BitString> sample_hard_distribution(int N, int K, int m, std::uint64_t seed);

// DNF psi_x with one term per satisfying assignment b of P: the term checks
// x_S = b via positive literals z_{j,l} for every l with x_l != b_j. On every
// edge encoding, psi_x(z^S) = P(x_S) and at most one term is satisfied. Terms
// with no literals are the constant-true term and stay represented.
DnfFormula build_psi(const Predicate& p, const BitString& x);

// CNF twin phi_x, one clause per unsatisfying assignment g (negative
// literals); agrees with psi_x on every edge encoding.
CnfFormula build_phi(const Predicate& p, const BitString& x);

struct ForkViolation {
    BitString input;
    std::string kind;  // "eval_mismatch" | "dnf_gate_not_zero" | "cnf_gate_not_one"
};

struct ForkReport {
    std::vector<ForkViolation> violations;
    std::uint64_t inputs_checked = 0;
    bool ok() const { return violations.empty(); }
};

// On every given input: the two circuits agree; when the DNF-derived circuit
// outputs 0 all its hidden gates are 0; when the CNF-derived circuit outputs
// 1 all its hidden gates are 1. The guarantees hold on edge encodings;
// arbitrary inputs may legitimately violate them.
ForkReport check_fork(const ThresholdCircuit& c0, const ThresholdCircuit& c1,
                      const std::vector<BitString>& inputs);

// Identity-free CoT resampling: the vector of term evaluations under a
// uniformly permuted-term thinker, reconstructed from the label alone: all
// zeros for label 0, a uniformly placed standard basis vector for label 1.
BitString resample_term_vector(int label, int term_count, Rng& rng);

}  // namespace cotforge
