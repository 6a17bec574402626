#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "cotforge/bits.hpp"
#include "cotforge/errors.hpp"

namespace cotforge {

// Depth-2 threshold circuit: s-1 hidden threshold gates over the n inputs and
// one output threshold gate over the hidden values. Size s counts non-input
// gates, so s >= 2 always (a hidden layer is required; see compiler helpers
// for wrapping a bare gate).
struct ThresholdCircuit {
    int n = 0;                                       // input arity
    std::vector<std::vector<double>> hidden_weights; // (s-1) x n
    std::vector<double> hidden_biases;               // s-1
    std::vector<double> output_weights;              // s-1
    double output_bias = 0.0;

    int size() const { return static_cast<int>(hidden_weights.size()) + 1; }
    int hidden_count() const { return static_cast<int>(hidden_weights.size()); }
};

// Signed literal: variable index in [0, vars), positive or negated.
struct Literal {
    int var = 0;
    bool positive = true;
};

struct DnfFormula {
    int vars = 0;
    std::vector<std::vector<Literal>> terms;  // empty term = constant true
};

struct CnfFormula {
    int vars = 0;
    std::vector<std::vector<Literal>> clauses;  // empty clause = constant false
};

bool eval_dnf(const DnfFormula& f, const BitString& x);
bool eval_cnf(const CnfFormula& f, const BitString& x);

// Value of gate t (1-based: 1..s-1 hidden, s output) on input x.
int eval_gate(const ThresholdCircuit& c, int t, const BitString& x);

// Circuit output; equals eval_gate at t = s.
int eval(const ThresholdCircuit& c, const BitString& x);

// One AND gate per term (+1 per positive literal, -1 per negative, bias
// (#negative) - (#literals)), OR output (weights 1, bias -1). Exact integer
// weights, so thresholding is never ambiguous in floating point.
ThresholdCircuit circuit_from_dnf(const DnfFormula& f);

// Dual wiring: OR gates per clause, AND output (weights 1, bias -(#clauses)).
ThresholdCircuit circuit_from_cnf(const CnfFormula& f);

// Reorder hidden gates: gate t of the result computes gate pi[t] of the
// input (0-based). eval is unchanged on every input.
ThresholdCircuit permute_hidden(const ThresholdCircuit& c, const std::vector<int>& pi);

// Text format, one gate/term per line. Circuits:
//   circuit <n> <s>
//   gate <w_1> ... <w_n> <bias>     (s-1 lines)
//   out <v_1> ... <v_{s-1}> <bias>
// Formulas:
//   dnf <vars> | cnf <vars>
//   term <signed 1-based literals...> | clause <...>
// '#' starts a comment.
ThresholdCircuit parse_circuit(std::istream& in);
ThresholdCircuit parse_circuit_file(const std::string& path);
std::string format_circuit(const ThresholdCircuit& c);
DnfFormula parse_dnf(std::istream& in);
std::string format_dnf(const DnfFormula& f);
CnfFormula parse_cnf(std::istream& in);
std::string format_cnf(const CnfFormula& f);

}  // namespace cotforge
