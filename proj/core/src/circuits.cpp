#include "cotforge/circuits.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "cotforge/ar_core.hpp"

namespace cotforge {

namespace {

void check_input(const ThresholdCircuit& c, const BitString& x) {
    if (static_cast<int>(x.size()) != c.n)
        throw BadGate("eval: input has length " + std::to_string(x.size()) + ", circuit arity is " +
                      std::to_string(c.n));
}

}  // namespace

bool eval_dnf(const DnfFormula& f, const BitString& x) {
    for (const auto& term : f.terms) {
        bool sat = true;
        for (const auto& lit : term) {
            const bool v = x[static_cast<std::size_t>(lit.var)] != 0;
            if (v != lit.positive) {
                sat = false;
                break;
            }
        }
        if (sat) return true;
    }
    return false;
}

bool eval_cnf(const CnfFormula& f, const BitString& x) {
    for (const auto& clause : f.clauses) {
        bool sat = false;
        for (const auto& lit : clause) {
            const bool v = x[static_cast<std::size_t>(lit.var)] != 0;
            if (v == lit.positive) {
                sat = true;
                break;
            }
        }
        if (!sat) return false;
    }
    return true;
}

int eval_gate(const ThresholdCircuit& c, int t, const BitString& x) {
    check_input(c, x);
    const int s = c.size();
    if (t < 1 || t > s) throw BadGate("gate index " + std::to_string(t) + " out of range [1, " +
                                      std::to_string(s) + "]");
    if (t <= s - 1) {
        const auto& w = c.hidden_weights[static_cast<std::size_t>(t - 1)];
        double acc = c.hidden_biases[static_cast<std::size_t>(t - 1)];
        for (int i = 0; i < c.n; ++i)
            if (x[static_cast<std::size_t>(i)]) acc += w[static_cast<std::size_t>(i)];
        return thr(acc);
    }
    double acc = c.output_bias;
    for (int j = 0; j < s - 1; ++j)
        if (eval_gate(c, j + 1, x)) acc += c.output_weights[static_cast<std::size_t>(j)];
    return thr(acc);
}

int eval(const ThresholdCircuit& c, const BitString& x) { return eval_gate(c, c.size(), x); }

ThresholdCircuit circuit_from_dnf(const DnfFormula& f) {
    if (f.terms.empty()) throw EmptyFormula();
    ThresholdCircuit c;
    c.n = f.vars;
    for (const auto& term : f.terms) {
        std::vector<double> w(static_cast<std::size_t>(f.vars), 0.0);
        int negatives = 0;
        for (const auto& lit : term) {
            w[static_cast<std::size_t>(lit.var)] += lit.positive ? 1.0 : -1.0;
            if (!lit.positive) ++negatives;
        }
        c.hidden_weights.push_back(std::move(w));
        c.hidden_biases.push_back(static_cast<double>(negatives) -
                                  static_cast<double>(term.size()));
        c.output_weights.push_back(1.0);
    }
    c.output_bias = -1.0;
    return c;
}

ThresholdCircuit circuit_from_cnf(const CnfFormula& f) {
    if (f.clauses.empty()) throw EmptyFormula();
    ThresholdCircuit c;
    c.n = f.vars;
    for (const auto& clause : f.clauses) {
        // OR gate: sum of matched literals >= 1, i.e. +1 per positive literal,
        // -1 per negative, bias (#negatives) - 1.
        std::vector<double> w(static_cast<std::size_t>(f.vars), 0.0);
        int negatives = 0;
        for (const auto& lit : clause) {
            w[static_cast<std::size_t>(lit.var)] += lit.positive ? 1.0 : -1.0;
            if (!lit.positive) ++negatives;
        }
        c.hidden_weights.push_back(std::move(w));
        c.hidden_biases.push_back(static_cast<double>(negatives) - 1.0);
        c.output_weights.push_back(1.0);
    }
    c.output_bias = -static_cast<double>(f.clauses.size());
    return c;
}

ThresholdCircuit permute_hidden(const ThresholdCircuit& c, const std::vector<int>& pi) {
    const int h = c.hidden_count();
    if (static_cast<int>(pi.size()) != h)
        throw BadPermutation("permutation length != hidden gate count");
    std::vector<bool> seen(static_cast<std::size_t>(h), false);
    for (int v : pi) {
        if (v < 0 || v >= h || seen[static_cast<std::size_t>(v)])
            throw BadPermutation("not a bijection on hidden gates");
        seen[static_cast<std::size_t>(v)] = true;
    }
    ThresholdCircuit out;
    out.n = c.n;
    out.output_bias = c.output_bias;
    out.hidden_weights.resize(static_cast<std::size_t>(h));
    out.hidden_biases.resize(static_cast<std::size_t>(h));
    out.output_weights.resize(static_cast<std::size_t>(h));
    for (int t = 0; t < h; ++t) {
        const auto src = static_cast<std::size_t>(pi[static_cast<std::size_t>(t)]);
        out.hidden_weights[static_cast<std::size_t>(t)] = c.hidden_weights[src];
        out.hidden_biases[static_cast<std::size_t>(t)] = c.hidden_biases[src];
        out.output_weights[static_cast<std::size_t>(t)] = c.output_weights[src];
    }
    return out;
}

namespace {

std::vector<std::string> content_lines(std::istream& in) {
    std::vector<std::string> lines;
    std::string line;
    while (std::getline(in, line)) {
        auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        std::istringstream probe(line);
        std::string tok;
        if (probe >> tok) lines.push_back(line);
    }
    return lines;
}

std::vector<double> parse_numbers(const std::string& line, std::string& head) {
    std::istringstream ss(line);
    ss >> head;
    std::vector<double> v;
    double x;
    while (ss >> x) v.push_back(x);
    return v;
}

}  // namespace

ThresholdCircuit parse_circuit(std::istream& in) {
    const auto lines = content_lines(in);
    if (lines.empty()) throw BadCircuit("empty circuit description");
    std::string head;
    auto header = parse_numbers(lines[0], head);
    if (head != "circuit" || header.size() != 2)
        throw BadCircuit("expected header: circuit <n> <s>");
    ThresholdCircuit c;
    c.n = static_cast<int>(header[0]);
    const int s = static_cast<int>(header[1]);
    if (c.n < 1 || s < 2) throw BadCircuit("need n >= 1 and s >= 2");
    if (static_cast<int>(lines.size()) != s + 1)
        throw BadCircuit("expected " + std::to_string(s) + " gate lines");
    for (int g = 1; g <= s - 1; ++g) {
        auto nums = parse_numbers(lines[static_cast<std::size_t>(g)], head);
        if (head != "gate" || static_cast<int>(nums.size()) != c.n + 1)
            throw BadCircuit("gate line " + std::to_string(g) + ": expected gate + " +
                             std::to_string(c.n) + " weights + bias");
        c.hidden_biases.push_back(nums.back());
        nums.pop_back();
        c.hidden_weights.push_back(std::move(nums));
    }
    auto nums = parse_numbers(lines.back(), head);
    if (head != "out" || static_cast<int>(nums.size()) != s)
        throw BadCircuit("output line: expected out + " + std::to_string(s - 1) +
                         " weights + bias");
    c.output_bias = nums.back();
    nums.pop_back();
    c.output_weights = std::move(nums);
    for (const auto& row : c.hidden_weights)
        for (double w : row)
            if (!std::isfinite(w)) throw BadCircuit("non-finite weight");
    return c;
}

ThresholdCircuit parse_circuit_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw BadCircuit("cannot open circuit file: " + path);
    return parse_circuit(in);
}

std::string format_circuit(const ThresholdCircuit& c) {
    std::ostringstream out;
    out << "circuit " << c.n << " " << c.size() << "\n";
    for (int g = 0; g < c.hidden_count(); ++g) {
        out << "gate";
        for (double w : c.hidden_weights[static_cast<std::size_t>(g)]) out << " " << w;
        out << " " << c.hidden_biases[static_cast<std::size_t>(g)] << "\n";
    }
    out << "out";
    for (double w : c.output_weights) out << " " << w;
    out << " " << c.output_bias << "\n";
    return out.str();
}

DnfFormula parse_dnf(std::istream& in) {
    const auto lines = content_lines(in);
    if (lines.empty()) throw EmptyFormula();
    std::string head;
    auto header = parse_numbers(lines[0], head);
    if (head != "dnf" || header.size() != 1) throw BadConfig("expected header: dnf <vars>");
    DnfFormula f;
    f.vars = static_cast<int>(header[0]);
    for (std::size_t i = 1; i < lines.size(); ++i) {
        auto nums = parse_numbers(lines[i], head);
        if (head != "term") throw BadConfig("expected term lines");
        std::vector<Literal> term;
        for (double v : nums) {
            const int lit = static_cast<int>(v);
            if (lit == 0 || std::abs(lit) > f.vars) throw BadConfig("literal out of range");
            term.push_back({std::abs(lit) - 1, lit > 0});
        }
        f.terms.push_back(std::move(term));
    }
    return f;
}

std::string format_dnf(const DnfFormula& f) {
    std::ostringstream out;
    out << "dnf " << f.vars << "\n";
    for (const auto& term : f.terms) {
        out << "term";
        for (const auto& lit : term) out << " " << (lit.positive ? lit.var + 1 : -(lit.var + 1));
        out << "\n";
    }
    return out.str();
}

CnfFormula parse_cnf(std::istream& in) {
    const auto lines = content_lines(in);
    if (lines.empty()) throw EmptyFormula();
    std::string head;
    auto header = parse_numbers(lines[0], head);
    if (head != "cnf" || header.size() != 1) throw BadConfig("expected header: cnf <vars>");
    CnfFormula f;
    f.vars = static_cast<int>(header[0]);
    for (std::size_t i = 1; i < lines.size(); ++i) {
        auto nums = parse_numbers(lines[i], head);
        if (head != "clause") throw BadConfig("expected clause lines");
        std::vector<Literal> clause;
        for (double v : nums) {
            const int lit = static_cast<int>(v);
            if (lit == 0 || std::abs(lit) > f.vars) throw BadConfig("literal out of range");
            clause.push_back({std::abs(lit) - 1, lit > 0});
        }
        f.clauses.push_back(std::move(clause));
    }
    return f;
}

std::string format_cnf(const CnfFormula& f) {
    std::ostringstream out;
    out << "cnf " << f.vars << "\n";
    for (const auto& clause : f.clauses) {
        out << "clause";
        for (const auto& lit : clause) out << " " << (lit.positive ? lit.var + 1 : -(lit.var + 1));
        out << "\n";
    }
    return out.str();
}

}  // namespace cotforge
