#pragma once

#include <stdexcept>
#include <string>

namespace cotforge {

// Base for all library errors so callers can catch everything in one place.
struct Error : std::runtime_error {
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

struct EmptySequence : Error {
    EmptySequence() : Error("next_token: input sequence is empty") {}
};

struct BadGate : Error {
    explicit BadGate(const std::string& what) : Error(what) {}
};

struct EmptyFormula : Error {
    EmptyFormula() : Error("formula has no terms/clauses") {}
};

struct BadPermutation : Error {
    explicit BadPermutation(const std::string& what) : Error(what) {}
};

struct UnsupportedSize : Error {
    explicit UnsupportedSize(const std::string& what) : Error(what) {}
};

struct BadCircuit : Error {
    explicit BadCircuit(const std::string& what) : Error(what) {}
};

struct NoConsistentGenerator : Error {
    // group < 0 means the whole problem, otherwise the offending group index.
    explicit NoConsistentGenerator(int group_index = -1)
        : Error(group_index < 0
                    ? std::string("no generator is consistent with the constraints")
                    : "no consistent generator for group " + std::to_string(group_index)),
          group(group_index) {}
    int group;
};

struct EteMismatch : Error {
    explicit EteMismatch(const std::string& what) : Error(what) {}
};

struct NoCover : Error {
    NoCover() : Error("no pool subset reproduces every trace") {}
};

struct UnverifiedPool : Error {
    UnverifiedPool() : Error("thinker pool has not been verified end-to-end equal") {}
};

struct BadPartition : Error {
    explicit BadPartition(const std::string& what) : Error(what) {}
};

struct BudgetExceeded : Error {
    explicit BudgetExceeded(const std::string& what) : Error(what) {}
};

struct NoData : Error {
    NoData() : Error("empty dataset") {}
};

struct BadArity : Error {
    explicit BadArity(const std::string& what) : Error(what) {}
};

struct BadEdge : Error {
    explicit BadEdge(const std::string& what) : Error(what) {}
};

struct BadPair : Error {
    explicit BadPair(const std::string& what) : Error(what) {}
};

struct BadConfig : Error {
    explicit BadConfig(const std::string& what) : Error(what) {}
};

}  // namespace cotforge
