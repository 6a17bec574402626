#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "cotforge/ar_core.hpp"
#include "cotforge/simplex.hpp"
#include "cotforge/supervision.hpp"

namespace cotforge {

// Weighted-majority ensemble of end-to-end predictors. alpha = +infinity is
// the early-termination sentinel for a round that achieved zero weighted
// error; such a member decides alone.
struct BoostModel {
    struct Member {
        LinearThresholdGenerator generator;
        double alpha = 0.0;
    };
    std::vector<Member> members;
    int T = 0;
    int d = 0;
};

// Per-round bookkeeping of a fit.
struct BoostTrace {
    struct Attempt {
        double epsilon = 0.0;  // weighted e2e error of this inner attempt
        int queries = 0;       // distinct CoT requests, <= budget
    };
    struct Round {
        std::vector<Attempt> attempts;
        double epsilon = 0.0;         // chosen weak learner's error
        double alpha = 0.0;           // +infinity on a sentinel round
        double entropy = 0.0;         // Shannon entropy of D^(k), nats
        int queries = 0;              // total distinct CoT requests this round
    };
    std::vector<Round> rounds;
    bool early_terminated = false;
};

// Sample-size calculator m = ceil(c * (vc log(1/eps) log^2(vc/eps) + log(1/delta)) / eps),
// natural logarithms.
long long sample_size(double eps, double delta, double vc, double c = 1.0);

// VC surrogate for window-d linear thresholds run for T steps: min(d^2, T*d).
inline double vc_surrogate_linear(int d, int T) {
    const double dd = static_cast<double>(d);
    return std::min(dd * dd, static_cast<double>(T) * dd);
}

// Number of boosting rounds K = ceil(8 ln m).
int choose_k(long long m);

struct BoostConfig {
    int K = 0;                        // 0 means choose_k(m)
    double delta = 0.1;
    double weak_error_threshold = 0.25;
    int inner_attempts = 0;           // 0 means ceil(ln(2K/delta))
    std::uint64_t seed = 0;
    SolverEngine engine = SolverEngine::Auto;
};

// The boosting-based learner under the active and adaptive protocol. Each
// inner attempt draws a budget-sized subsample i.i.d. from the current
// distribution (duplicates collapse to one request), obtains traces from the
// session, runs the consistency oracle, and keeps the predictor once its
// weighted end-to-end error on the full training set drops to the weak
// threshold. A zero-error round terminates early with an infinite-weight
// member. Oracle infeasibility is reported with the offending round.
struct BoostResult {
    BoostModel model;
    BoostTrace trace;
};

BoostResult boost_fit(ActiveSession& session, const BoostConfig& config);

int predict(const BoostModel& model, const BitString& x);

// prod_k 2 sqrt(eps_k (1 - eps_k)) over executed rounds; 0 after a sentinel
// round. Upper-bounds the ensemble's empirical training error.
double error_product_bound(const BoostTrace& trace);

std::string boost_model_to_json(const BoostModel& model);
BoostModel boost_model_from_json(const std::string& text);
std::string boost_trace_to_csv(const BoostTrace& trace);

}  // namespace cotforge
