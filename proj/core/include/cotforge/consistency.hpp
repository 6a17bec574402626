#pragma once

#include <vector>

#include "cotforge/ar_core.hpp"
#include "cotforge/dataset.hpp"
#include "cotforge/simplex.hpp"

namespace cotforge {

// One prefix -> next-token observation. window_view holds the last
// min(d, |prefix|) tokens, oldest first; shorter views constrain only the
// trailing weights (right-aligned), the rest stay free.
struct PrefixConstraint {
    BitString window_view;
    int label = 0;
};

struct FeasibilityProblem {
    int dimension = 0;
    std::vector<PrefixConstraint> constraints;
};

// Decompose one CoT example into its T prefix constraints: constraint t is
// the window of x ++ z[0..t-1) labeled z[t].
std::vector<PrefixConstraint> cot_to_constraints(const BitString& x, const BitString& z, int d);

// The single-thinker Consistent oracle for linear thresholds. Returns w with
//   <w, view> >= 0 for every label-1 constraint and
//   <w, view> <= -1 for every label-0 constraint
// (margin form; equivalent to strict thr consistency after scaling). The
// returned weights are re-verified against every constraint before return.
// Throws NoConsistentGenerator when the system is infeasible, i.e. the data
// is not single-thinker realizable at window d.
LinearThresholdGenerator consistent_generator(const FeasibilityProblem& p,
                                              SolverEngine engine = SolverEngine::Auto);

// Convenience: constraints of a whole dataset at window d.
FeasibilityProblem dataset_problem(const CotDataset& data, int d);

// Known-identity kappa-consistency: run the oracle per group, then insist the
// returned generators agree end-to-end on every eval point (a desk-scale
// surrogate for agreement everywhere). Throws NoConsistentGenerator with the
// failing group index, or EteMismatch naming the disagreement point.
std::vector<LinearThresholdGenerator> partition_consistent(
    const std::vector<CotDataset>& groups, int d, int T,
    const std::vector<BitString>& eval_points, SolverEngine engine = SolverEngine::Auto);

// Known identities, uniform-ish sampling: learn from the single largest
// identity group (ties to the smallest identity).
LinearThresholdGenerator pigeonhole_learn(const CotDataset& data, int d, int T,
                                          SolverEngine engine = SolverEngine::Auto);

// Unknown identities, finite candidate pool: exhaustively search kappa-subsets
// of the pool (lexicographic over pool order) for one whose members reproduce
// every trace exactly and agree end-to-end on the eval points. Returns pool
// indices, ascending. Throws NoCover when no subset works.
std::vector<int> pool_restricted_kcons(const CotDataset& data,
                                       const std::vector<LinearThresholdGenerator>& pool,
                                       int kappa, int T,
                                       const std::vector<BitString>& eval_points);

}  // namespace cotforge
