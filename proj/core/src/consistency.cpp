#include "cotforge/consistency.hpp"

#include <algorithm>
#include <map>

#include "cotforge/errors.hpp"

namespace cotforge {

std::vector<PrefixConstraint> cot_to_constraints(const BitString& x, const BitString& z, int d) {
    std::vector<PrefixConstraint> out;
    out.reserve(z.size());
    BitString prefix = x;
    for (std::size_t t = 0; t < z.size(); ++t) {
        const std::size_t take = std::min<std::size_t>(static_cast<std::size_t>(d), prefix.size());
        PrefixConstraint c;
        c.window_view.assign(prefix.end() - static_cast<std::ptrdiff_t>(take), prefix.end());
        c.label = z[t];
        out.push_back(std::move(c));
        prefix.push_back(z[t]);
    }
    return out;
}

FeasibilityProblem dataset_problem(const CotDataset& data, int d) {
    FeasibilityProblem p;
    p.dimension = d;
    for (const auto& ex : data) {
        auto cs = cot_to_constraints(ex.x, ex.z, d);
        p.constraints.insert(p.constraints.end(), cs.begin(), cs.end());
    }
    return p;
}

namespace {

bool all_zero(const BitString& v) {
    for (auto b : v)
        if (b) return false;
    return true;
}

// Right-aligned embedding of a window view into a signed d-vector; label 0
// rows are negated so every constraint reads row . w >= 1.
std::vector<double> constraint_row(const PrefixConstraint& c, int d) {
    std::vector<double> row(static_cast<std::size_t>(d), 0.0);
    const double sign = c.label ? 1.0 : -1.0;
    const std::size_t len = c.window_view.size();
    for (std::size_t i = 0; i < len; ++i)
        if (c.window_view[i]) row[static_cast<std::size_t>(d) - len + i] = sign;
    return row;
}

void verify_postcondition(const LinearThresholdGenerator& g,
                          const std::vector<PrefixConstraint>& constraints) {
    const int d = g.window();
    for (const auto& c : constraints) {
        double acc = 0.0;
        const std::size_t len = c.window_view.size();
        for (std::size_t i = 0; i < len; ++i)
            if (c.window_view[i])
                acc += g.weights[static_cast<std::size_t>(d) - len + i];
        const bool ok = c.label ? (acc >= 0.0) : (acc <= -1.0);
        if (!ok) throw Error("consistent_generator: postcondition verification failed");
        if (thr(acc) != c.label) throw Error("consistent_generator: thr semantics violated");
    }
}

}  // namespace

LinearThresholdGenerator consistent_generator(const FeasibilityProblem& p, SolverEngine engine) {
    const int d = p.dimension;
    if (d < 1) throw Error("consistent_generator: dimension must be positive");

    // Deduplicate views; identical windows with conflicting labels can never
    // be realized by a function, and an all-zero window forces thr(0) = 1.
    std::map<BitString, int> seen;
    std::vector<const PrefixConstraint*> active;
    for (const auto& c : p.constraints) {
        if (c.window_view.empty()) throw Error("consistent_generator: empty window view");
        if (static_cast<int>(c.window_view.size()) > d)
            throw Error("consistent_generator: window view longer than dimension");
        if (all_zero(c.window_view)) {
            if (c.label == 0) throw NoConsistentGenerator();
            continue;
        }
        auto [it, inserted] = seen.emplace(c.window_view, c.label);
        if (!inserted) {
            if (it->second != c.label) throw NoConsistentGenerator();
            continue;
        }
        active.push_back(&c);
    }

    LinearThresholdGenerator g;
    if (active.empty()) {
        g.weights.assign(static_cast<std::size_t>(d), 0.0);
        return g;
    }

    std::vector<std::vector<double>> rows;
    rows.reserve(active.size());
    for (const auto* c : active) rows.push_back(constraint_row(*c, d));

    const MarginSolveResult res = solve_margin_system(rows, d, engine);
    if (!res.feasible) throw NoConsistentGenerator();
    g.weights = res.w;
    verify_postcondition(g, p.constraints);
    return g;
}

std::vector<LinearThresholdGenerator> partition_consistent(
    const std::vector<CotDataset>& groups, int d, int T,
    const std::vector<BitString>& eval_points, SolverEngine engine) {
    if (groups.empty()) throw Error("partition_consistent: no groups");
    if (eval_points.empty()) throw Error("partition_consistent: no eval points");

    std::vector<LinearThresholdGenerator> gens;
    gens.reserve(groups.size());
    for (std::size_t gi = 0; gi < groups.size(); ++gi) {
        try {
            gens.push_back(consistent_generator(dataset_problem(groups[gi], d), engine));
        } catch (const NoConsistentGenerator&) {
            throw NoConsistentGenerator(static_cast<int>(gi));
        }
    }
    for (const auto& pt : eval_points) {
        const int ref = end_to_end(gens[0], pt, T);
        for (std::size_t gi = 1; gi < gens.size(); ++gi) {
            if (end_to_end(gens[gi], pt, T) != ref)
                throw EteMismatch("groups 0 and " + std::to_string(gi) +
                                  " disagree end-to-end on " + to_string(pt));
        }
    }
    return gens;
}

LinearThresholdGenerator pigeonhole_learn(const CotDataset& data, int d, int T,
                                          SolverEngine engine) {
    std::map<int, CotDataset> groups;
    for (const auto& ex : data) {
        if (!ex.identity) throw Error("pigeonhole_learn: example without identity");
        if (static_cast<int>(ex.z.size()) != T)
            throw Error("pigeonhole_learn: trace length differs from T");
        groups[*ex.identity].push_back(ex);
    }
    if (groups.empty()) throw NoData();
    int best_id = groups.begin()->first;
    std::size_t best_size = 0;
    for (const auto& [id, group] : groups) {
        if (group.size() > best_size) {  // ties keep the smallest identity
            best_size = group.size();
            best_id = id;
        }
    }
    return consistent_generator(dataset_problem(groups.at(best_id), d), engine);
}

std::vector<int> pool_restricted_kcons(const CotDataset& data,
                                       const std::vector<LinearThresholdGenerator>& pool,
                                       int kappa, int T,
                                       const std::vector<BitString>& eval_points) {
    const int p = static_cast<int>(pool.size());
    if (kappa < 1 || kappa > p) throw Error("pool_restricted_kcons: need 1 <= kappa <= |pool|");

    // covers[j][i]: pool member j reproduces example i's trace exactly.
    std::vector<std::vector<bool>> covers(static_cast<std::size_t>(p));
    for (int j = 0; j < p; ++j) {
        auto& row = covers[static_cast<std::size_t>(j)];
        row.resize(data.size());
        for (std::size_t i = 0; i < data.size(); ++i)
            row[i] = chain_of_thought(pool[static_cast<std::size_t>(j)], data[i].x,
                                      static_cast<int>(data[i].z.size())) == data[i].z;
    }
    std::vector<std::vector<int>> e2e(static_cast<std::size_t>(p));
    for (int j = 0; j < p; ++j)
        for (const auto& pt : eval_points)
            e2e[static_cast<std::size_t>(j)].push_back(end_to_end(pool[static_cast<std::size_t>(j)], pt, T));

    std::vector<int> pick(static_cast<std::size_t>(kappa));
    for (int i = 0; i < kappa; ++i) pick[static_cast<std::size_t>(i)] = i;
    while (true) {
        bool agree = true;
        for (int i = 1; i < kappa && agree; ++i)
            agree = e2e[static_cast<std::size_t>(pick[static_cast<std::size_t>(i)])] ==
                    e2e[static_cast<std::size_t>(pick[0])];
        if (agree) {
            bool covered = true;
            for (std::size_t ex = 0; ex < data.size() && covered; ++ex) {
                covered = false;
                for (int i = 0; i < kappa; ++i)
                    if (covers[static_cast<std::size_t>(pick[static_cast<std::size_t>(i)])][ex]) {
                        covered = true;
                        break;
                    }
            }
            if (covered) return pick;
        }
        // next kappa-combination in lexicographic order
        int i = kappa - 1;
        while (i >= 0 && pick[static_cast<std::size_t>(i)] == p - kappa + i) --i;
        if (i < 0) break;
        ++pick[static_cast<std::size_t>(i)];
        for (int j = i + 1; j < kappa; ++j)
            pick[static_cast<std::size_t>(j)] = pick[static_cast<std::size_t>(j - 1)] + 1;
    }
    throw NoCover();
}

}  // namespace cotforge
