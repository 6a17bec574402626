#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <variant>
#include <vector>

#include "cotforge/ar_core.hpp"
#include "cotforge/circuits.hpp"
#include "cotforge/dataset.hpp"
#include "cotforge/rng.hpp"

namespace cotforge {

// Input distribution as a sampling callback; built-ins below cover the
// uniform cube, feature-map images and user tables.
using InputSampler = std::function<BitString(Rng&)>;

InputSampler uniform_input_sampler(int d);
// x uniform on {0,1}^n, embedded by the compiler feature map for size-s circuits.
InputSampler phi_image_sampler(int n, int s);
InputSampler table_sampler(std::vector<BitString> rows);

// A tuple of thinkers promised to agree end-to-end. Generation refuses to run
// until the promise has been checked (exhaustively for small windows, sampled
// otherwise); `evidence` records how.
struct ThinkerPool {
    std::vector<LinearThresholdGenerator> generators;
    int d = 0;
    int T = 0;
    bool verified_e2e_equal = false;
    std::string evidence;

    int kappa() const { return static_cast<int>(generators.size()); }
};

// All hidden-gate permutations of a circuit, compiled: the f_pi family. They
// agree end-to-end by construction but still get verified like any pool.
// Throws UnsupportedSize when (s-1)! would exceed max_thinkers.
ThinkerPool permuted_compiled_pool(const ThresholdCircuit& c, int max_thinkers = 720);

// Exhaustive verification over all sequences of length 1..d; requires d <= 16.
// Appropriate for pools meant to run on the whole cube. Compiled pools are
// only promised equal on feature-map images; verify those on their support.
void verify_pool_exhaustive(ThinkerPool& pool);
// Exhaustive verification over an explicit support set.
void verify_pool_on_inputs(ThinkerPool& pool, const std::vector<BitString>& inputs);
// Sampled verification on `samples` draws from the input distribution.
void verify_pool_sampled(ThinkerPool& pool, const InputSampler& dist, std::size_t samples,
                         std::uint64_t seed);

// How thinker identities attach to examples.
struct AdversarialSelection {
    // Sees the whole input batch before assigning identities.
    std::function<std::vector<int>(const std::vector<BitString>&)> assign;
};
struct InstanceDependentSelection {
    std::function<int(const BitString&)> selector;
};
struct InstanceDependentSampling {
    // Returns a distribution over [kappa] for the given instance.
    std::function<std::vector<double>(const BitString&)> conditional;
};
struct UniformSelection {};

using IdentityModel = std::variant<AdversarialSelection, InstanceDependentSelection,
                                   InstanceDependentSampling, UniformSelection>;

std::string identity_model_name(const IdentityModel& model);

// m i.i.d. end-to-end examples labeled by the target generator.
E2eDataset gen_e2e(const LinearThresholdGenerator& target, const InputSampler& dist, int m, int T,
                   std::uint64_t seed);

// m CoT examples from the pool under the chosen identity model. The identity
// field is populated iff reveal_ids.
CotDataset gen_cot(const ThinkerPool& pool, const IdentityModel& model, bool reveal_ids,
                   const InputSampler& dist, int m, std::uint64_t seed);

// Index-CoT process: m/mstar consecutive batches, one uniformly drawn thinker
// per batch; examples carry the batch index, not the thinker identity. With
// identity_mapping set, batch k is answered by thinker k (requires exactly
// kappa batches) instead of a uniform draw.
CotDataset gen_index_cot(const ThinkerPool& pool, const InputSampler& dist, int m, int mstar,
                         std::uint64_t seed, bool identity_mapping = false);

// --- Active and adaptive collection ---

struct ActiveRound {
    std::vector<int> requested;        // indices into the e2e set
    int thinker = -1;                  // pool index chosen by the adversary
    std::vector<BitString> traces;
};

struct ActiveHistory {
    std::vector<ActiveRound> rounds;
};

// Picks the pool member answering this round. In the strict protocol the
// adversary sees the current selection; in the relaxed protocol `selected`
// is null because the thinker is fixed before the subset is revealed.
using ThinkerAdversary = std::function<int(const ThinkerPool&, const E2eDataset&,
                                           const ActiveHistory&, const std::vector<int>* selected)>;

ThinkerAdversary fixed_adversary(int pool_index);
ThinkerAdversary round_robin_adversary();
ThinkerAdversary seeded_random_adversary(std::uint64_t seed);
// Maximizes Hamming disagreement between the candidate's traces and the
// traces already revealed for the same inputs; ties to the lowest index.
ThinkerAdversary disagreement_greedy_adversary();

// Stateful single-owner session running the round-based protocol: the learner
// requests at most `budget` CoTs per round, the adversary answers each round
// with one pool member. Not shareable across threads.
class ActiveSession {
public:
    ActiveSession(E2eDataset e2e, ThinkerPool pool, ThinkerAdversary adversary, int budget,
                  bool strict);

    // One protocol round; returns the chosen thinker's traces on `indices`.
    std::vector<BitString> request_cots(const std::vector<int>& indices);

    const E2eDataset& e2e() const { return e2e_; }
    const ThinkerPool& pool() const { return pool_; }
    const ActiveHistory& history() const { return history_; }
    int budget() const { return budget_; }
    bool strict() const { return strict_; }
    int T() const { return pool_.T; }
    int d() const { return pool_.d; }

private:
    E2eDataset e2e_;
    ThinkerPool pool_;
    ThinkerAdversary adversary_;
    int budget_;
    bool strict_;
    ActiveHistory history_;
};

ActiveSession open_active_session(E2eDataset e2e, ThinkerPool pool, ThinkerAdversary adversary,
                                  int budget, bool strict);

// --- Dataset files: JSON lines with one header record ---

void write_cot_dataset(const std::string& path, const CotDataset& data, int d, int T, int kappa,
                       const std::string& model, std::uint64_t seed);
CotDataset read_cot_dataset(const std::string& path, int* d = nullptr, int* T = nullptr,
                            int* kappa = nullptr);

void write_e2e_dataset(const std::string& path, const E2eDataset& data, int d, int T,
                       std::uint64_t seed);
E2eDataset read_e2e_dataset(const std::string& path, int* d = nullptr, int* T = nullptr);

void write_pool(const std::string& path, const ThinkerPool& pool);
ThinkerPool read_pool(const std::string& path);

}  // namespace cotforge
