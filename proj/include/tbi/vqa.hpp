#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "tbi/bitstring.hpp"
#include "tbi/fock.hpp"
#include "tbi/graph.hpp"
#include "tbi/qubo.hpp"
#include "tbi/rng.hpp"

namespace tbi {

// SPSA gain sequences a_k = learning_rate / (k + 1 + stability)^alpha and
// c_k = c / (k + 1)^gamma, with k counted from 0.
struct SpsaGains {
    double c = 0.1;
    double alpha = 0.602;
    double gamma = 0.101;
    double stability = 10.0;
};

// Everything the training loop needs besides graph and circuit: the joint
// variational parameters (beamsplitter angles plus one independent bit-flip
// probability per mode) and the optimizer knobs.
struct VQAParams {
    std::vector<double> thetas;
    std::vector<double> flip_probs;  // kept in [0,1] by projection
    double learning_rate = 0.1;
    int max_iter = 250;
    int max_samp = 100;  // samples per objective estimate
    SpsaGains spsa;
    bool early_stop = false;
    int convergence_window = 50;

    void validate(const TBIConfig& config, int n_vertices) const;
};

// thetas ~ U[0, pi), flip_probs ~ U[0, 0.5).
VQAParams random_vqa_params(const TBIConfig& config, int n_vertices, SplitMix64& rng);

struct IterationRecord {
    int iter = 0;
    double mean_energy = 0.0;     // mean over this iteration's samples
    std::int64_t min_energy = 0;  // running minimum, non-increasing
    std::string best;             // best bitstring so far
    std::int64_t t_ns = 0;        // nanoseconds since training started
};

using TrainingLog = std::vector<IterationRecord>;

struct VQAResult {
    Bitstring best_bitstring;
    std::int64_t min_energy = 0;
    bool found_dominating = false;
    TrainingLog log;
    std::optional<int> converged_at;
};

// Observation hooks; either may be empty.
struct TrainHooks {
    // Called once per objective estimate with its sample-mean energy.
    std::function<void(double)> on_objective_eval;
    // Called for every post-flip candidate bitstring with its energy.
    std::function<void(const Bitstring&, std::int64_t)> on_candidate;
};

// Flips each bit independently with its mode's probability.
Bitstring bit_flip(const Bitstring& bits, const std::vector<double>& flip_probs,
                   SplitMix64& rng);

struct ObjectiveValue {
    double mean_energy = 0.0;
    Bitstring best;
    std::int64_t best_energy = 0;
};

// Draws max_samp interferometer samples with the given angles on the
// alternating input, threshold-maps and bit-flips each, and scores them.
// Returns the sample-mean energy and the lowest-energy candidate seen
// (earliest occurrence on ties).
ObjectiveValue evaluate_objective(TbiSampler& sampler, const Graph& graph,
                                  const CostParams& cost, const std::vector<double>& thetas,
                                  const std::vector<double>& flip_probs, int max_samp,
                                  SplitMix64& rng, const TrainHooks& hooks = {});

struct SpsaStepResult {
    std::vector<double> params;
    double f_plus = 0.0;
    double f_minus = 0.0;
};

// One simultaneous-perturbation update of a flat parameter vector: exactly
// two objective evaluations at params +- c_k * delta with Rademacher delta,
// then params - a_k * g_hat. Coordinates at index >= prob_offset are clamped
// back into [0,1]. Throws on a non-finite objective value.
SpsaStepResult spsa_step(const std::function<double(const std::vector<double>&)>& objective,
                         const std::vector<double>& params, std::size_t prob_offset,
                         const SpsaGains& gains, double learning_rate, int k,
                         SplitMix64& rng);

// The full training loop: per iteration one SPSA step whose two objective
// estimates each draw fresh samples; the log records the iteration's mean
// energy (average of the two estimates) and the best candidate so far. The
// returned bitstring is the minimum-energy candidate across every sample of
// every iteration, re-checked against is_dominating_set.
VQAResult train(const Graph& graph, const TBIConfig& config, const CostParams& cost,
                const VQAParams& params, SplitMix64& rng, const TrainHooks& hooks = {});

// Iteration at which the running minimum has held for `window` iterations:
// last improvement index + window, or nullopt if the log ends before that.
std::optional<int> detect_convergence(const TrainingLog& log, int window = 50);

// One JSON object per line: iter, mean_energy, min_energy, best, t_ns.
std::string to_jsonl(const TrainingLog& log);

}  // namespace tbi
