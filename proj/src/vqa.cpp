#include "tbi/vqa.hpp"

#include <chrono>
#include <cmath>
#include <limits>
#include <stdexcept>

#include <json.hpp>

namespace tbi {

namespace {

constexpr double kPi = 3.14159265358979323846;

double gain_a(const SpsaGains& g, double learning_rate, int k) {
    return learning_rate / std::pow(k + 1 + g.stability, g.alpha);
}

double gain_c(const SpsaGains& g, int k) { return g.c / std::pow(k + 1, g.gamma); }

}  // namespace

void VQAParams::validate(const TBIConfig& config, int n_vertices) const {
    if (config.n_modes != n_vertices)
        throw std::invalid_argument("interferometer mode count must equal vertex count");
    if (static_cast<int>(thetas.size()) != config.total_angle_count())
        throw std::invalid_argument("expected " + std::to_string(config.total_angle_count()) +
                                    " thetas, got " + std::to_string(thetas.size()));
    if (static_cast<int>(flip_probs.size()) != n_vertices)
        throw std::invalid_argument("need one flip probability per vertex");
    for (double p : flip_probs) {
        if (!(p >= 0.0 && p <= 1.0))
            throw std::invalid_argument("flip probabilities must lie in [0,1]");
    }
    if (max_iter < 1) throw std::invalid_argument("max_iter must be at least 1");
    if (max_samp < 1) throw std::invalid_argument("max_samp must be at least 1");
    if (!(learning_rate > 0.0)) throw std::invalid_argument("learning_rate must be positive");
    if (convergence_window < 1)
        throw std::invalid_argument("convergence_window must be at least 1");
}

VQAParams random_vqa_params(const TBIConfig& config, int n_vertices, SplitMix64& rng) {
    VQAParams params;
    params.thetas.resize(static_cast<std::size_t>(config.total_angle_count()));
    for (double& theta : params.thetas) theta = rng.next_double() * kPi;
    params.flip_probs.resize(static_cast<std::size_t>(n_vertices));
    for (double& p : params.flip_probs) p = rng.next_double() * 0.5;
    return params;
}

Bitstring bit_flip(const Bitstring& bits, const std::vector<double>& flip_probs,
                   SplitMix64& rng) {
    if (bits.size() != flip_probs.size())
        throw std::invalid_argument("bitstring and flip probabilities must match in length");
    Bitstring out(bits.size());
    for (std::size_t i = 0; i < bits.size(); ++i) {
        const bool flip = rng.next_double() < flip_probs[i];
        out[i] = flip ? (bits[i] ? 0 : 1) : bits[i];
    }
    return out;
}

ObjectiveValue evaluate_objective(TbiSampler& sampler, const Graph& graph,
                                  const CostParams& cost, const std::vector<double>& thetas,
                                  const std::vector<double>& flip_probs, int max_samp,
                                  SplitMix64& rng, const TrainHooks& hooks) {
    if (max_samp < 1) throw std::invalid_argument("max_samp must be at least 1");
    sampler.set_flat_angles(thetas);

    ObjectiveValue value;
    value.best_energy = std::numeric_limits<std::int64_t>::max();
    double sum = 0.0;
    for (int s = 0; s < max_samp; ++s) {
        const OccupationVector outcome = sampler.draw(rng);
        const Bitstring candidate = bit_flip(threshold_map(outcome), flip_probs, rng);
        const std::int64_t e = energy(graph, candidate, cost);
        sum += static_cast<double>(e);
        if (e < value.best_energy) {
            value.best_energy = e;
            value.best = candidate;
        }
        if (hooks.on_candidate) hooks.on_candidate(candidate, e);
    }
    value.mean_energy = sum / max_samp;
    if (hooks.on_objective_eval) hooks.on_objective_eval(value.mean_energy);
    return value;
}

SpsaStepResult spsa_step(const std::function<double(const std::vector<double>&)>& objective,
                         const std::vector<double>& params, std::size_t prob_offset,
                         const SpsaGains& gains, double learning_rate, int k,
                         SplitMix64& rng) {
    if (k < 0) throw std::invalid_argument("iteration index must be non-negative");
    if (prob_offset > params.size())
        throw std::invalid_argument("prob_offset exceeds parameter count");

    const double a_k = gain_a(gains, learning_rate, k);
    const double c_k = gain_c(gains, k);

    std::vector<double> delta(params.size());
    for (double& d : delta) d = static_cast<double>(rng.next_sign());

    std::vector<double> plus = params;
    std::vector<double> minus = params;
    for (std::size_t i = 0; i < params.size(); ++i) {
        plus[i] += c_k * delta[i];
        minus[i] -= c_k * delta[i];
    }

    SpsaStepResult result;
    result.f_plus = objective(plus);
    result.f_minus = objective(minus);
    if (!std::isfinite(result.f_plus) || !std::isfinite(result.f_minus))
        throw std::runtime_error("objective returned a non-finite value");

    // 1/delta_i == delta_i for Rademacher perturbations.
    const double scale = (result.f_plus - result.f_minus) / (2.0 * c_k);
    result.params = params;
    for (std::size_t i = 0; i < params.size(); ++i) {
        result.params[i] -= a_k * scale * delta[i];
        if (i >= prob_offset)
            result.params[i] = std::min(1.0, std::max(0.0, result.params[i]));
    }
    return result;
}

VQAResult train(const Graph& graph, const TBIConfig& config, const CostParams& cost,
                const VQAParams& params, SplitMix64& rng, const TrainHooks& hooks) {
    params.validate(config, graph.n());

    TbiSampler sampler(config, alternating_input(config.n_modes));
    const std::size_t prob_offset = params.thetas.size();
    std::vector<double> flat = params.thetas;
    flat.insert(flat.end(), params.flip_probs.begin(), params.flip_probs.end());

    VQAResult result;
    result.min_energy = std::numeric_limits<std::int64_t>::max();

    const auto started = std::chrono::steady_clock::now();
    auto objective = [&](const std::vector<double>& v) {
        const std::vector<double> thetas(v.begin(), v.begin() + prob_offset);
        const std::vector<double> probs(v.begin() + prob_offset, v.end());
        const ObjectiveValue value = evaluate_objective(sampler, graph, cost, thetas, probs,
                                                        params.max_samp, rng, hooks);
        if (value.best_energy < result.min_energy) {
            result.min_energy = value.best_energy;
            result.best_bitstring = value.best;
        }
        return value.mean_energy;
    };

    for (int k = 0; k < params.max_iter; ++k) {
        const SpsaStepResult step =
            spsa_step(objective, flat, prob_offset, params.spsa, params.learning_rate, k, rng);
        flat = step.params;

        IterationRecord record;
        record.iter = k;
        record.mean_energy = 0.5 * (step.f_plus + step.f_minus);
        record.min_energy = result.min_energy;
        record.best = to_string(result.best_bitstring);
        record.t_ns = std::chrono::duration_cast<std::chrono::nanoseconds>(
                          std::chrono::steady_clock::now() - started)
                          .count();
        result.log.push_back(record);

        if (params.early_stop &&
            detect_convergence(result.log, params.convergence_window).has_value())
            break;
    }

    result.converged_at = detect_convergence(result.log, params.convergence_window);
    result.found_dominating = is_dominating_set(graph, result.best_bitstring);
    return result;
}

std::optional<int> detect_convergence(const TrainingLog& log, int window) {
    if (window < 1) throw std::invalid_argument("window must be at least 1");
    if (log.empty()) return std::nullopt;

    // The running minimum is converged once its final improvement has held
    // for `window` further logged iterations.
    int last_improvement = 0;
    for (std::size_t t = 1; t < log.size(); ++t) {
        if (log[t].min_energy < log[t - 1].min_energy)
            last_improvement = static_cast<int>(t);
    }
    const int converged = last_improvement + window;
    if (converged <= static_cast<int>(log.size()) - 1) return converged;
    return std::nullopt;
}

std::string to_jsonl(const TrainingLog& log) {
    std::string out;
    for (const auto& record : log) {
        nlohmann::ordered_json j;
        j["iter"] = record.iter;
        j["mean_energy"] = record.mean_energy;
        j["min_energy"] = record.min_energy;
        j["best"] = record.best;
        j["t_ns"] = record.t_ns;
        out += j.dump();
        out += '\n';
    }
    return out;
}

}  // namespace tbi
