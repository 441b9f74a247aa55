#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdint>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "tbi/graph.hpp"
#include "tbi/qubo.hpp"
#include "tbi/rng.hpp"
#include "tbi/vqa.hpp"
#include "test_support.hpp"

using namespace tbi;
using namespace tbi::test;

namespace {

TBIConfig p4_config(double theta = 0.0) {
    TBIConfig config;
    config.n_modes = 4;
    config.loop_delays = {1};
    config.angles = {{theta, theta, theta}};
    return config;
}

TrainingLog log_with_min_energies(const std::vector<std::int64_t>& mins) {
    TrainingLog log;
    for (std::size_t i = 0; i < mins.size(); ++i) {
        IterationRecord record;
        record.iter = static_cast<int>(i);
        record.mean_energy = static_cast<double>(mins[i]);
        record.min_energy = mins[i];
        log.push_back(record);
    }
    return log;
}

}  // namespace

TEST_CASE("bit_flip honors the per-mode probabilities") {
    SplitMix64 rng(1);
    const Bitstring bits = bitstring_from_string("0110");

    CHECK(bit_flip(bits, {0.0, 0.0, 0.0, 0.0}, rng) == bits);
    CHECK(to_string(bit_flip(bits, {1.0, 1.0, 1.0, 1.0}, rng)) == "1001");
    CHECK(to_string(bit_flip(bits, {1.0, 0.0, 0.0, 1.0}, rng)) == "1111");
    CHECK_THROWS_AS(bit_flip(bits, {0.5}, rng), std::invalid_argument);

    // Flip rate over many trials stays inside a generous binomial envelope.
    const int trials = 20000;
    int flipped = 0;
    for (int t = 0; t < trials; ++t) {
        const Bitstring out = bit_flip(bits, {0.3, 0.3, 0.3, 0.3}, rng);
        for (std::size_t i = 0; i < bits.size(); ++i) flipped += out[i] != bits[i];
    }
    const double rate = static_cast<double>(flipped) / (4.0 * trials);
    CHECK(rate > 0.28);
    CHECK(rate < 0.32);
}

TEST_CASE("random parameters live in the documented ranges") {
    SplitMix64 rng(2);
    const TBIConfig config = p4_config();
    for (int trial = 0; trial < 50; ++trial) {
        const VQAParams params = random_vqa_params(config, 4, rng);
        REQUIRE(params.thetas.size() == 3);
        REQUIRE(params.flip_probs.size() == 4);
        for (double theta : params.thetas) {
            CHECK(theta >= 0.0);
            CHECK(theta < kTestPi);
        }
        for (double p : params.flip_probs) {
            CHECK(p >= 0.0);
            CHECK(p < 0.5);
        }
        CHECK_NOTHROW(params.validate(config, 4));
    }
}

TEST_CASE("parameter validation rejects inconsistent setups") {
    SplitMix64 rng(3);
    const TBIConfig config = p4_config();
    const VQAParams good = random_vqa_params(config, 4, rng);
    CHECK_THROWS_AS(good.validate(config, 5), std::invalid_argument);

    VQAParams bad = good;
    bad.thetas.pop_back();
    CHECK_THROWS_AS(bad.validate(config, 4), std::invalid_argument);
    bad = good;
    bad.flip_probs.push_back(0.1);
    CHECK_THROWS_AS(bad.validate(config, 4), std::invalid_argument);
    bad = good;
    bad.flip_probs[0] = 1.5;
    CHECK_THROWS_AS(bad.validate(config, 4), std::invalid_argument);
    bad = good;
    bad.max_iter = 0;
    CHECK_THROWS_AS(bad.validate(config, 4), std::invalid_argument);
    bad = good;
    bad.max_samp = 0;
    CHECK_THROWS_AS(bad.validate(config, 4), std::invalid_argument);
    bad = good;
    bad.learning_rate = 0.0;
    CHECK_THROWS_AS(bad.validate(config, 4), std::invalid_argument);
    bad = good;
    bad.convergence_window = 0;
    CHECK_THROWS_AS(bad.validate(config, 4), std::invalid_argument);
}

TEST_CASE("objective on a frozen circuit is exact") {
    const Graph p4(4, {{0, 1}, {1, 2}, {2, 3}});
    const TBIConfig config = p4_config();
    TbiSampler sampler(config, alternating_input(4));
    SplitMix64 rng(4);

    int candidates_seen = 0;
    int evals_seen = 0;
    double reported_mean = -1.0;
    TrainHooks hooks;
    hooks.on_candidate = [&](const Bitstring& bits, std::int64_t e) {
        ++candidates_seen;
        CHECK(to_string(bits) == "1010");
        CHECK(e == 2);
    };
    hooks.on_objective_eval = [&](double mean) {
        ++evals_seen;
        reported_mean = mean;
    };

    // Identity circuit + zero flips: every candidate is the thresholded input.
    const ObjectiveValue value =
        evaluate_objective(sampler, p4, CostParams{}, {0.0, 0.0, 0.0},
                           {0.0, 0.0, 0.0, 0.0}, 25, rng, hooks);
    CHECK(value.mean_energy == 2.0);
    CHECK(value.best_energy == 2);
    CHECK(to_string(value.best) == "1010");
    CHECK(candidates_seen == 25);
    CHECK(evals_seen == 1);
    CHECK(reported_mean == 2.0);
}

TEST_CASE("objective statistics are consistent with the candidate stream") {
    const Graph g = generate_gnp({5, 0.4, 8});
    TBIConfig config;
    config.n_modes = 5;
    config.loop_delays = {1};
    config.angles = {{0.9, 0.4, 1.3, 0.7}};
    TbiSampler sampler(config, alternating_input(5));
    SplitMix64 rng(5);

    double sum = 0.0;
    std::int64_t best_seen = std::numeric_limits<std::int64_t>::max();
    int count = 0;
    TrainHooks hooks;
    hooks.on_candidate = [&](const Bitstring& bits, std::int64_t e) {
        CHECK(energy(g, bits, CostParams{}) == e);
        sum += static_cast<double>(e);
        best_seen = std::min(best_seen, e);
        ++count;
    };

    const ObjectiveValue value =
        evaluate_objective(sampler, g, CostParams{}, config.flat_angles(),
                           {0.2, 0.1, 0.3, 0.25, 0.15}, 200, rng, hooks);
    CHECK(count == 200);
    CHECK(std::abs(value.mean_energy - sum / 200.0) < 1e-9);
    CHECK(value.best_energy == best_seen);
    CHECK(energy(g, value.best, CostParams{}) == best_seen);
}

TEST_CASE("spsa_step evaluates exactly two symmetric points") {
    SplitMix64 rng(6);
    const std::vector<double> params = {0.4, 1.2, 0.8};
    const SpsaGains gains;

    std::vector<std::vector<double>> eval_points;
    auto objective = [&](const std::vector<double>& v) {
        eval_points.push_back(v);
        return eval_points.size() == 1 ? 1.0 : 0.0;
    };

    const int k = 0;
    const SpsaStepResult step = spsa_step(objective, params, params.size(), gains, 0.1, k, rng);
    REQUIRE(eval_points.size() == 2);
    CHECK(step.f_plus == 1.0);
    CHECK(step.f_minus == 0.0);

    const double c_k = gains.c;  // k = 0: c / 1^gamma
    std::vector<double> delta(params.size());
    for (std::size_t i = 0; i < params.size(); ++i) {
        CHECK(std::abs(eval_points[0][i] + eval_points[1][i] - 2.0 * params[i]) < 1e-12);
        delta[i] = (eval_points[0][i] - params[i]) / c_k;
        CHECK(std::abs(std::abs(delta[i]) - 1.0) < 1e-12);
    }

    // With f_plus - f_minus = 1 the update is a_0 / (2 c_0) along delta.
    const double a_k = 0.1 / std::pow(k + 1 + gains.stability, gains.alpha);
    for (std::size_t i = 0; i < params.size(); ++i) {
        const double expected = params[i] - a_k * (1.0 / (2.0 * c_k)) * delta[i];
        CHECK(std::abs(step.params[i] - expected) < 1e-12);
    }
}

TEST_CASE("spsa_step gain sequences decay as documented") {
    SplitMix64 rng(7);
    const std::vector<double> params = {0.0};
    const SpsaGains gains;
    for (int k : {0, 1, 5, 40}) {
        std::vector<std::vector<double>> eval_points;
        auto objective = [&](const std::vector<double>& v) {
            eval_points.push_back(v);
            return 0.0;
        };
        spsa_step(objective, params, 1, gains, 0.1, k, rng);
        const double expected_c = gains.c / std::pow(k + 1, gains.gamma);
        CHECK(std::abs(std::abs(eval_points[0][0]) - expected_c) < 1e-12);
    }
    CHECK_THROWS_AS(
        spsa_step([](const std::vector<double>&) { return 0.0; }, params, 1, gains, 0.1,
                  -1, rng),
        std::invalid_argument);
    CHECK_THROWS_AS(
        spsa_step([](const std::vector<double>&) { return 0.0; }, params, 2, gains, 0.1,
                  0, rng),
        std::invalid_argument);
    CHECK_THROWS_AS(
        spsa_step(
            [](const std::vector<double>&) {
                return std::numeric_limits<double>::quiet_NaN();
            },
            params, 1, gains, 0.1, 0, rng),
        std::runtime_error);
}

TEST_CASE("spsa_step clamps only the probability block") {
    SplitMix64 rng(8);
    const std::vector<double> params = {0.5, 0.9};
    bool first = true;
    auto objective = [&](const std::vector<double>&) {
        const double value = first ? 0.0 : 10.0;
        first = false;
        return value;
    };
    const SpsaStepResult step = spsa_step(objective, params, 1, SpsaGains{}, 0.1, 0, rng);
    // The step is ~1.18 in magnitude; the theta coordinate keeps it while the
    // probability coordinate is projected back into [0, 1].
    CHECK(std::abs(std::abs(step.params[0] - 0.5) - std::abs(step.params[1] - 0.9)) >
          0.1);
    CHECK(step.params[1] >= 0.0);
    CHECK(step.params[1] <= 1.0);
    CHECK((step.params[0] < 0.0 || step.params[0] > 1.0));
}

TEST_CASE("spsa_step drives a quadratic toward its minimum") {
    SplitMix64 rng(9);
    auto objective = [](const std::vector<double>& v) {
        double sum = 0.0;
        for (double x : v) sum += x * x;
        return sum;
    };
    std::vector<double> params = {1.0, -0.5, 0.3};
    const double initial = objective(params);
    for (int k = 0; k < 300; ++k)
        params = spsa_step(objective, params, params.size(), SpsaGains{}, 0.1, k, rng).params;
    CHECK(objective(params) < 0.1 * initial);
}

TEST_CASE("convergence detection follows the running minimum") {
    CHECK_FALSE(detect_convergence({}, 50).has_value());
    CHECK_THROWS_AS(detect_convergence({}, 0), std::invalid_argument);

    std::vector<std::int64_t> mins(200, 100);
    for (std::size_t i = 40; i < 200; ++i) mins[i] = 50;
    for (std::size_t i = 120; i < 200; ++i) mins[i] = 20;
    const TrainingLog log = log_with_min_energies(mins);
    CHECK(detect_convergence(log, 50) == 170);
    CHECK(detect_convergence(log, 79) == 199);
    CHECK_FALSE(detect_convergence(log, 80).has_value());

    // Flat log: the initial value counts as the last improvement.
    const TrainingLog flat = log_with_min_energies(std::vector<std::int64_t>(60, 7));
    CHECK(detect_convergence(flat, 50) == 50);
    CHECK(detect_convergence(flat, 59) == 59);
    CHECK_FALSE(detect_convergence(flat, 60).has_value());

    // Improvement on the final record can never have held for a window.
    std::vector<std::int64_t> late(10, 9);
    late[9] = 1;
    CHECK_FALSE(detect_convergence(log_with_min_energies(late), 1).has_value());
    std::vector<std::int64_t> just(10, 9);
    just[8] = 1;
    CHECK(detect_convergence(log_with_min_energies(just), 1) == 9);
}

TEST_CASE("training solves a small instance end to end") {
    const Graph p4(4, {{0, 1}, {1, 2}, {2, 3}});
    const TBIConfig config = p4_config(0.4);
    SplitMix64 rng(10);
    VQAParams params = random_vqa_params(config, 4, rng);
    params.max_iter = 60;
    params.max_samp = 30;

    int evals = 0;
    std::vector<double> eval_means;
    TrainHooks hooks;
    hooks.on_objective_eval = [&](double mean) {
        ++evals;
        eval_means.push_back(mean);
    };

    const VQAResult result = train(p4, config, CostParams{}, params, rng, hooks);
    CHECK(result.found_dominating);
    CHECK(result.min_energy == 2);
    CHECK(popcount(result.best_bitstring) == 2);
    CHECK(is_dominating_set(p4, result.best_bitstring));

    REQUIRE(result.log.size() == 60);
    CHECK(evals == 120);  // exactly two objective estimates per iteration
    for (std::size_t i = 0; i < result.log.size(); ++i) {
        const IterationRecord& record = result.log[i];
        CHECK(record.iter == static_cast<int>(i));
        CHECK(std::abs(record.mean_energy -
                       0.5 * (eval_means[2 * i] + eval_means[2 * i + 1])) < 1e-12);
        if (i > 0) {
            CHECK(record.min_energy <= result.log[i - 1].min_energy);
            CHECK(record.t_ns >= result.log[i - 1].t_ns);
        }
    }
    CHECK(result.log.back().min_energy == result.min_energy);
    CHECK(result.log.back().best == to_string(result.best_bitstring));
    CHECK(result.converged_at == detect_convergence(result.log, params.convergence_window));
}

TEST_CASE("training is reproducible for a fixed seed") {
    const Graph g = generate_gnp({5, 0.5, 12});
    TBIConfig config;
    config.n_modes = 5;
    config.loop_delays = {1};
    config.angles = {{0.0, 0.0, 0.0, 0.0}};
    SplitMix64 seed_rng(13);
    VQAParams params = random_vqa_params(config, 5, seed_rng);
    params.max_iter = 25;
    params.max_samp = 20;

    SplitMix64 rng_a(77);
    SplitMix64 rng_b(77);
    const VQAResult a = train(g, config, CostParams{}, params, rng_a);
    const VQAResult b = train(g, config, CostParams{}, params, rng_b);
    CHECK(a.best_bitstring == b.best_bitstring);
    CHECK(a.min_energy == b.min_energy);
    REQUIRE(a.log.size() == b.log.size());
    for (std::size_t i = 0; i < a.log.size(); ++i) {
        CHECK(a.log[i].mean_energy == b.log[i].mean_energy);
        CHECK(a.log[i].min_energy == b.log[i].min_energy);
        CHECK(a.log[i].best == b.log[i].best);
    }
}

TEST_CASE("early stop cuts training at the convergence point") {
    const Graph k4(4, {{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}});
    const TBIConfig config = p4_config(0.7);
    SplitMix64 rng(14);
    VQAParams params = random_vqa_params(config, 4, rng);
    params.max_iter = 200;
    params.max_samp = 20;
    params.early_stop = true;
    params.convergence_window = 8;

    const VQAResult result = train(k4, config, CostParams{}, params, rng);
    REQUIRE(result.converged_at.has_value());
    CHECK(result.log.size() == static_cast<std::size_t>(*result.converged_at) + 1);
    CHECK(result.log.size() < 200);
    CHECK(result.min_energy == 1);  // any single vertex dominates K4
}

TEST_CASE("training rejects mismatched graph and circuit sizes") {
    const Graph p4(4, {{0, 1}, {1, 2}, {2, 3}});
    TBIConfig config;
    config.n_modes = 5;
    config.loop_delays = {1};
    config.angles = {{0.1, 0.2, 0.3, 0.4}};
    SplitMix64 rng(15);
    const VQAParams params = random_vqa_params(config, 5, rng);
    CHECK_THROWS_AS(train(p4, config, CostParams{}, params, rng), std::invalid_argument);
}

TEST_CASE("training log serializes to one JSON object per line") {
    TrainingLog log = log_with_min_energies({9, 5, 5});
    log[1].best = "0110";
    log[2].t_ns = 1234;
    const std::string jsonl = to_jsonl(log);

    std::istringstream stream(jsonl);
    std::string line;
    std::vector<nlohmann::json> rows;
    while (std::getline(stream, line)) rows.push_back(nlohmann::json::parse(line));

    REQUIRE(rows.size() == 3);
    for (std::size_t i = 0; i < rows.size(); ++i) {
        CHECK(rows[i].at("iter") == static_cast<int>(i));
        CHECK(rows[i].contains("mean_energy"));
        CHECK(rows[i].contains("min_energy"));
        CHECK(rows[i].contains("best"));
        CHECK(rows[i].contains("t_ns"));
    }
    CHECK(rows[1].at("best") == "0110");
    CHECK(rows[2].at("t_ns") == 1234);
}
