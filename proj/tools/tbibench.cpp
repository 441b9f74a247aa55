// Command-line front end: generate graphs, solve dominating-set instances,
// sample interferometers, train the variational optimizer, and run benchmark
// suites. Exit codes: 0 success, 1 usage error, 2 runtime error.

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "tbi/bench.hpp"
#include "tbi/bitstring.hpp"
#include "tbi/errors.hpp"
#include "tbi/fock.hpp"
#include "tbi/graph.hpp"
#include "tbi/qubo.hpp"
#include "tbi/rng.hpp"
#include "tbi/solvers.hpp"
#include "tbi/version.hpp"
#include "tbi/vqa.hpp"

namespace {

std::string read_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open " + path + " for writing");
    out << content;
    if (!out) throw std::runtime_error("write failed for " + path);
}

void write_output(const std::optional<std::string>& path, const std::string& content) {
    if (path)
        write_file(*path, content);
    else
        std::cout << content;
}

tbi::OccupationVector parse_occupation(const std::string& text) {
    tbi::OccupationVector occ;
    if (text.find(',') != std::string::npos) {
        std::istringstream in(text);
        std::string field;
        while (std::getline(in, field, ','))
            occ.push_back(std::stoi(field));
    } else {
        for (char c : text) {
            if (c < '0' || c > '9')
                throw std::invalid_argument("occupation must be digits or comma-separated");
            occ.push_back(c - '0');
        }
    }
    if (occ.empty()) throw std::invalid_argument("occupation must be non-empty");
    return occ;
}

std::string format_occupation(const tbi::OccupationVector& occ) {
    std::string out;
    for (std::size_t i = 0; i < occ.size(); ++i) {
        if (i) out += ',';
        out += std::to_string(occ[i]);
    }
    return out;
}

std::vector<double> parse_angle_text(const std::string& text) {
    std::vector<double> angles;
    std::string normalized = text;
    for (char& c : normalized) {
        if (c == ',') c = ' ';
    }
    std::istringstream in(normalized);
    double value = 0.0;
    while (in >> value) angles.push_back(value);
    if (!in.eof()) throw std::invalid_argument("malformed angle list");
    return angles;
}

tbi::TBIConfig make_config(int n_modes, const std::vector<int>& delays) {
    tbi::TBIConfig config;
    config.n_modes = n_modes;
    config.loop_delays = delays;
    for (int d : delays) {
        if (d < 1 || d >= n_modes)
            throw std::invalid_argument("loop delay must lie in [1, n_modes)");
        config.angles.emplace_back(static_cast<std::size_t>(n_modes - d), 0.0);
    }
    return config;
}

tbi::CostParams make_cost(std::int64_t penalty_scale, const std::string& variant) {
    tbi::CostParams cost;
    cost.penalty_scale = penalty_scale;
    cost.variant = variant == "total" ? tbi::DominationVariant::TotalDominating
                                      : tbi::DominationVariant::SelfDominating;
    return cost;
}

struct VqaFlags {
    std::vector<int> loops = {1};
    int max_iter = 250;
    int max_samp = 100;
    double learning_rate = 0.1;
    std::uint64_t seed = 0;
    bool early_stop = false;
    std::optional<std::string> log_path;
};

void add_vqa_flags(CLI::App* cmd, VqaFlags& flags) {
    cmd->add_option("--loops", flags.loops, "Loop delays, e.g. 1 or 1,1")
        ->delimiter(',');
    cmd->add_option("--max-iter", flags.max_iter, "Training iterations")
        ->check(CLI::PositiveNumber);
    cmd->add_option("--max-samp", flags.max_samp, "Samples per objective estimate")
        ->check(CLI::PositiveNumber);
    cmd->add_option("--learning-rate", flags.learning_rate, "SPSA learning rate")
        ->check(CLI::PositiveNumber);
    cmd->add_option("--seed", flags.seed, "RNG seed");
    cmd->add_flag("--early-stop", flags.early_stop, "Stop once converged");
    cmd->add_option("--log", flags.log_path, "Write the JSONL training log here");
}

std::string run_vqa(const tbi::Graph& graph, const tbi::CostParams& cost,
                    const VqaFlags& flags) {
    tbi::TBIConfig config = make_config(graph.n(), flags.loops);
    tbi::SplitMix64 rng(flags.seed);
    tbi::VQAParams params = tbi::random_vqa_params(config, graph.n(), rng);
    params.learning_rate = flags.learning_rate;
    params.max_iter = flags.max_iter;
    params.max_samp = flags.max_samp;
    params.early_stop = flags.early_stop;

    const tbi::VQAResult result = tbi::train(graph, config, cost, params, rng);
    if (flags.log_path) write_file(*flags.log_path, tbi::to_jsonl(result.log));

    std::ostringstream out;
    out << "method: tbi-vqa\n";
    out << "size: " << tbi::popcount(result.best_bitstring) << '\n';
    out << "set: " << tbi::to_string(result.best_bitstring) << '\n';
    out << "energy: " << result.min_energy << '\n';
    out << "dominating: " << (result.found_dominating ? "true" : "false") << '\n';
    out << "iterations: " << result.log.size() << '\n';
    if (result.converged_at)
        out << "converged_at: " << *result.converged_at << '\n';
    else
        out << "converged_at: none\n";
    return out.str();
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Time-bin interferometer sampling and dominating-set toolkit"};
    app.set_version_flag("--version", std::string("tbibench ") + tbi::kVersion);
    app.require_subcommand(1);

    // generate
    auto* generate = app.add_subcommand("generate", "Generate a G(n,p) random graph");
    int gen_n = 10;
    double gen_p = 0.5;
    std::uint64_t gen_seed = 0;
    std::optional<std::string> gen_out;
    generate->add_option("--n", gen_n, "Vertex count")->required()->check(CLI::PositiveNumber);
    generate->add_option("--p", gen_p, "Edge probability")
        ->required()
        ->check(CLI::Range(0.0, 1.0));
    generate->add_option("--seed", gen_seed, "RNG seed");
    generate->add_option("--out", gen_out, "Output file (default: standard output)");

    // solve
    auto* solve = app.add_subcommand("solve", "Solve minimum dominating set on a graph");
    std::string solve_method;
    std::string solve_graph;
    std::int64_t solve_penalty = 2;
    std::string solve_variant = "self";
    std::uint64_t solve_budget = 50'000'000;
    std::optional<std::string> solve_out;
    VqaFlags solve_vqa;
    solve->add_option("--method", solve_method, "Solver")
        ->required()
        ->check(CLI::IsMember({"exact", "greedy", "independent", "tbi-vqa"}));
    solve->add_option("--graph-file", solve_graph, "Edge-list file")->required();
    solve->add_option("--penalty-scale", solve_penalty, "Cost-function scale A")
        ->check(CLI::PositiveNumber);
    solve->add_option("--variant", solve_variant, "Domination variant")
        ->check(CLI::IsMember({"self", "total"}));
    solve->add_option("--bb-node-budget", solve_budget, "Branch-and-bound node budget");
    solve->add_option("--out", solve_out, "Output file (default: standard output)");
    add_vqa_flags(solve, solve_vqa);

    // sample
    auto* sample_cmd = app.add_subcommand("sample", "Draw interferometer samples");
    int sample_n = 2;
    std::vector<int> sample_loops = {1};
    std::string sample_angles;
    std::string sample_angles_file;
    std::string sample_input;
    int sample_count = 1;
    std::uint64_t sample_seed = 0;
    std::optional<std::string> sample_out;
    sample_cmd->add_option("--n", sample_n, "Mode count")->required()->check(CLI::PositiveNumber);
    sample_cmd->add_option("--loops", sample_loops, "Loop delays, e.g. 1 or 1,1")
        ->delimiter(',');
    auto* angle_opt =
        sample_cmd->add_option("--angles", sample_angles, "Comma-separated angles (radians)");
    sample_cmd->add_option("--angles-file", sample_angles_file, "File of angles (radians)")
        ->excludes(angle_opt);
    sample_cmd->add_option("--input", sample_input,
                           "Input occupation, digits or comma-separated (default alternating)");
    sample_cmd->add_option("--samples", sample_count, "Number of samples")
        ->check(CLI::PositiveNumber);
    sample_cmd->add_option("--seed", sample_seed, "RNG seed");
    sample_cmd->add_option("--out", sample_out, "Output file (default: standard output)");

    // train
    auto* train_cmd = app.add_subcommand("train", "Train the variational optimizer");
    std::string train_graph;
    std::int64_t train_penalty = 2;
    std::string train_variant = "self";
    std::optional<std::string> train_out;
    VqaFlags train_vqa;
    train_cmd->add_option("--graph-file", train_graph, "Edge-list file")->required();
    train_cmd->add_option("--penalty-scale", train_penalty, "Cost-function scale A")
        ->check(CLI::PositiveNumber);
    train_cmd->add_option("--variant", train_variant, "Domination variant")
        ->check(CLI::IsMember({"self", "total"}));
    train_cmd->add_option("--out", train_out, "Output file (default: standard output)");
    add_vqa_flags(train_cmd, train_vqa);

    // bench
    auto* bench_cmd = app.add_subcommand("bench", "Run a benchmark suite");
    std::string bench_config_path;
    std::string bench_out_dir = "bench-out";
    bench_cmd->add_option("--config", bench_config_path,
                          "Suite config JSON (default: built-in grid)");
    bench_cmd->add_option("--out-dir", bench_out_dir, "Directory for results");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);  // prints the diagnostic
        return 1;
    }

    try {
        if (generate->parsed()) {
            const tbi::Graph g = tbi::generate_gnp({gen_n, gen_p, gen_seed});
            write_output(gen_out, tbi::save_graph(g));
            return 0;
        }

        if (solve->parsed()) {
            const tbi::Graph g = tbi::load_graph_file(solve_graph);
            const tbi::CostParams cost = make_cost(solve_penalty, solve_variant);
            std::ostringstream out;
            if (solve_method == "tbi-vqa") {
                out << run_vqa(g, cost, solve_vqa);
            } else {
                tbi::Bitstring set;
                bool optimal = true;
                if (solve_method == "exact") {
                    const auto result = tbi::exact_min_dominating_set(g, solve_budget);
                    set = result.set;
                    optimal = result.optimal;
                } else if (solve_method == "greedy") {
                    set = tbi::greedy_dominating_set(g);
                } else {
                    set = tbi::independent_dominating_set(g);
                }
                out << "method: " << solve_method << '\n';
                out << "size: " << tbi::popcount(set) << '\n';
                out << "set: " << tbi::to_string(set) << '\n';
                out << "dominating: " << (tbi::is_dominating_set(g, set) ? "true" : "false")
                    << '\n';
                if (solve_method == "exact")
                    out << "optimal: " << (optimal ? "true" : "false") << '\n';
            }
            write_output(solve_out, out.str());
            return 0;
        }

        if (sample_cmd->parsed()) {
            tbi::TBIConfig config = make_config(sample_n, sample_loops);
            if (!sample_angles.empty())
                config.set_flat_angles(parse_angle_text(sample_angles));
            else if (!sample_angles_file.empty())
                config.set_flat_angles(parse_angle_text(read_file(sample_angles_file)));
            const tbi::OccupationVector input = sample_input.empty()
                                                    ? tbi::alternating_input(sample_n)
                                                    : parse_occupation(sample_input);
            tbi::TbiSampler sampler(config, input);
            tbi::SplitMix64 rng(sample_seed);
            std::ostringstream out;
            for (int s = 0; s < sample_count; ++s)
                out << format_occupation(sampler.draw(rng)) << '\n';
            write_output(sample_out, out.str());
            return 0;
        }

        if (train_cmd->parsed()) {
            const tbi::Graph g = tbi::load_graph_file(train_graph);
            const tbi::CostParams cost = make_cost(train_penalty, train_variant);
            write_output(train_out, run_vqa(g, cost, train_vqa));
            return 0;
        }

        if (bench_cmd->parsed()) {
            const tbi::BenchConfig config =
                bench_config_path.empty()
                    ? tbi::BenchConfig{}
                    : tbi::BenchConfig::from_json(read_file(bench_config_path));
            config.validate();
            const auto specs = tbi::expand_grid(config);
            const auto records = tbi::run_suite(specs, config.parallelism);
            const auto summary = tbi::summarize(records);
            tbi::emit_plot_data(config, records, summary, bench_out_dir);
            std::cout << tbi::summary_to_csv(summary);
            std::cerr << "wrote " << records.size() << " records to " << bench_out_dir
                      << '\n';
            return 0;
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }

    return 0;
}
