#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "tbi/fock.hpp"
#include "tbi/graph.hpp"
#include "tbi/qubo.hpp"
#include "tbi/vqa.hpp"

namespace tbi {

enum class Method { Exact, Greedy, Independent, TbiVqa };

std::string method_name(Method m);
Method method_from_name(const std::string& name);  // throws std::invalid_argument

// One benchmark run: one method on one generated graph.
struct RunSpec {
    Method method = Method::Greedy;
    GnpSpec gnp;
    CostParams cost;
    TBIConfig tbi;      // used by the VQA method only
    VQAParams vqa;      // angles/probs drawn per run from run_seed
    std::uint64_t run_seed = 0;  // distinct from gnp.seed
};

struct BenchmarkRecord {
    std::string method;
    int n = 0;
    double p = 0.0;
    std::uint64_t graph_seed = 0;
    std::uint64_t run_seed = 0;
    bool found_dominating = false;
    int set_size = 0;
    // VQA metrics; zero / empty when not applicable.
    std::int64_t total_train_time_ns = 0;
    std::int64_t time_per_update_ns = 0;
    std::optional<int> iterations_to_converge;
    std::optional<std::int64_t> time_to_converge_ns;
    // Classical methods only.
    std::int64_t solver_time_ns = 0;
    // Non-empty when the run failed; the suite keeps going.
    std::string error;
};

// Suite configuration, loadable from JSON:
// {"methods": [...], "n": [...], "p": [...], "graph_seeds": [...],
//  "vqa": {...}, "parallelism": int}. Missing fields take the defaults below.
struct BenchConfig {
    std::vector<Method> methods = {Method::Exact, Method::Greedy, Method::Independent,
                                   Method::TbiVqa};
    std::vector<int> n_values = {10, 20, 30};
    std::vector<double> p_values = {0.05};
    std::vector<std::uint64_t> graph_seeds = {1, 2, 3};
    CostParams cost;
    std::vector<int> loop_delays = {1};
    int max_iter = 250;
    int max_samp = 100;
    double learning_rate = 0.1;
    int parallelism = 1;
    // Exact and VQA runs beyond this size are rejected up front; raise it
    // deliberately for long experiments.
    int n_cap = 250;

    void validate() const;  // throws std::invalid_argument
    static BenchConfig from_json(const std::string& text);
    std::string to_json() const;
};

// Expands the grid in method -> n -> p -> graph_seed order, one RunSpec per
// combination. run_seed is derived from (graph_seed, method, n, p) so reps
// stay distinct yet reproducible.
std::vector<RunSpec> expand_grid(const BenchConfig& config);

// Executes one spec, timing only the algorithm itself on a monotonic clock.
BenchmarkRecord run_one(const RunSpec& spec);

// Executes all specs, spreading them over `parallelism` worker threads.
// Records come back in spec order regardless of scheduling; per-run failures
// are captured in the record's error field.
std::vector<BenchmarkRecord> run_suite(const std::vector<RunSpec>& specs, int parallelism = 1);

// Per-(method, n, p) aggregate of the record list, in first-seen group order.
struct SummaryRow {
    std::string method;
    int n = 0;
    double p = 0.0;
    double size_mean = 0.0;
    int size_min = 0;
    int size_max = 0;
    // Mean of solver_time_ns (classical) or total_train_time_ns (VQA).
    double time_ns_mean = 0.0;
};

// Failed records are skipped; a group left empty is dropped with a warning on
// standard error.
std::vector<SummaryRow> summarize(const std::vector<BenchmarkRecord>& records);

// CSV serialization. Columns are fixed; see the .cpp for the exact header.
std::string records_to_csv(const std::vector<BenchmarkRecord>& records);
std::string summary_to_csv(const std::vector<SummaryRow>& summary);
std::vector<SummaryRow> summary_from_csv(const std::string& text);  // round-trip aid

// Writes records.csv, size_vs_n.csv, runtime_vs_n.csv, and metadata.json
// (version, config hash, clock info) into out_dir.
void emit_plot_data(const BenchConfig& config, const std::vector<BenchmarkRecord>& records,
                    const std::vector<SummaryRow>& summary, const std::string& out_dir);

// Median steady_clock read-to-read gap; recorded in metadata so absurd
// timer overhead shows up in the output rather than silently skewing runs.
std::int64_t timing_overhead_ns();

}  // namespace tbi
