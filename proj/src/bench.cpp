#include "tbi/bench.hpp"

#include <algorithm>
#include <array>
#include <atomic>
#include <charconv>
#include <chrono>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <set>
#include <sstream>
#include <stdexcept>
#include <thread>

#include <json.hpp>

#include "tbi/errors.hpp"
#include "tbi/solvers.hpp"
#include "tbi/version.hpp"

namespace tbi {

namespace {

std::int64_t elapsed_ns(std::chrono::steady_clock::time_point t0,
                        std::chrono::steady_clock::time_point t1) {
    return std::chrono::duration_cast<std::chrono::nanoseconds>(t1 - t0).count();
}

std::uint64_t mix_seed(std::uint64_t a, std::uint64_t b) {
    SplitMix64 rng(a ^ (b + 0x9e3779b97f4a7c15ULL + (a << 6) + (a >> 2)));
    return rng.next_u64();
}

// Shortest round-trip decimal form.
std::string format_double(double value) {
    std::array<char, 64> buf{};
    auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), value);
    if (ec != std::errc()) throw InternalError("double formatting failed");
    return std::string(buf.data(), ptr);
}

double parse_double(const std::string& text) {
    double value = 0.0;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc() || ptr != text.data() + text.size())
        throw std::invalid_argument("bad number in CSV: " + text);
    return value;
}

std::string csv_escape(const std::string& text) {
    if (text.find_first_of(",\"\n") == std::string::npos) return text;
    std::string out = "\"";
    for (char c : text) {
        if (c == '"') out += '"';
        out += c;
    }
    out += '"';
    return out;
}

std::uint64_t fnv1a(const std::string& text) {
    std::uint64_t h = 1469598103934665603ULL;
    for (unsigned char c : text) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    return h;
}

std::string hex64(std::uint64_t value) {
    static const char* digits = "0123456789abcdef";
    std::string out(16, '0');
    for (int i = 15; i >= 0; --i) {
        out[static_cast<std::size_t>(i)] = digits[value & 0xf];
        value >>= 4;
    }
    return out;
}

}  // namespace

std::string method_name(Method m) {
    switch (m) {
        case Method::Exact: return "exact";
        case Method::Greedy: return "greedy";
        case Method::Independent: return "independent";
        case Method::TbiVqa: return "tbi-vqa";
    }
    throw InternalError("unknown method");
}

Method method_from_name(const std::string& name) {
    if (name == "exact") return Method::Exact;
    if (name == "greedy") return Method::Greedy;
    if (name == "independent") return Method::Independent;
    if (name == "tbi-vqa") return Method::TbiVqa;
    throw std::invalid_argument("unknown method \"" + name +
                                "\" (expected exact, greedy, independent, or tbi-vqa)");
}

void BenchConfig::validate() const {
    if (methods.empty()) throw std::invalid_argument("methods must be non-empty");
    if (n_values.empty()) throw std::invalid_argument("n must be non-empty");
    if (p_values.empty()) throw std::invalid_argument("p must be non-empty");
    if (graph_seeds.empty()) throw std::invalid_argument("graph_seeds must be non-empty");
    for (int n : n_values) {
        if (n < 1) throw std::invalid_argument("n must be at least 1");
    }
    for (double p : p_values) {
        if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("p must lie in [0,1]");
    }
    if (std::set<std::uint64_t>(graph_seeds.begin(), graph_seeds.end()).size() !=
        graph_seeds.size())
        throw std::invalid_argument("graph_seeds must be distinct");
    if (parallelism < 1) throw std::invalid_argument("parallelism must be at least 1");
    if (max_iter < 1) throw std::invalid_argument("max_iter must be at least 1");
    if (max_samp < 1) throw std::invalid_argument("max_samp must be at least 1");
    if (!(learning_rate > 0.0)) throw std::invalid_argument("learning_rate must be positive");
    if (loop_delays.empty()) throw std::invalid_argument("loop_delays must be non-empty");
    const int min_n = *std::min_element(n_values.begin(), n_values.end());
    for (int d : loop_delays) {
        if (d < 1 || d >= min_n)
            throw std::invalid_argument("loop delay " + std::to_string(d) +
                                        " invalid for the smallest n in the grid");
    }
    const bool capped = std::any_of(methods.begin(), methods.end(), [](Method m) {
        return m == Method::Exact || m == Method::TbiVqa;
    });
    if (capped) {
        for (int n : n_values) {
            if (n > n_cap)
                throw std::invalid_argument(
                    "n = " + std::to_string(n) + " exceeds the cap " + std::to_string(n_cap) +
                    " for exact/tbi-vqa runs; raise n_cap to override");
        }
    }
}

BenchConfig BenchConfig::from_json(const std::string& text) {
    const auto j = nlohmann::json::parse(text);
    if (!j.is_object()) throw std::invalid_argument("bench config must be a JSON object");

    static const std::set<std::string> known = {"methods", "n",           "p",
                                                "graph_seeds", "vqa",     "parallelism",
                                                "n_cap",       "penalty_scale"};
    for (const auto& [key, value] : j.items()) {
        if (!known.count(key)) throw std::invalid_argument("unknown config key \"" + key + "\"");
    }

    BenchConfig config;
    if (j.contains("methods")) {
        config.methods.clear();
        for (const auto& name : j.at("methods"))
            config.methods.push_back(method_from_name(name.get<std::string>()));
    }
    if (j.contains("n")) config.n_values = j.at("n").get<std::vector<int>>();
    if (j.contains("p")) config.p_values = j.at("p").get<std::vector<double>>();
    if (j.contains("graph_seeds"))
        config.graph_seeds = j.at("graph_seeds").get<std::vector<std::uint64_t>>();
    if (j.contains("parallelism")) config.parallelism = j.at("parallelism").get<int>();
    if (j.contains("n_cap")) config.n_cap = j.at("n_cap").get<int>();
    if (j.contains("penalty_scale"))
        config.cost.penalty_scale = j.at("penalty_scale").get<std::int64_t>();
    if (j.contains("vqa")) {
        const auto& v = j.at("vqa");
        static const std::set<std::string> vqa_known = {"max_iter", "max_samp",
                                                        "learning_rate", "loop_delays"};
        for (const auto& [key, value] : v.items()) {
            if (!vqa_known.count(key))
                throw std::invalid_argument("unknown vqa config key \"" + key + "\"");
        }
        if (v.contains("max_iter")) config.max_iter = v.at("max_iter").get<int>();
        if (v.contains("max_samp")) config.max_samp = v.at("max_samp").get<int>();
        if (v.contains("learning_rate"))
            config.learning_rate = v.at("learning_rate").get<double>();
        if (v.contains("loop_delays"))
            config.loop_delays = v.at("loop_delays").get<std::vector<int>>();
    }
    config.validate();
    return config;
}

std::string BenchConfig::to_json() const {
    nlohmann::ordered_json j;
    j["methods"] = nlohmann::json::array();
    for (Method m : methods) j["methods"].push_back(method_name(m));
    j["n"] = n_values;
    j["p"] = p_values;
    j["graph_seeds"] = graph_seeds;
    j["penalty_scale"] = cost.penalty_scale;
    j["vqa"] = {{"max_iter", max_iter},
                {"max_samp", max_samp},
                {"learning_rate", learning_rate},
                {"loop_delays", loop_delays}};
    j["parallelism"] = parallelism;
    j["n_cap"] = n_cap;
    return j.dump(2);
}

std::vector<RunSpec> expand_grid(const BenchConfig& config) {
    config.validate();
    std::vector<RunSpec> specs;
    for (Method method : config.methods) {
        const auto method_idx = static_cast<std::uint64_t>(method);
        for (int n : config.n_values) {
            for (double p : config.p_values) {
                for (std::uint64_t seed : config.graph_seeds) {
                    RunSpec spec;
                    spec.method = method;
                    spec.gnp = GnpSpec{n, p, seed};
                    spec.cost = config.cost;
                    spec.tbi.n_modes = n;
                    spec.tbi.loop_delays = config.loop_delays;
                    for (int d : config.loop_delays)
                        spec.tbi.angles.emplace_back(static_cast<std::size_t>(n - d), 0.0);
                    spec.vqa.learning_rate = config.learning_rate;
                    spec.vqa.max_iter = config.max_iter;
                    spec.vqa.max_samp = config.max_samp;
                    std::uint64_t mixed = mix_seed(seed, method_idx + 1);
                    mixed = mix_seed(mixed, static_cast<std::uint64_t>(n));
                    std::uint64_t p_bits = 0;
                    static_assert(sizeof(p_bits) == sizeof(p));
                    std::memcpy(&p_bits, &p, sizeof(p));
                    spec.run_seed = mix_seed(mixed, p_bits);
                    specs.push_back(std::move(spec));
                }
            }
        }
    }
    return specs;
}

BenchmarkRecord run_one(const RunSpec& spec) {
    BenchmarkRecord record;
    record.method = method_name(spec.method);
    record.n = spec.gnp.n;
    record.p = spec.gnp.p;
    record.graph_seed = spec.gnp.seed;
    record.run_seed = spec.run_seed;

    try {
        const Graph graph = generate_gnp(spec.gnp);
        if (spec.method == Method::TbiVqa) {
            SplitMix64 rng(spec.run_seed);
            VQAParams params = random_vqa_params(spec.tbi, graph.n(), rng);
            params.learning_rate = spec.vqa.learning_rate;
            params.max_iter = spec.vqa.max_iter;
            params.max_samp = spec.vqa.max_samp;
            params.spsa = spec.vqa.spsa;
            params.early_stop = spec.vqa.early_stop;
            params.convergence_window = spec.vqa.convergence_window;

            const auto t0 = std::chrono::steady_clock::now();
            const VQAResult result = train(graph, spec.tbi, spec.cost, params, rng);
            const auto t1 = std::chrono::steady_clock::now();

            record.total_train_time_ns = elapsed_ns(t0, t1);
            const auto iterations = static_cast<std::int64_t>(result.log.size());
            record.time_per_update_ns =
                iterations > 0 ? record.total_train_time_ns / iterations : 0;
            record.iterations_to_converge = result.converged_at;
            if (result.converged_at)
                record.time_to_converge_ns = *result.converged_at * record.time_per_update_ns;
            record.found_dominating = result.found_dominating;
            record.set_size = popcount(result.best_bitstring);
        } else {
            Bitstring set;
            const auto t0 = std::chrono::steady_clock::now();
            switch (spec.method) {
                case Method::Exact: set = exact_min_dominating_set(graph).set; break;
                case Method::Greedy: set = greedy_dominating_set(graph); break;
                case Method::Independent: set = independent_dominating_set(graph); break;
                case Method::TbiVqa: break;  // handled above
            }
            const auto t1 = std::chrono::steady_clock::now();
            record.solver_time_ns = elapsed_ns(t0, t1);
            record.set_size = popcount(set);
            record.found_dominating = is_dominating_set(graph, set);
        }
    } catch (const std::exception& e) {
        record.error = e.what();
    }
    return record;
}

std::vector<BenchmarkRecord> run_suite(const std::vector<RunSpec>& specs, int parallelism) {
    if (parallelism < 1) throw std::invalid_argument("parallelism must be at least 1");
    std::vector<BenchmarkRecord> records(specs.size());
    if (specs.empty()) return records;

    const int workers = std::min<int>(parallelism, static_cast<int>(specs.size()));
    if (workers == 1) {
        for (std::size_t i = 0; i < specs.size(); ++i) records[i] = run_one(specs[i]);
        return records;
    }

    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= specs.size()) return;
            records[i] = run_one(specs[i]);
        }
    };
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(workers));
    for (int w = 0; w < workers; ++w) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
    return records;
}

std::vector<SummaryRow> summarize(const std::vector<BenchmarkRecord>& records) {
    struct Group {
        SummaryRow row;
        double size_sum = 0.0;
        double time_sum = 0.0;
        int count = 0;
    };
    std::vector<Group> groups;

    auto find_group = [&](const BenchmarkRecord& r) -> Group& {
        for (auto& g : groups) {
            if (g.row.method == r.method && g.row.n == r.n && g.row.p == r.p) return g;
        }
        groups.emplace_back();
        groups.back().row.method = r.method;
        groups.back().row.n = r.n;
        groups.back().row.p = r.p;
        return groups.back();
    };

    for (const auto& record : records) {
        if (!record.error.empty()) {
            find_group(record);  // keep the group so its omission is reported
            std::cerr << "warning: skipping failed run (" << record.method << ", n="
                      << record.n << ", p=" << record.p << "): " << record.error << '\n';
            continue;
        }
        Group& g = find_group(record);
        if (g.count == 0) {
            g.row.size_min = record.set_size;
            g.row.size_max = record.set_size;
        } else {
            g.row.size_min = std::min(g.row.size_min, record.set_size);
            g.row.size_max = std::max(g.row.size_max, record.set_size);
        }
        g.size_sum += record.set_size;
        // Exactly one of the two is populated, depending on the method.
        g.time_sum += static_cast<double>(record.solver_time_ns + record.total_train_time_ns);
        ++g.count;
    }

    std::vector<SummaryRow> rows;
    for (auto& g : groups) {
        if (g.count == 0) {
            std::cerr << "warning: group (" << g.row.method << ", n=" << g.row.n
                      << ", p=" << g.row.p << ") has no successful runs; omitted\n";
            continue;
        }
        g.row.size_mean = g.size_sum / g.count;
        g.row.time_ns_mean = g.time_sum / g.count;
        rows.push_back(g.row);
    }
    return rows;
}

std::string records_to_csv(const std::vector<BenchmarkRecord>& records) {
    std::ostringstream out;
    out << "method,n,p,graph_seed,run_seed,found_dominating,set_size,total_train_time_ns,"
           "time_per_update_ns,iterations_to_converge,time_to_converge_ns,solver_time_ns,"
           "error\n";
    for (const auto& r : records) {
        out << r.method << ',' << r.n << ',' << format_double(r.p) << ',' << r.graph_seed
            << ',' << r.run_seed << ',' << (r.found_dominating ? 1 : 0) << ',' << r.set_size
            << ',' << r.total_train_time_ns << ',' << r.time_per_update_ns << ',';
        if (r.iterations_to_converge) out << *r.iterations_to_converge;
        out << ',';
        if (r.time_to_converge_ns) out << *r.time_to_converge_ns;
        out << ',' << r.solver_time_ns << ',' << csv_escape(r.error) << '\n';
    }
    return out.str();
}

std::string summary_to_csv(const std::vector<SummaryRow>& summary) {
    std::ostringstream out;
    out << "method,n,p,size_mean,size_min,size_max,time_ns_mean\n";
    for (const auto& row : summary) {
        out << row.method << ',' << row.n << ',' << format_double(row.p) << ','
            << format_double(row.size_mean) << ',' << row.size_min << ',' << row.size_max
            << ',' << format_double(row.time_ns_mean) << '\n';
    }
    return out.str();
}

std::vector<SummaryRow> summary_from_csv(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    if (!std::getline(in, line))
        throw std::invalid_argument("summary CSV missing header");
    if (line != "method,n,p,size_mean,size_min,size_max,time_ns_mean")
        throw std::invalid_argument("unexpected summary CSV header: " + line);

    std::vector<SummaryRow> rows;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::vector<std::string> fields;
        std::string field;
        std::istringstream split(line);
        while (std::getline(split, field, ',')) fields.push_back(field);
        if (fields.size() != 7)
            throw std::invalid_argument("summary CSV row needs 7 fields: " + line);
        SummaryRow row;
        row.method = fields[0];
        row.n = static_cast<int>(parse_double(fields[1]));
        row.p = parse_double(fields[2]);
        row.size_mean = parse_double(fields[3]);
        row.size_min = static_cast<int>(parse_double(fields[4]));
        row.size_max = static_cast<int>(parse_double(fields[5]));
        row.time_ns_mean = parse_double(fields[6]);
        rows.push_back(std::move(row));
    }
    return rows;
}

void emit_plot_data(const BenchConfig& config, const std::vector<BenchmarkRecord>& records,
                    const std::vector<SummaryRow>& summary, const std::string& out_dir) {
    namespace fs = std::filesystem;
    fs::create_directories(out_dir);

    auto write_file = [&](const std::string& name, const std::string& content) {
        const fs::path path = fs::path(out_dir) / name;
        std::ofstream out(path);
        if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
        out << content;
        if (!out) throw std::runtime_error("write failed for " + path.string());
    };

    write_file("records.csv", records_to_csv(records));
    const std::string summary_csv = summary_to_csv(summary);
    write_file("size_vs_n.csv", summary_csv);
    write_file("runtime_vs_n.csv", summary_csv);

    nlohmann::ordered_json meta;
    meta["version"] = kVersion;
    meta["config_hash"] = hex64(fnv1a(config.to_json()));
    meta["clock"] = {{"source", "steady_clock"}, {"overhead_ns", timing_overhead_ns()}};
    meta["parallelism"] = config.parallelism;
    write_file("metadata.json", meta.dump(2) + "\n");
}

std::int64_t timing_overhead_ns() {
    std::vector<std::int64_t> gaps;
    gaps.reserve(101);
    for (int i = 0; i < 101; ++i) {
        const auto t0 = std::chrono::steady_clock::now();
        const auto t1 = std::chrono::steady_clock::now();
        gaps.push_back(elapsed_ns(t0, t1));
    }
    std::nth_element(gaps.begin(), gaps.begin() + gaps.size() / 2, gaps.end());
    return gaps[gaps.size() / 2];
}

}  // namespace tbi
