#include "tbi/graph.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "tbi/errors.hpp"
#include "tbi/rng.hpp"

namespace tbi {

Graph::Graph(int n) : Graph(n, {}) {}

Graph::Graph(int n, const std::vector<std::pair<int, int>>& edges) : n_(n) {
    if (n < 1) throw std::invalid_argument("graph needs at least one vertex");
    adj_.resize(static_cast<std::size_t>(n));
    for (auto [u, v] : edges) {
        if (u < 0 || v < 0 || u >= n || v >= n)
            throw std::invalid_argument("edge endpoint out of range");
        if (u == v) throw std::invalid_argument("self-loops are not allowed");
        adj_[static_cast<std::size_t>(u)].push_back(v);
        adj_[static_cast<std::size_t>(v)].push_back(u);
    }
    for (auto& list : adj_) {
        std::sort(list.begin(), list.end());
        if (std::adjacent_find(list.begin(), list.end()) != list.end())
            throw std::invalid_argument("duplicate edge");
    }
    m_ = static_cast<std::int64_t>(edges.size());
}

const std::vector<int>& Graph::neighbors(int v) const {
    if (v < 0 || v >= n_) throw std::invalid_argument("vertex out of range");
    return adj_[static_cast<std::size_t>(v)];
}

int Graph::degree(int v) const { return static_cast<int>(neighbors(v).size()); }

int Graph::max_degree() const {
    int best = 0;
    for (const auto& list : adj_) best = std::max(best, static_cast<int>(list.size()));
    return best;
}

bool Graph::has_edge(int u, int v) const {
    const auto& list = neighbors(u);
    if (v < 0 || v >= n_) throw std::invalid_argument("vertex out of range");
    return std::binary_search(list.begin(), list.end(), v);
}

Graph generate_gnp(const GnpSpec& spec) {
    if (spec.n < 1) throw std::invalid_argument("n must be at least 1");
    if (!(spec.p >= 0.0 && spec.p <= 1.0))
        throw std::invalid_argument("p must lie in [0,1]");

    std::vector<std::pair<int, int>> edges;
    if (spec.p == 0.0 || spec.n == 1) return Graph(spec.n, edges);
    if (spec.p == 1.0) {
        for (int u = 0; u < spec.n; ++u)
            for (int v = u + 1; v < spec.n; ++v) edges.emplace_back(u, v);
        return Graph(spec.n, edges);
    }

    // Geometric skip sampling: jump straight to the next present edge in the
    // row-by-row enumeration of pairs (v, w), w < v.
    SplitMix64 rng(spec.seed);
    const double lp = std::log(1.0 - spec.p);
    int v = 1;
    std::int64_t w = -1;
    while (v < spec.n) {
        const double u = rng.next_double();
        w += 1 + static_cast<std::int64_t>(std::floor(std::log(1.0 - u) / lp));
        while (w >= v && v < spec.n) {
            w -= v;
            ++v;
        }
        if (v < spec.n) edges.emplace_back(v, static_cast<int>(w));
    }
    return Graph(spec.n, edges);
}

bool is_dominating_set(const Graph& g, const Bitstring& x) {
    if (static_cast<int>(x.size()) != g.n())
        throw std::invalid_argument("bitstring length must equal vertex count");
    for (int i = 0; i < g.n(); ++i) {
        if (x[static_cast<std::size_t>(i)]) continue;
        bool covered = false;
        for (int j : g.neighbors(i)) {
            if (x[static_cast<std::size_t>(j)]) {
                covered = true;
                break;
            }
        }
        if (!covered) return false;
    }
    return true;
}

Graph load_graph(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    std::size_t line_no = 0;

    auto next_line = [&]() -> bool {
        while (std::getline(in, line)) {
            ++line_no;
            if (!line.empty() && line.back() == '\r') line.pop_back();
            if (!line.empty()) return true;
        }
        return false;
    };

    if (!next_line()) throw ParseError(1, "missing header \"n m\"");
    int n = 0;
    std::int64_t m = 0;
    {
        std::istringstream hdr(line);
        std::string extra;
        if (!(hdr >> n >> m) || (hdr >> extra))
            throw ParseError(line_no, "header must be \"n m\"");
    }
    if (n < 1) throw ParseError(line_no, "vertex count must be at least 1");
    if (m < 0) throw ParseError(line_no, "edge count must be non-negative");

    std::vector<std::pair<int, int>> edges;
    edges.reserve(static_cast<std::size_t>(m));
    for (std::int64_t k = 0; k < m; ++k) {
        if (!next_line()) throw ParseError(line_no + 1, "unexpected end of input");
        std::istringstream row(line);
        int u = 0, v = 0;
        std::string extra;
        if (!(row >> u >> v) || (row >> extra))
            throw ParseError(line_no, "edge line must be \"u v\"");
        if (u < 0 || u >= n || v < 0 || v >= n)
            throw ParseError(line_no, "vertex index out of range");
        if (u >= v) throw ParseError(line_no, "edges must satisfy u < v");
        edges.emplace_back(u, v);
    }
    if (next_line()) throw ParseError(line_no, "trailing content after edge list");

    std::sort(edges.begin(), edges.end());
    if (std::adjacent_find(edges.begin(), edges.end()) != edges.end())
        throw ParseError(line_no, "duplicate edge");
    return Graph(n, edges);
}

std::string save_graph(const Graph& g) {
    std::ostringstream out;
    out << g.n() << ' ' << g.edge_count() << '\n';
    for (int u = 0; u < g.n(); ++u) {
        for (int v : g.neighbors(u)) {
            if (u < v) out << u << ' ' << v << '\n';
        }
    }
    return out.str();
}

Graph load_graph_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open graph file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return load_graph(buf.str());
}

}  // namespace tbi
