#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "tbi/bitstring.hpp"

namespace tbi {

// Simple undirected graph over vertices 0..n-1 with sorted adjacency lists.
// Immutable after construction.
class Graph {
public:
    explicit Graph(int n);
    Graph(int n, const std::vector<std::pair<int, int>>& edges);

    int n() const { return n_; }
    std::int64_t edge_count() const { return m_; }
    const std::vector<int>& neighbors(int v) const;
    int degree(int v) const;
    int max_degree() const;
    bool has_edge(int u, int v) const;

    bool operator==(const Graph&) const = default;

private:
    int n_ = 0;
    std::int64_t m_ = 0;
    std::vector<std::vector<int>> adj_;
};

struct GnpSpec {
    int n = 1;
    double p = 0.0;          // edge probability
    std::uint64_t seed = 0;
};

// G(n,p) via geometric skip sampling over a splitmix64 stream.
// Pure function of (n, p, seed); p=0 and p=1 short-circuit.
Graph generate_gnp(const GnpSpec& spec);

// True iff every vertex is in the set or adjacent to a set member.
bool is_dominating_set(const Graph& g, const Bitstring& x);

// Edge-list text format: "n m" then m lines "u v" with u < v.
Graph load_graph(const std::string& text);
std::string save_graph(const Graph& g);
Graph load_graph_file(const std::string& path);

}  // namespace tbi
