#pragma once

#include <cstdint>
#include <vector>

#include "tbi/bitstring.hpp"
#include "tbi/graph.hpp"

namespace tbi {

// Greedy cover: repeatedly select the unvisited vertex whose closed
// neighbourhood covers the most still-unvisited vertices (ties to the lowest
// index), then mark that neighbourhood visited. Always a dominating set.
Bitstring greedy_dominating_set(const Graph& graph);

// First-fit maximal independent set, which is also dominating: scan vertices
// in index order, taking each still-undominated vertex and marking its closed
// neighbourhood dominated. Linear in V + E.
Bitstring independent_dominating_set(const Graph& graph);

// Exhaustive minimum dominating set, usable as a test oracle up to n = 20
// (ResourceLimitError beyond that). Among minimum-size sets, prefers the one
// whose lowest differing vertex index is selected.
Bitstring brute_force_min_dominating_set(const Graph& graph);

struct ExactSolveResult {
    Bitstring set;
    bool optimal = true;      // false when the node budget ran out first
    std::uint64_t nodes = 0;  // search nodes explored
};

// Provably minimum dominating set via branch and bound over the covering
// formulation (minimize sum x_i s.t. every closed neighbourhood is hit).
// Greedy provides the initial incumbent; remaining-coverage bounds prune.
// Once `node_budget` nodes have been explored the incumbent is returned with
// optimal = false.
ExactSolveResult exact_min_dominating_set(const Graph& graph,
                                          std::uint64_t node_budget = 50'000'000);

}  // namespace tbi
