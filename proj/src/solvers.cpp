#include "tbi/solvers.hpp"

#include <algorithm>
#include <bit>
#include <queue>
#include <stdexcept>
#include <utility>

#include "tbi/errors.hpp"

namespace tbi {

Bitstring greedy_dominating_set(const Graph& graph) {
    const int n = graph.n();
    Bitstring selected(static_cast<std::size_t>(n), 0);
    std::vector<char> visited(static_cast<std::size_t>(n), 0);
    int unvisited = n;

    // Lazy max-heap of (coverage, -vertex); stale entries are re-pushed with
    // their recomputed coverage. Coverage only shrinks, so a fresh top entry
    // is a true maximum, and -vertex breaks ties toward the lowest index.
    std::priority_queue<std::pair<int, int>> heap;
    for (int v = 0; v < n; ++v) heap.emplace(graph.degree(v) + 1, -v);

    auto coverage = [&](int v) {
        int count = visited[static_cast<std::size_t>(v)] ? 0 : 1;
        for (int j : graph.neighbors(v)) count += visited[static_cast<std::size_t>(j)] ? 0 : 1;
        return count;
    };

    while (unvisited > 0) {
        if (heap.empty()) throw InternalError("greedy ran out of candidates");
        auto [count, neg_v] = heap.top();
        heap.pop();
        const int v = -neg_v;
        if (visited[static_cast<std::size_t>(v)]) continue;  // no longer a candidate
        const int fresh = coverage(v);
        if (fresh != count) {
            heap.emplace(fresh, neg_v);
            continue;
        }
        selected[static_cast<std::size_t>(v)] = 1;
        visited[static_cast<std::size_t>(v)] = 1;
        --unvisited;
        for (int j : graph.neighbors(v)) {
            if (!visited[static_cast<std::size_t>(j)]) {
                visited[static_cast<std::size_t>(j)] = 1;
                --unvisited;
            }
        }
    }
    return selected;
}

Bitstring independent_dominating_set(const Graph& graph) {
    const int n = graph.n();
    Bitstring selected(static_cast<std::size_t>(n), 0);
    std::vector<char> dominated(static_cast<std::size_t>(n), 0);
    for (int v = 0; v < n; ++v) {
        if (dominated[static_cast<std::size_t>(v)]) continue;
        selected[static_cast<std::size_t>(v)] = 1;
        dominated[static_cast<std::size_t>(v)] = 1;
        for (int j : graph.neighbors(v)) dominated[static_cast<std::size_t>(j)] = 1;
    }
    return selected;
}

namespace {

Bitstring mask_to_bitstring(std::uint32_t mask, int n) {
    Bitstring bits(static_cast<std::size_t>(n), 0);
    for (int v = 0; v < n; ++v) {
        if (mask & (std::uint32_t{1} << v)) bits[static_cast<std::size_t>(v)] = 1;
    }
    return bits;
}

// Among equal-size sets, prefer the one that selects the lowest-indexed
// vertex at the first index where the two differ.
bool prefers(std::uint32_t challenger, std::uint32_t incumbent) {
    const std::uint32_t diff = challenger ^ incumbent;
    if (diff == 0) return false;
    const std::uint32_t lowest = diff & (~diff + 1);
    return (challenger & lowest) != 0;
}

}  // namespace

Bitstring brute_force_min_dominating_set(const Graph& graph) {
    const int n = graph.n();
    if (n > 20) throw ResourceLimitError("brute force capped at 20 vertices");

    std::vector<std::uint32_t> closed(static_cast<std::size_t>(n), 0);
    for (int v = 0; v < n; ++v) {
        std::uint32_t mask = std::uint32_t{1} << v;
        for (int j : graph.neighbors(v)) mask |= std::uint32_t{1} << j;
        closed[static_cast<std::size_t>(v)] = mask;
    }
    const std::uint32_t full = (std::uint32_t{1} << n) - 1;

    std::uint32_t best = full;  // all-ones always dominates
    int best_size = n;
    for (std::uint32_t set = 1; set <= full; ++set) {
        const int size = std::popcount(set);
        if (size > best_size) continue;
        std::uint32_t covered = 0;
        for (std::uint32_t rest = set; rest != 0; rest &= rest - 1) {
            covered |= closed[static_cast<std::size_t>(std::countr_zero(rest))];
        }
        if (covered != full) continue;
        if (size < best_size || (size == best_size && prefers(set, best))) {
            best = set;
            best_size = size;
        }
    }
    return mask_to_bitstring(best, n);
}

namespace {

struct BranchState {
    const Graph* graph = nullptr;
    int max_degree_plus_one = 1;
    std::uint64_t node_budget = 0;
    std::uint64_t nodes = 0;
    bool budget_hit = false;

    std::vector<char> dominated;
    std::vector<char> banned;
    std::vector<int> chosen;
    int undominated = 0;

    std::vector<int> best;
    int best_size = 0;

    void select(int v, std::vector<int>& newly) {
        chosen.push_back(v);
        if (!dominated[static_cast<std::size_t>(v)]) {
            dominated[static_cast<std::size_t>(v)] = 1;
            --undominated;
            newly.push_back(v);
        }
        for (int j : graph->neighbors(v)) {
            if (!dominated[static_cast<std::size_t>(j)]) {
                dominated[static_cast<std::size_t>(j)] = 1;
                --undominated;
                newly.push_back(j);
            }
        }
    }

    void unselect(const std::vector<int>& newly) {
        chosen.pop_back();
        for (int v : newly) {
            dominated[static_cast<std::size_t>(v)] = 0;
            ++undominated;
        }
    }

    void recurse() {
        ++nodes;
        if (nodes > node_budget) {
            budget_hit = true;
            return;
        }
        if (undominated == 0) {
            if (static_cast<int>(chosen.size()) < best_size) {
                best = chosen;
                best_size = static_cast<int>(chosen.size());
            }
            return;
        }
        // Covering lower bound: one selection dominates at most Delta+1 vertices.
        const int lower =
            (undominated + max_degree_plus_one - 1) / max_degree_plus_one;
        if (static_cast<int>(chosen.size()) + lower >= best_size) return;

        // Branch on the undominated vertex with the fewest ways to cover it.
        int branch_vertex = -1;
        int branch_options = -1;
        for (int v = 0; v < graph->n(); ++v) {
            if (dominated[static_cast<std::size_t>(v)]) continue;
            int options = banned[static_cast<std::size_t>(v)] ? 0 : 1;
            for (int j : graph->neighbors(v))
                options += banned[static_cast<std::size_t>(j)] ? 0 : 1;
            if (branch_vertex == -1 || options < branch_options) {
                branch_vertex = v;
                branch_options = options;
            }
        }
        if (branch_options == 0) return;  // bans made this vertex uncoverable

        std::vector<int> candidates;
        if (!banned[static_cast<std::size_t>(branch_vertex)])
            candidates.push_back(branch_vertex);
        for (int j : graph->neighbors(branch_vertex)) {
            if (!banned[static_cast<std::size_t>(j)]) candidates.push_back(j);
        }
        std::sort(candidates.begin(), candidates.end());

        // Either the first candidate is selected, or it is banned and the
        // second is selected, and so on — a partition of the search space.
        std::vector<int> newly;
        for (int c : candidates) {
            newly.clear();
            select(c, newly);
            recurse();
            unselect(newly);
            if (budget_hit) break;
            banned[static_cast<std::size_t>(c)] = 1;
        }
        for (int c : candidates) banned[static_cast<std::size_t>(c)] = 0;
    }
};

}  // namespace

ExactSolveResult exact_min_dominating_set(const Graph& graph, std::uint64_t node_budget) {
    const Bitstring greedy = greedy_dominating_set(graph);

    BranchState state;
    state.graph = &graph;
    state.max_degree_plus_one = graph.max_degree() + 1;
    state.node_budget = node_budget;
    state.dominated.assign(static_cast<std::size_t>(graph.n()), 0);
    state.banned.assign(static_cast<std::size_t>(graph.n()), 0);
    state.undominated = graph.n();
    state.best_size = popcount(greedy);
    for (int v = 0; v < graph.n(); ++v) {
        if (greedy[static_cast<std::size_t>(v)]) state.best.push_back(v);
    }

    state.recurse();

    ExactSolveResult result;
    result.set.assign(static_cast<std::size_t>(graph.n()), 0);
    for (int v : state.best) result.set[static_cast<std::size_t>(v)] = 1;
    result.optimal = !state.budget_hit;
    result.nodes = state.nodes;
    return result;
}

}  // namespace tbi
