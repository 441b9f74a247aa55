#include "tbi/qubo.hpp"

#include <stdexcept>

namespace tbi {

int penalty(const Graph& g, const Bitstring& x, int vertex, DominationVariant variant) {
    if (static_cast<int>(x.size()) != g.n())
        throw std::invalid_argument("bitstring length must equal vertex count");
    if (vertex < 0 || vertex >= g.n()) throw std::invalid_argument("vertex out of range");

    int coverage = 0;
    if (variant == DominationVariant::SelfDominating)
        coverage += x[static_cast<std::size_t>(vertex)] ? 1 : 0;
    for (int j : g.neighbors(vertex)) coverage += x[static_cast<std::size_t>(j)] ? 1 : 0;
    return coverage >= 1 ? 0 : 1;
}

std::int64_t energy(const Graph& g, const Bitstring& x, const CostParams& params) {
    if (static_cast<int>(x.size()) != g.n())
        throw std::invalid_argument("bitstring length must equal vertex count");

    std::int64_t total = 0;
    for (int i = 0; i < g.n(); ++i) {
        total += x[static_cast<std::size_t>(i)] ? 1 : 0;
        total += params.penalty_scale * penalty(g, x, i, params.variant);
    }
    return total;
}

}  // namespace tbi
