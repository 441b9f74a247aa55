#pragma once

#include <cstdint>

#include "tbi/graph.hpp"

namespace tbi {

enum class DominationVariant {
    SelfDominating,   // a vertex may dominate itself (default)
    TotalDominating,  // every vertex needs a neighbor in the set
};

struct CostParams {
    std::int64_t penalty_scale = 2;  // A; must be positive for the penalty to bind
    DominationVariant variant = DominationVariant::SelfDominating;
};

// 1 if vertex is undominated under x, else 0.
int penalty(const Graph& g, const Bitstring& x, int vertex,
            DominationVariant variant = DominationVariant::SelfDominating);

// State energy: sum_i (x_i + A * P_i). Equals popcount(x) exactly when x is a
// dominating set (self-dominating variant).
std::int64_t energy(const Graph& g, const Bitstring& x, const CostParams& params);

}  // namespace tbi
