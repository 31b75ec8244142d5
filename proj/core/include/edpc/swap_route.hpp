#pragma once

#include <map>
#include <utility>
#include <vector>

#include "edpc/grid.hpp"

namespace edpc {

using Site = std::pair<int, int>;  // (row, col) on the rotated data grid

struct SwapRound {
    std::vector<std::pair<Site, Site>> swaps;  // disjoint adjacent site pairs
};

/// Routes a partial permutation of data sites by three stages of odd-even
/// transposition rounds (columns, rows, columns). Adjacent lines run with
/// opposite round parity so the swap gadgets never contend for ancillas.
/// Unmapped sites are extended greedily to the nearest free target.
std::vector<SwapRound> route_permutation(const SwapLayout& lay,
                                         const std::map<Site, Site>& pi);

inline long route_depth(const std::vector<SwapRound>& rounds) {
    return 2 * static_cast<long>(rounds.size());
}
/// 4(L1+1) + 2(L2+1)
inline long route_depth_bound(const SwapLayout& lay) {
    return 4L * (lay.rows + 1) + 2L * (lay.cols + 1);
}

struct SwapCost {
    long depth = -1;
    Site e1{}, e2{};  // chosen placement for (v1, v2)
};

/// Cheapest placement of the pair (v1, v2) onto a matched edge, by the depth
/// of routing the extended mapping. Both orientations of each edge are tried;
/// edges whose endpoints are already mapping targets are skipped.
SwapCost swap_cost(const SwapLayout& lay, const std::map<Site, Site>& pi,
                   Site v1, Site v2,
                   const std::vector<std::pair<Site, Site>>& matching);

}  // namespace edpc
