#pragma once

#include <vector>

#include "funclearn/grid.hpp"

namespace funclearn {

/// Labeled sample D = {(X_i, Y_i)}: predictors on a grid, scalar responses.
struct Dataset {
    std::vector<Func> predictors;
    std::vector<double> responses;
    Grid grid;

    int size() const { return static_cast<int>(predictors.size()); }
};

/// Disjoint split of a Dataset into local subsets with sizes differing by at most 1.
struct Partition {
    std::vector<Dataset> subsets;

    int machines() const { return static_cast<int>(subsets.size()); }

    std::vector<int> sizes() const {
        std::vector<int> out;
        out.reserve(subsets.size());
        for (const auto& s : subsets) out.push_back(s.size());
        return out;
    }

    int total_size() const {
        int n = 0;
        for (const auto& s : subsets) n += s.size();
        return n;
    }
};

/// Unlabeled predictors, one pool per machine.
struct UnlabeledPool {
    std::vector<std::vector<Func>> predictors;

    int machines() const { return static_cast<int>(predictors.size()); }
};

} // namespace funclearn
