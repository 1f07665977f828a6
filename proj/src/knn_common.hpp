#pragma once

#include <cmath>
#include <span>
#include <utility>
#include <vector>

#include "voltspy/learners.hpp"

// Shared KNN voting rule: `neighbors` holds the k nearest (squared distance,
// train row) pairs in ascending order. A zero-distance neighbor outweighs
// all others; class-score ties resolve to the lowest class index.
namespace voltspy {

inline int knn_vote(std::span<const std::pair<double, size_t>> neighbors,
                    const std::vector<int>& y_train, size_t n_classes, KnnWeighting weighting) {
    std::vector<double> score(n_classes, 0.0);
    if (weighting == KnnWeighting::uniform) {
        for (const auto& [d2, j] : neighbors) score[static_cast<size_t>(y_train[j])] += 1.0;
    } else {
        bool exact = false;
        for (const auto& [d2, j] : neighbors) {
            if (d2 != 0.0) break;
            score[static_cast<size_t>(y_train[j])] += 1.0;
            exact = true;
        }
        if (!exact)
            for (const auto& [d2, j] : neighbors)
                score[static_cast<size_t>(y_train[j])] += 1.0 / std::sqrt(d2);
    }
    int best = 0;
    for (size_t c = 1; c < n_classes; ++c)
        if (score[c] > score[static_cast<size_t>(best)]) best = static_cast<int>(c);
    return best;
}

}  // namespace voltspy
