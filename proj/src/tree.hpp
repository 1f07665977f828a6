#pragma once

#include <cstdint>
#include <limits>
#include <vector>

#include "voltspy/learners.hpp"
#include "voltspy/rng.hpp"

// Internal CART tree shared by the DT and RF models.
namespace voltspy {

struct TreeNode {
    int feature = -1;      // -1 for leaves
    double threshold = 0.0;  // x[feature] <= threshold goes left
    int left = -1;
    int right = -1;
    int leaf_class = -1;
};

struct TreeConfig {
    SplitCriterion criterion = SplitCriterion::gini;
    int max_depth = std::numeric_limits<int>::max();
    size_t mtry = 0;  // 0 = consider every feature, ascending
};

class CartTree {
public:
    // Builds on the rows listed in `idx` (bootstrap duplicates allowed).
    // `rng` is only consumed when cfg.mtry > 0.
    void build(const FeatureMatrix& X, const std::vector<int>& y, size_t n_classes,
               std::vector<size_t> idx, const TreeConfig& cfg, Rng* rng);

    int predict(std::span<const double> row) const;
    bool uses_feature(size_t f) const;

private:
    std::vector<TreeNode> nodes_;
};

}  // namespace voltspy
