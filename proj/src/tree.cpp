#include "tree.hpp"

#include <algorithm>
#include <cmath>

namespace voltspy {

namespace {

double impurity(const std::vector<size_t>& counts, size_t total, SplitCriterion crit) {
    if (total == 0) return 0.0;
    const double dn = static_cast<double>(total);
    if (crit == SplitCriterion::gini) {
        double acc = 0.0;
        for (size_t c : counts) {
            const double p = static_cast<double>(c) / dn;
            acc += p * p;
        }
        return 1.0 - acc;
    }
    double acc = 0.0;
    for (size_t c : counts) {
        if (c == 0) continue;
        const double p = static_cast<double>(c) / dn;
        acc -= p * std::log2(p);
    }
    return acc;
}

int majority_class(const std::vector<size_t>& counts) {
    int best = 0;
    for (size_t c = 1; c < counts.size(); ++c)
        if (counts[c] > counts[static_cast<size_t>(best)]) best = static_cast<int>(c);
    return best;  // ties keep the lowest class index
}

}  // namespace

void CartTree::build(const FeatureMatrix& X, const std::vector<int>& y, size_t n_classes,
                     std::vector<size_t> idx, const TreeConfig& cfg, Rng* rng) {
    nodes_.clear();

    struct Work {
        int node;
        size_t begin, end;  // range in idx
        int depth;
    };

    const size_t d = X.cols();
    std::vector<Work> stack;
    nodes_.push_back({});
    stack.push_back({0, 0, idx.size(), 0});

    std::vector<size_t> counts(n_classes);
    std::vector<size_t> left_counts(n_classes);
    std::vector<std::pair<double, int>> scratch;  // (value, class)
    std::vector<size_t> feature_pool(d);
    for (size_t f = 0; f < d; ++f) feature_pool[f] = f;

    while (!stack.empty()) {
        const Work w = stack.back();
        stack.pop_back();
        const size_t n = w.end - w.begin;

        std::fill(counts.begin(), counts.end(), 0);
        for (size_t i = w.begin; i < w.end; ++i) counts[static_cast<size_t>(y[idx[i]])] += 1;
        const int majority = majority_class(counts);

        bool pure = counts[static_cast<size_t>(majority)] == n;
        if (pure || n < 2 || w.depth >= cfg.max_depth) {
            nodes_[static_cast<size_t>(w.node)].leaf_class = majority;
            continue;
        }

        const double parent_imp = impurity(counts, n, cfg.criterion);

        // Candidate features: every feature in ascending order, or a random
        // subset of mtry (sorted, so the lowest-index tie rule still holds).
        std::span<const size_t> candidates;
        std::vector<size_t> sampled;
        if (cfg.mtry > 0 && cfg.mtry < d) {
            sampled = sample_without_replacement(*rng, d, cfg.mtry);
            std::sort(sampled.begin(), sampled.end());
            candidates = sampled;
        } else {
            candidates = feature_pool;
        }

        double best_gain = 0.0;
        int best_feature = -1;
        double best_threshold = 0.0;

        for (size_t f : candidates) {
            scratch.clear();
            for (size_t i = w.begin; i < w.end; ++i)
                scratch.emplace_back(X.at(idx[i], f), y[idx[i]]);
            std::sort(scratch.begin(), scratch.end(),
                      [](const auto& a, const auto& b) { return a.first < b.first; });
            if (scratch.front().first == scratch.back().first) continue;

            std::fill(left_counts.begin(), left_counts.end(), 0);
            size_t n_left = 0;
            for (size_t i = 0; i + 1 < scratch.size(); ++i) {
                left_counts[static_cast<size_t>(scratch[i].second)] += 1;
                ++n_left;
                if (scratch[i].first == scratch[i + 1].first) continue;

                const double imp_l = impurity(left_counts, n_left, cfg.criterion);
                // right counts = counts - left_counts
                double imp_r;
                {
                    const size_t n_right = n - n_left;
                    double acc = 0.0;
                    if (cfg.criterion == SplitCriterion::gini) {
                        for (size_t c = 0; c < n_classes; ++c) {
                            const double p = static_cast<double>(counts[c] - left_counts[c]) /
                                             static_cast<double>(n_right);
                            acc += p * p;
                        }
                        imp_r = 1.0 - acc;
                    } else {
                        for (size_t c = 0; c < n_classes; ++c) {
                            const size_t cr = counts[c] - left_counts[c];
                            if (cr == 0) continue;
                            const double p =
                                static_cast<double>(cr) / static_cast<double>(n_right);
                            acc -= p * std::log2(p);
                        }
                        imp_r = acc;
                    }
                    const double child_imp = (static_cast<double>(n_left) * imp_l +
                                              static_cast<double>(n_right) * imp_r) /
                                             static_cast<double>(n);
                    const double gain = parent_imp - child_imp;
                    if (gain > best_gain) {
                        best_gain = gain;
                        best_feature = static_cast<int>(f);
                        best_threshold = (scratch[i].first + scratch[i + 1].first) / 2.0;
                    }
                }
            }
        }

        if (best_feature < 0) {
            nodes_[static_cast<size_t>(w.node)].leaf_class = majority;
            continue;
        }

        auto mid = std::stable_partition(
            idx.begin() + static_cast<long>(w.begin), idx.begin() + static_cast<long>(w.end),
            [&](size_t i) { return X.at(i, static_cast<size_t>(best_feature)) <= best_threshold; });
        const auto split_at = static_cast<size_t>(mid - idx.begin());

        const int left_id = static_cast<int>(nodes_.size());
        nodes_.push_back({});
        const int right_id = static_cast<int>(nodes_.size());
        nodes_.push_back({});
        TreeNode& node = nodes_[static_cast<size_t>(w.node)];
        node.feature = best_feature;
        node.threshold = best_threshold;
        node.left = left_id;
        node.right = right_id;

        stack.push_back({right_id, split_at, w.end, w.depth + 1});
        stack.push_back({left_id, w.begin, split_at, w.depth + 1});
    }
}

int CartTree::predict(std::span<const double> row) const {
    size_t at = 0;
    while (nodes_[at].feature >= 0)
        at = static_cast<size_t>(row[static_cast<size_t>(nodes_[at].feature)] <= nodes_[at].threshold
                                     ? nodes_[at].left
                                     : nodes_[at].right);
    return nodes_[at].leaf_class;
}

bool CartTree::uses_feature(size_t f) const {
    for (const auto& n : nodes_)
        if (n.feature == static_cast<int>(f)) return true;
    return false;
}

}  // namespace voltspy
