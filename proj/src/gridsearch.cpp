#include <algorithm>
#include <map>

#include "knn_common.hpp"
#include "voltspy/kernels.hpp"
#include "voltspy/learners.hpp"
#include "voltspy/parallel.hpp"
#include "voltspy/rng.hpp"

namespace voltspy {

namespace {

constexpr int kFolds = 3;
constexpr size_t kKnnMaxK = 14;

std::vector<int> make_folds(const FeatureMatrix& X, uint64_t seed) {
    std::map<std::string, std::vector<size_t>> by_class;
    for (size_t i = 0; i < X.rows(); ++i) by_class[X.labels[i]].push_back(i);

    std::vector<int> fold(X.rows(), 0);
    Rng rng(mix_seed(seed, hash_str("cv-folds")));
    for (auto& [cls, idx] : by_class) {
        if (idx.size() < kFolds)
            throw DataError("grid_search: class '" + cls + "' has fewer than 3 rows");
        Rng class_rng = rng.derive(hash_str(cls));
        class_rng.shuffle(idx);
        for (size_t i = 0; i < idx.size(); ++i) fold[idx[i]] = static_cast<int>(i % kFolds);
    }
    return fold;
}

double run_fold(const Hyperparams& hp, const FeatureMatrix& tr, const FeatureMatrix& ev,
                uint64_t fit_seed) {
    auto model = train(hp, tr, fit_seed);
    const auto pred = model->predict(ev);
    size_t correct = 0;
    for (size_t i = 0; i < pred.size(); ++i)
        if (pred[i] == ev.labels[i]) ++correct;
    return static_cast<double>(correct) / static_cast<double>(ev.rows());
}

// All 28 KNN configs share one neighbor pass per fold: the 14 nearest
// neighbors of every eval row are computed once and each (k, weighting)
// combination votes on a prefix.
std::vector<std::array<double, kFolds>> knn_cv_scores(const std::vector<Hyperparams>& grid,
                                                      const FeatureMatrix& X,
                                                      const std::vector<int>& fold) {
    std::vector<std::array<double, kFolds>> scores(grid.size());
    const auto enc = encode_labels(X);

    for (int f = 0; f < kFolds; ++f) {
        std::vector<size_t> tr_idx, ev_idx;
        for (size_t i = 0; i < X.rows(); ++i) (fold[i] == f ? ev_idx : tr_idx).push_back(i);
        const FeatureMatrix tr = X.take_rows(tr_idx);
        const FeatureMatrix ev = X.take_rows(ev_idx);
        std::vector<int> y_tr;
        y_tr.reserve(tr_idx.size());
        for (size_t i : tr_idx) y_tr.push_back(enc.y[i]);

        const size_t kmax = std::min(kKnnMaxK, tr.rows());
        std::vector<std::vector<std::pair<double, size_t>>> neighbors(ev.rows());
        parallel_for(ev.rows(), [&](size_t i) {
            std::vector<std::pair<double, size_t>> dist(tr.rows());
            const auto row = ev.row(i);
            for (size_t j = 0; j < tr.rows(); ++j)
                dist[j] = {kernels::sq_distance(row, tr.row(j)), j};
            std::partial_sort(dist.begin(), dist.begin() + static_cast<long>(kmax), dist.end());
            dist.resize(kmax);
            neighbors[i] = std::move(dist);
        });

        for (size_t g = 0; g < grid.size(); ++g) {
            const auto k = std::min<size_t>(static_cast<size_t>(grid[g].k), kmax);
            size_t correct = 0;
            for (size_t i = 0; i < ev.rows(); ++i) {
                const int pred = knn_vote({neighbors[i].data(), k}, y_tr, enc.classes.size(),
                                          grid[g].weighting);
                if (enc.classes[static_cast<size_t>(pred)] == ev.labels[i]) ++correct;
            }
            scores[g][static_cast<size_t>(f)] =
                static_cast<double>(correct) / static_cast<double>(ev.rows());
        }
    }
    return scores;
}

}  // namespace

GridSearchResult grid_search(ModelKind kind, const FeatureMatrix& X_train, uint64_t seed) {
    const auto grid = hyperparam_grid(kind);
    const auto fold = make_folds(X_train, seed);

    std::vector<CvRow> table(grid.size());
    for (size_t g = 0; g < grid.size(); ++g) table[g].hp = grid[g];

    if (kind == ModelKind::KNN) {
        const auto scores = knn_cv_scores(grid, X_train, fold);
        for (size_t g = 0; g < grid.size(); ++g) table[g].fold_accuracy = scores[g];
    } else {
        // Pre-slice fold matrices once.
        std::array<FeatureMatrix, kFolds> tr_m, ev_m;
        for (int f = 0; f < kFolds; ++f) {
            std::vector<size_t> tr_idx, ev_idx;
            for (size_t i = 0; i < X_train.rows(); ++i)
                (fold[i] == f ? ev_idx : tr_idx).push_back(i);
            tr_m[static_cast<size_t>(f)] = X_train.take_rows(tr_idx);
            ev_m[static_cast<size_t>(f)] = X_train.take_rows(ev_idx);
        }

        const size_t n_tasks = grid.size() * kFolds;
        auto run_task = [&](size_t t) {
            const size_t g = t / kFolds;
            const size_t f = t % kFolds;
            const uint64_t fit_seed = mix_seed(mix_seed(seed, g), f);
            table[g].fold_accuracy[f] = run_fold(grid[g], tr_m[f], ev_m[f], fit_seed);
        };
        if (kind == ModelKind::RF) {
            // RF parallelizes over trees internally; keep the grid serial.
            for (size_t t = 0; t < n_tasks; ++t) run_task(t);
        } else {
            parallel_for(n_tasks, run_task);
        }
    }

    size_t best = 0;
    for (size_t g = 0; g < grid.size(); ++g) {
        double mean = 0.0;
        for (double a : table[g].fold_accuracy) mean += a;
        table[g].mean_accuracy = mean / kFolds;
        if (table[g].mean_accuracy > table[best].mean_accuracy) best = g;
    }

    GridSearchResult res;
    res.best = grid[best];
    res.table = std::move(table);
    res.model = train(grid[best], X_train, mix_seed(seed, hash_str("refit")));
    return res;
}

}  // namespace voltspy
