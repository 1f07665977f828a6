#pragma once

#include <array>
#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "voltspy/matrix.hpp"

namespace voltspy {

enum class ModelKind { DT, KNN, MLP, RF };

const char* model_kind_name(ModelKind kind);
ModelKind model_kind_from_name(const std::string& name);  // dt|knn|mlp|rf

enum class SplitCriterion { gini, entropy };
enum class KnnWeighting { uniform, distance };

struct Hyperparams {
    ModelKind kind = ModelKind::DT;
    // DT
    SplitCriterion criterion = SplitCriterion::gini;
    int max_depth = 15;
    // KNN
    int k = 5;
    KnnWeighting weighting = KnnWeighting::uniform;
    // MLP
    int hidden = 50;
    // RF
    int n_estimators = 100;

    std::string describe() const;
};

// A fitted classifier. Immutable after training; predict is pure and
// rejects matrices whose feature names differ from the training ones.
class Model {
public:
    virtual ~Model() = default;

    ModelKind kind() const { return hp_.kind; }
    const Hyperparams& params() const { return hp_; }
    const std::vector<std::string>& feature_names() const { return feature_names_; }
    const std::vector<std::string>& classes() const { return classes_; }
    uint64_t training_seed() const { return seed_; }

    std::vector<std::string> predict(const FeatureMatrix& X) const;
    std::vector<int> predict_ids(const FeatureMatrix& X) const;

protected:
    virtual std::vector<int> do_predict(const FeatureMatrix& X) const = 0;

    Hyperparams hp_;
    std::vector<std::string> feature_names_;
    std::vector<std::string> classes_;
    uint64_t seed_ = 0;
};

// Trains one classifier. Throws DataError on single-class or non-finite
// input. KNN and MLP expect standardized features (the attack pipeline
// guarantees this); DT and RF take features as-is.
std::unique_ptr<Model> train(const Hyperparams& hp, const FeatureMatrix& X, uint64_t seed);

// The per-kind search grids, in tie-break enumeration order.
std::vector<Hyperparams> hyperparam_grid(ModelKind kind);

struct CvRow {
    Hyperparams hp;
    std::array<double, 3> fold_accuracy{};
    double mean_accuracy = 0.0;
};

struct GridSearchResult {
    Hyperparams best;
    std::vector<CvRow> table;
    std::unique_ptr<Model> model;  // refit on all of X_train with `best`
};

// Stratified 3-fold CV on the training matrix, scored by mean fold
// accuracy; ties go to the first config in enumeration order.
GridSearchResult grid_search(ModelKind kind, const FeatureMatrix& X_train, uint64_t seed);

// MLP internals exposed for gradient checking and the loss-decrease
// property. Returned by train() when hp.kind == MLP.
class MlpModel : public Model {
public:
    MlpModel(const Hyperparams& hp, const FeatureMatrix& X, uint64_t seed);

    double first_epoch_loss() const { return first_epoch_loss_; }
    double last_epoch_loss() const { return last_epoch_loss_; }

    std::vector<double>& parameters() { return params_; }
    const std::vector<double>& parameters() const { return params_; }

    // Mean cross-entropy over the given rows plus its gradient.
    double loss_and_grad(const FeatureMatrix& X, const std::vector<int>& y,
                         const std::vector<size_t>& rows, std::vector<double>* grad) const;

protected:
    std::vector<int> do_predict(const FeatureMatrix& X) const override;

private:
    void fit(const FeatureMatrix& X, const std::vector<int>& y);

    size_t d_ = 0, h_ = 0, k_ = 0;
    size_t off_w1_ = 0, off_b1_ = 0, off_w2_ = 0, off_b2_ = 0;
    std::vector<double> params_;
    double first_epoch_loss_ = 0.0;
    double last_epoch_loss_ = 0.0;
};

}  // namespace voltspy
