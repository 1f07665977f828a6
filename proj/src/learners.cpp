#include "voltspy/learners.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "knn_common.hpp"
#include "tree.hpp"
#include "voltspy/kernels.hpp"
#include "voltspy/parallel.hpp"
#include "voltspy/rng.hpp"

namespace voltspy {

const char* model_kind_name(ModelKind kind) {
    switch (kind) {
        case ModelKind::DT: return "dt";
        case ModelKind::KNN: return "knn";
        case ModelKind::MLP: return "mlp";
        case ModelKind::RF: return "rf";
    }
    return "?";
}

ModelKind model_kind_from_name(const std::string& name) {
    if (name == "dt") return ModelKind::DT;
    if (name == "knn") return ModelKind::KNN;
    if (name == "mlp") return ModelKind::MLP;
    if (name == "rf") return ModelKind::RF;
    throw UsageError("unknown model kind '" + name + "' (expected dt, knn, mlp or rf)");
}

std::string Hyperparams::describe() const {
    switch (kind) {
        case ModelKind::DT:
            return std::string("dt(criterion=") +
                   (criterion == SplitCriterion::gini ? "gini" : "entropy") +
                   ",max_depth=" + std::to_string(max_depth) + ")";
        case ModelKind::KNN:
            return "knn(k=" + std::to_string(k) +
                   ",weighting=" + (weighting == KnnWeighting::uniform ? "uniform" : "distance") +
                   ")";
        case ModelKind::MLP: return "mlp(hidden=" + std::to_string(hidden) + ")";
        case ModelKind::RF: return "rf(n_estimators=" + std::to_string(n_estimators) + ")";
    }
    return "?";
}

std::vector<std::string> Model::predict(const FeatureMatrix& X) const {
    const auto ids = predict_ids(X);
    std::vector<std::string> out;
    out.reserve(ids.size());
    for (int id : ids) out.push_back(classes_[static_cast<size_t>(id)]);
    return out;
}

std::vector<int> Model::predict_ids(const FeatureMatrix& X) const {
    if (X.rows() == 0) return {};
    if (X.names != feature_names_) {
        std::set<std::string> got(X.names.begin(), X.names.end());
        std::set<std::string> want(feature_names_.begin(), feature_names_.end());
        std::string diff;
        for (const auto& n : want)
            if (!got.count(n)) diff += " -" + n;
        for (const auto& n : got)
            if (!want.count(n)) diff += " +" + n;
        if (diff.empty()) diff = " (same names, different order)";
        throw DataError("predict: feature names do not match training:" + diff);
    }
    return do_predict(X);
}

namespace {

void check_training_input(const FeatureMatrix& X, const ClassEncoding& enc) {
    if (X.rows() == 0) throw DataError("train: empty matrix");
    if (enc.classes.size() < 2) throw DataError("train: single-class data");
    for (double v : X.values)
        if (!std::isfinite(v)) throw DataError("train: non-finite value in feature matrix");
}

// ---- Decision tree -------------------------------------------------------

class DtModel : public Model {
public:
    DtModel(const Hyperparams& hp, const FeatureMatrix& X, uint64_t seed) {
        hp_ = hp;
        feature_names_ = X.names;
        seed_ = seed;
        auto enc = encode_labels(X);
        check_training_input(X, enc);
        classes_ = enc.classes;
        std::vector<size_t> idx(X.rows());
        for (size_t i = 0; i < idx.size(); ++i) idx[i] = i;
        TreeConfig cfg{hp.criterion, hp.max_depth, 0};
        tree_.build(X, enc.y, classes_.size(), std::move(idx), cfg, nullptr);
    }

    const CartTree& tree() const { return tree_; }

protected:
    std::vector<int> do_predict(const FeatureMatrix& X) const override {
        std::vector<int> out(X.rows());
        for (size_t i = 0; i < X.rows(); ++i) out[i] = tree_.predict(X.row(i));
        return out;
    }

private:
    CartTree tree_;
};

// ---- Random forest -------------------------------------------------------

class RfModel : public Model {
public:
    RfModel(const Hyperparams& hp, const FeatureMatrix& X, uint64_t seed) {
        hp_ = hp;
        feature_names_ = X.names;
        seed_ = seed;
        auto enc = encode_labels(X);
        check_training_input(X, enc);
        classes_ = enc.classes;

        const size_t n = X.rows();
        const auto mtry = static_cast<size_t>(
            std::ceil(std::sqrt(static_cast<double>(X.cols()))));
        trees_.resize(static_cast<size_t>(hp.n_estimators));
        TreeConfig cfg{SplitCriterion::gini, std::numeric_limits<int>::max(), mtry};
        parallel_for(trees_.size(), [&](size_t t) {
            Rng rng(mix_seed(seed, t));
            std::vector<size_t> bootstrap(n);
            for (size_t i = 0; i < n; ++i) bootstrap[i] = static_cast<size_t>(rng.index(n));
            trees_[t].build(X, enc.y, classes_.size(), std::move(bootstrap), cfg, &rng);
        });
    }

protected:
    std::vector<int> do_predict(const FeatureMatrix& X) const override {
        std::vector<int> out(X.rows());
        parallel_for(X.rows(), [&](size_t i) {
            std::vector<size_t> votes(classes_.size(), 0);
            for (const auto& t : trees_) votes[static_cast<size_t>(t.predict(X.row(i)))] += 1;
            int best = 0;
            for (size_t c = 1; c < votes.size(); ++c)
                if (votes[c] > votes[static_cast<size_t>(best)]) best = static_cast<int>(c);
            out[i] = best;
        });
        return out;
    }

private:
    std::vector<CartTree> trees_;
};

// ---- K-nearest neighbors -------------------------------------------------

class KnnModel : public Model {
public:
    KnnModel(const Hyperparams& hp, const FeatureMatrix& X, uint64_t seed) {
        hp_ = hp;
        feature_names_ = X.names;
        seed_ = seed;
        auto enc = encode_labels(X);
        check_training_input(X, enc);
        classes_ = enc.classes;
        train_ = X;
        y_ = std::move(enc.y);
    }

protected:
    std::vector<int> do_predict(const FeatureMatrix& X) const override {
        std::vector<int> out(X.rows());
        parallel_for(X.rows(), [&](size_t i) { out[i] = predict_row(X.row(i)); });
        return out;
    }

private:
    int predict_row(std::span<const double> row) const {
        const size_t n = train_.rows();
        const auto k = std::min<size_t>(static_cast<size_t>(hp_.k), n);
        std::vector<std::pair<double, size_t>> dist(n);
        for (size_t j = 0; j < n; ++j) dist[j] = {kernels::sq_distance(row, train_.row(j)), j};
        std::partial_sort(dist.begin(), dist.begin() + static_cast<long>(k), dist.end());
        return knn_vote({dist.data(), k}, y_, classes_.size(), hp_.weighting);
    }

    FeatureMatrix train_;
    std::vector<int> y_;
};

}  // namespace

// ---- MLP -----------------------------------------------------------------

MlpModel::MlpModel(const Hyperparams& hp, const FeatureMatrix& X, uint64_t seed) {
    hp_ = hp;
    feature_names_ = X.names;
    seed_ = seed;
    auto enc = encode_labels(X);
    check_training_input(X, enc);
    classes_ = enc.classes;

    d_ = X.cols();
    h_ = static_cast<size_t>(hp.hidden);
    k_ = classes_.size();
    off_w1_ = 0;
    off_b1_ = h_ * d_;
    off_w2_ = off_b1_ + h_;
    off_b2_ = off_w2_ + k_ * h_;
    params_.assign(off_b2_ + k_, 0.0);

    Rng rng(mix_seed(seed, hash_str("mlp-init")));
    const double bound1 = std::sqrt(6.0 / static_cast<double>(d_ + h_));
    for (size_t i = 0; i < h_ * d_; ++i) params_[off_w1_ + i] = rng.uniform(-bound1, bound1);
    const double bound2 = std::sqrt(6.0 / static_cast<double>(h_ + k_));
    for (size_t i = 0; i < k_ * h_; ++i) params_[off_w2_ + i] = rng.uniform(-bound2, bound2);

    fit(X, enc.y);
}

double MlpModel::loss_and_grad(const FeatureMatrix& X, const std::vector<int>& y,
                               const std::vector<size_t>& rows, std::vector<double>* grad) const {
    if (grad != nullptr) grad->assign(params_.size(), 0.0);
    const double* w1 = params_.data() + off_w1_;
    const double* b1 = params_.data() + off_b1_;
    const double* w2 = params_.data() + off_w2_;
    const double* b2 = params_.data() + off_b2_;

    std::vector<double> a1(h_), z2(k_), p(k_), dz2(k_), da1(h_);
    double loss = 0.0;
    const double inv_batch = 1.0 / static_cast<double>(rows.size());

    for (size_t r : rows) {
        const auto x = X.row(r);
        for (size_t i = 0; i < h_; ++i) {
            const double z = kernels::dot({w1 + i * d_, d_}, x) + b1[i];
            a1[i] = z > 0.0 ? z : 0.0;
        }
        for (size_t c = 0; c < k_; ++c)
            z2[c] = kernels::dot({w2 + c * h_, h_}, {a1.data(), h_}) + b2[c];

        double zmax = z2[0];
        for (size_t c = 1; c < k_; ++c) zmax = std::max(zmax, z2[c]);
        double denom = 0.0;
        for (size_t c = 0; c < k_; ++c) {
            p[c] = std::exp(z2[c] - zmax);
            denom += p[c];
        }
        for (size_t c = 0; c < k_; ++c) p[c] /= denom;
        const auto target = static_cast<size_t>(y[r]);
        loss -= std::log(std::max(p[target], 1e-15)) * inv_batch;

        if (grad == nullptr) continue;
        double* g = grad->data();
        for (size_t c = 0; c < k_; ++c) dz2[c] = (p[c] - (c == target ? 1.0 : 0.0)) * inv_batch;
        std::fill(da1.begin(), da1.end(), 0.0);
        for (size_t c = 0; c < k_; ++c) {
            kernels::axpy(dz2[c], {a1.data(), h_}, {g + off_w2_ + c * h_, h_});
            g[off_b2_ + c] += dz2[c];
            kernels::axpy(dz2[c], {w2 + c * h_, h_}, {da1.data(), h_});
        }
        for (size_t i = 0; i < h_; ++i) {
            if (a1[i] <= 0.0) continue;  // ReLU gate
            kernels::axpy(da1[i], x, {g + off_w1_ + i * d_, d_});
            g[off_b1_ + i] += da1[i];
        }
    }
    return loss;
}

void MlpModel::fit(const FeatureMatrix& X, const std::vector<int>& y) {
    constexpr int kEpochs = 200;
    constexpr size_t kBatch = 32;
    constexpr double kLr = 1e-3, kBeta1 = 0.9, kBeta2 = 0.999, kEps = 1e-8;

    const size_t n = X.rows();
    std::vector<double> m(params_.size(), 0.0), v(params_.size(), 0.0), grad;
    std::vector<size_t> order(n);
    for (size_t i = 0; i < n; ++i) order[i] = i;

    Rng shuffle_rng(mix_seed(seed_, hash_str("mlp-epochs")));
    double beta1_t = 1.0, beta2_t = 1.0;
    std::vector<size_t> batch;

    for (int epoch = 0; epoch < kEpochs; ++epoch) {
        shuffle_rng.shuffle(order);
        double epoch_loss = 0.0;
        size_t n_batches = 0;
        for (size_t start = 0; start < n; start += kBatch) {
            batch.assign(order.begin() + static_cast<long>(start),
                         order.begin() + static_cast<long>(std::min(n, start + kBatch)));
            epoch_loss += loss_and_grad(X, y, batch, &grad);
            ++n_batches;

            beta1_t *= kBeta1;
            beta2_t *= kBeta2;
            for (size_t i = 0; i < params_.size(); ++i) {
                m[i] = kBeta1 * m[i] + (1.0 - kBeta1) * grad[i];
                v[i] = kBeta2 * v[i] + (1.0 - kBeta2) * grad[i] * grad[i];
                const double mhat = m[i] / (1.0 - beta1_t);
                const double vhat = v[i] / (1.0 - beta2_t);
                params_[i] -= kLr * mhat / (std::sqrt(vhat) + kEps);
            }
        }
        epoch_loss /= static_cast<double>(n_batches);
        if (epoch == 0) first_epoch_loss_ = epoch_loss;
        if (epoch == kEpochs - 1) last_epoch_loss_ = epoch_loss;
    }
}

std::vector<int> MlpModel::do_predict(const FeatureMatrix& X) const {
    const double* w1 = params_.data() + off_w1_;
    const double* b1 = params_.data() + off_b1_;
    const double* w2 = params_.data() + off_w2_;
    const double* b2 = params_.data() + off_b2_;
    std::vector<int> out(X.rows());
    std::vector<double> a1(h_);
    for (size_t r = 0; r < X.rows(); ++r) {
        const auto x = X.row(r);
        for (size_t i = 0; i < h_; ++i) {
            const double z = kernels::dot({w1 + i * d_, d_}, x) + b1[i];
            a1[i] = z > 0.0 ? z : 0.0;
        }
        int best = 0;
        double best_z = -std::numeric_limits<double>::infinity();
        for (size_t c = 0; c < k_; ++c) {
            const double z = kernels::dot({w2 + c * h_, h_}, {a1.data(), h_}) + b2[c];
            if (z > best_z) {
                best_z = z;
                best = static_cast<int>(c);
            }
        }
        out[r] = best;
    }
    return out;
}

std::unique_ptr<Model> train(const Hyperparams& hp, const FeatureMatrix& X, uint64_t seed) {
    switch (hp.kind) {
        case ModelKind::DT: return std::make_unique<DtModel>(hp, X, seed);
        case ModelKind::KNN: return std::make_unique<KnnModel>(hp, X, seed);
        case ModelKind::MLP: return std::make_unique<MlpModel>(hp, X, seed);
        case ModelKind::RF: return std::make_unique<RfModel>(hp, X, seed);
    }
    throw UsageError("train: bad model kind");
}

std::vector<Hyperparams> hyperparam_grid(ModelKind kind) {
    std::vector<Hyperparams> grid;
    switch (kind) {
        case ModelKind::DT:
            for (auto crit : {SplitCriterion::gini, SplitCriterion::entropy})
                for (int depth = 3; depth <= 15; ++depth) {
                    Hyperparams hp;
                    hp.kind = kind;
                    hp.criterion = crit;
                    hp.max_depth = depth;
                    grid.push_back(hp);
                }
            break;
        case ModelKind::KNN:
            for (int k = 1; k <= 14; ++k)
                for (auto w : {KnnWeighting::uniform, KnnWeighting::distance}) {
                    Hyperparams hp;
                    hp.kind = kind;
                    hp.k = k;
                    hp.weighting = w;
                    grid.push_back(hp);
                }
            break;
        case ModelKind::MLP:
            for (int hidden : {50, 100}) {
                Hyperparams hp;
                hp.kind = kind;
                hp.hidden = hidden;
                grid.push_back(hp);
            }
            break;
        case ModelKind::RF:
            for (int est : {100, 200}) {
                Hyperparams hp;
                hp.kind = kind;
                hp.n_estimators = est;
                grid.push_back(hp);
            }
            break;
    }
    return grid;
}

}  // namespace voltspy
