#include "voltspy/attacks.hpp"

#include <algorithm>
#include <map>
#include <set>

#include <nlohmann/json.hpp>

#include "voltspy/parallel.hpp"
#include "voltspy/rng.hpp"
#include "voltspy/shield.hpp"

namespace voltspy {

const char* objective_name(Objective o) {
    switch (o) {
        case Objective::style: return "style";
        case Objective::vehicle: return "vehicle";
        case Objective::occupancy: return "occupancy";
        case Objective::auxiliary: return "auxiliary";
        case Objective::driver: return "driver";
        case Objective::origin: return "origin";
        case Objective::destination: return "destination";
    }
    return "?";
}

Objective objective_from_name(const std::string& name) {
    for (Objective o : all_objectives())
        if (name == objective_name(o)) return o;
    throw UsageError("unknown objective '" + name + "'");
}

const std::vector<Objective>& all_objectives() {
    static const std::vector<Objective> v = {
        Objective::style,  Objective::vehicle, Objective::occupancy, Objective::auxiliary,
        Objective::driver, Objective::origin,  Objective::destination};
    return v;
}

AttackSpec canonical_spec(Objective objective, double region_fraction) {
    AttackSpec s;
    s.objective = objective;
    s.region_fraction = region_fraction;
    switch (objective) {
        case Objective::style:
            s.flow = FlowKind::per_sample;
            s.window = WindowSpec::per_sample();
            s.target_label = "style";
            break;
        case Objective::vehicle:
            s.flow = FlowKind::per_sample;
            s.window = WindowSpec::per_sample();
            s.target_label = "vehicle";
            break;
        case Objective::occupancy:
            s.flow = FlowKind::catalog;
            s.window = WindowSpec::full_trip();
            s.target_label = "occupancy";
            break;
        case Objective::auxiliary:
            s.flow = FlowKind::catalog;
            s.window = WindowSpec::full_trip();
            s.target_label = "aux_w";
            break;
        case Objective::driver:
            s.flow = FlowKind::catalog;
            s.window = WindowSpec::fixed(10);
            s.target_label = "driver";
            break;
        case Objective::origin:
            s.flow = FlowKind::catalog;
            s.window = WindowSpec::head(region_fraction, 5);
            s.target_label = "origin";
            break;
        case Objective::destination:
            s.flow = FlowKind::catalog;
            s.window = WindowSpec::tail(region_fraction, 5);
            s.target_label = "destination";
            break;
    }
    return s;
}

namespace {

// Stratified split keeping every window of a trip on one side.
std::pair<FeatureMatrix, FeatureMatrix> trip_level_split(const FeatureMatrix& rows, double ratio,
                                                         uint64_t seed) {
    std::vector<std::string> trip_order;
    std::map<std::string, std::string> trip_label;
    for (size_t i = 0; i < rows.rows(); ++i) {
        const auto& id = rows.origin[i].trip_id;
        if (!trip_label.count(id)) {
            trip_label[id] = rows.labels[i];
            trip_order.push_back(id);
        }
    }

    std::map<std::string, std::vector<size_t>> by_class;  // indices into trip_order
    for (size_t t = 0; t < trip_order.size(); ++t) by_class[trip_label[trip_order[t]]].push_back(t);

    std::set<std::string> test_trips;
    Rng rng(mix_seed(seed, hash_str("trip-split")));
    for (auto& [cls, idx] : by_class) {
        if (idx.size() < 2)
            throw DataError("attack split: class '" + cls + "' present in a single trip");
        const auto n_test =
            static_cast<size_t>(std::llround((1.0 - ratio) * static_cast<double>(idx.size())));
        rng.shuffle(idx);
        for (size_t k = 0; k < n_test; ++k) test_trips.insert(trip_order[idx[k]]);
    }

    std::vector<size_t> train_idx, test_idx;
    for (size_t i = 0; i < rows.rows(); ++i)
        (test_trips.count(rows.origin[i].trip_id) ? test_idx : train_idx).push_back(i);
    return {rows.take_rows(train_idx), rows.take_rows(test_idx)};
}

FeatureMatrix assemble_rows(const Dataset& ds, const AttackSpec& spec) {
    std::vector<std::string> missing;
    for (const auto& t : ds.trips)
        if (!t.labels.get(spec.target_label)) missing.push_back(t.trip_id);
    if (!missing.empty()) {
        std::string list;
        for (size_t i = 0; i < std::min<size_t>(missing.size(), 8); ++i) list += " " + missing[i];
        if (missing.size() > 8) list += " ...";
        throw DataError("attack '" + std::string(objective_name(spec.objective)) + "': " +
                        std::to_string(missing.size()) + " trips missing label '" +
                        spec.target_label + "':" + list);
    }

    const auto channels = ds.common_channels();
    std::vector<FeatureMatrix> parts(ds.trips.size());
    parallel_for(ds.trips.size(), [&](size_t i) {
        const Trip& t = ds.trips[i];
        FeatureMatrix m = spec.flow == FlowKind::per_sample
                              ? per_sample_matrix(t, channels)
                              : catalog_matrix(t, spec.window, channels);
        const std::string label = *t.labels.get(spec.target_label);
        for (auto& l : m.labels) l = label;
        parts[i] = std::move(m);
    });

    FeatureMatrix rows;
    rows.names = spec.flow == FlowKind::per_sample ? channels : catalog_column_names(channels);
    for (auto& p : parts) {
        rows.values.insert(rows.values.end(), p.values.begin(), p.values.end());
        rows.labels.insert(rows.labels.end(), p.labels.begin(), p.labels.end());
        rows.origin.insert(rows.origin.end(), p.origin.begin(), p.origin.end());
    }
    return rows;
}

}  // namespace

std::vector<AttackResult> run_attack_rows(FeatureMatrix rows, const AttackSpec& spec,
                                          const std::vector<ModelKind>& kinds,
                                          const AttackOptions& opt) {
    if (rows.rows() == 0) throw DataError("attack: no feature rows");
    const auto class_names = sorted_unique_labels(rows.labels);
    if (class_names.size() < 2)
        throw DataError("attack '" + std::string(objective_name(spec.objective)) +
                        "': target label has a single class");

    const size_t n_trips = [&] {
        std::set<std::string> ids;
        for (const auto& o : rows.origin) ids.insert(o.trip_id);
        return ids.size();
    }();
    const auto histogram = label_histogram(rows.labels);

    if (opt.row_cap > 0 && rows.rows() > opt.row_cap)
        rows = stratified_reduce(rows, opt.row_cap, mix_seed(opt.seed, hash_str("row-cap")));

    auto [train, test] = spec.flow == FlowKind::per_sample
                             ? split_train_test(rows, opt.train_ratio, opt.seed, true)
                             : trip_level_split(rows, opt.train_ratio, opt.seed);
    if (opt.balance) train = undersample_balance(train, mix_seed(opt.seed, hash_str("balance")));
    const auto train_histogram = label_histogram(train.labels);

    impute_fit_apply(train, {&test});
    const auto selector = FeatureSelector::fit(train);
    train = selector.apply(train);
    test = selector.apply(test);

    // KNN and MLP get standardized copies; trees use the raw features.
    FeatureMatrix train_std = train, test_std = test;
    standardize_fit_apply(train_std, {&test_std});

    std::vector<AttackResult> out;
    for (ModelKind kind : kinds) {
        const bool standardized = kind == ModelKind::KNN || kind == ModelKind::MLP;
        const FeatureMatrix& tr = standardized ? train_std : train;
        const FeatureMatrix& te = standardized ? test_std : test;

        auto gs = grid_search(kind, tr, mix_seed(opt.seed, hash_str(model_kind_name(kind))));
        const auto pred = gs.model->predict(te);

        AttackResult r;
        r.spec = spec;
        r.kind = kind;
        r.best = gs.best;
        r.report = evaluate(te.labels, pred, class_names);
        r.seed = opt.seed;
        r.trip_count = n_trips;
        r.class_histogram = histogram;
        r.train_histogram = train_histogram;
        out.push_back(std::move(r));
    }
    return out;
}

std::vector<AttackResult> run_attack(const Dataset& ds, const AttackSpec& spec,
                                     const std::vector<ModelKind>& kinds,
                                     const AttackOptions& opt) {
    return run_attack_rows(assemble_rows(ds, spec), spec, kinds, opt);
}

std::vector<std::pair<std::string, double>> permutation_importance(
    const Model& model, const FeatureMatrix& X_test, const std::vector<std::string>& y_test,
    int repeats, uint64_t seed) {
    if (repeats < 1) throw DataError("permutation_importance: repeats must be >= 1");

    auto accuracy_of = [&](const FeatureMatrix& X) {
        const auto pred = model.predict(X);
        size_t correct = 0;
        for (size_t i = 0; i < pred.size(); ++i)
            if (pred[i] == y_test[i]) ++correct;
        return static_cast<double>(correct) / static_cast<double>(pred.size());
    };
    const double baseline = accuracy_of(X_test);

    const size_t n = X_test.rows();
    std::vector<std::pair<std::string, double>> scores(X_test.cols());
    for (size_t f = 0; f < X_test.cols(); ++f) {
        double drop_sum = 0.0;
        for (int rep = 0; rep < repeats; ++rep) {
            Rng rng(mix_seed(mix_seed(seed, f), static_cast<uint64_t>(rep)));
            std::vector<size_t> perm(n);
            for (size_t i = 0; i < n; ++i) perm[i] = i;
            rng.shuffle(perm);
            FeatureMatrix shuffled = X_test;
            for (size_t i = 0; i < n; ++i) shuffled.at(i, f) = X_test.at(perm[i], f);
            drop_sum += baseline - accuracy_of(shuffled);
        }
        scores[f] = {X_test.names[f], drop_sum / repeats};
    }

    std::sort(scores.begin(), scores.end(), [](const auto& a, const auto& b) {
        return a.second != b.second ? a.second > b.second : a.first < b.first;
    });
    return scores;
}

std::string AttackResult::to_json() const {
    nlohmann::ordered_json j;
    j["objective"] = objective_name(spec.objective);
    j["flow"] = spec.flow == FlowKind::per_sample ? "per_sample" : "catalog";
    j["window"] = {{"mode", spec.window.mode_name()},
                   {"n", spec.window.n},
                   {"fraction", spec.window.fraction}};
    j["target_label"] = spec.target_label;
    j["region_fraction"] = spec.region_fraction;
    j["model_kind"] = model_kind_name(kind);
    nlohmann::ordered_json hp;
    switch (best.kind) {
        case ModelKind::DT:
            hp["criterion"] = best.criterion == SplitCriterion::gini ? "gini" : "entropy";
            hp["max_depth"] = best.max_depth;
            break;
        case ModelKind::KNN:
            hp["k"] = best.k;
            hp["weighting"] = best.weighting == KnnWeighting::uniform ? "uniform" : "distance";
            break;
        case ModelKind::MLP: hp["hidden"] = best.hidden; break;
        case ModelKind::RF:
            hp["criterion"] = "gini";
            hp["n_estimators"] = best.n_estimators;
            break;
    }
    j["best_hyperparams"] = hp;
    j["report"] = nlohmann::ordered_json::parse(report.to_json());
    j["seed"] = seed;
    nlohmann::ordered_json fp;
    fp["trip_count"] = trip_count;
    nlohmann::ordered_json hist;
    for (const auto& [label, count] : class_histogram) hist[label] = count;
    fp["class_histogram"] = hist;
    nlohmann::ordered_json thist;
    for (const auto& [label, count] : train_histogram) thist[label] = count;
    fp["train_histogram"] = thist;
    j["fingerprint"] = fp;
    return j.dump(2);
}

}  // namespace voltspy
