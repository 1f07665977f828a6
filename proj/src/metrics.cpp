#include "voltspy/metrics.hpp"

#include <unordered_map>

#include <nlohmann/json.hpp>

namespace voltspy {

EvalReport evaluate(const std::vector<std::string>& y_true, const std::vector<std::string>& y_pred,
                    const std::vector<std::string>& class_names) {
    if (y_true.size() != y_pred.size())
        throw DataError("evaluate: y_true and y_pred lengths differ");
    if (y_true.empty()) throw DataError("evaluate: empty input");

    const size_t k = class_names.size();
    std::unordered_map<std::string, size_t> index;
    for (size_t c = 0; c < k; ++c) index[class_names[c]] = c;

    EvalReport r;
    r.classes = class_names;
    r.confusion.assign(k, std::vector<size_t>(k, 0));
    size_t correct = 0;
    for (size_t i = 0; i < y_true.size(); ++i) {
        auto it_t = index.find(y_true[i]);
        auto it_p = index.find(y_pred[i]);
        if (it_t == index.end() || it_p == index.end())
            throw DataError("evaluate: label not in class_names: " +
                            (it_t == index.end() ? y_true[i] : y_pred[i]));
        r.confusion[it_t->second][it_p->second] += 1;
        if (it_t->second == it_p->second) ++correct;
    }
    r.accuracy = static_cast<double>(correct) / static_cast<double>(y_true.size());

    r.precision.resize(k);
    r.recall.resize(k);
    r.f1.resize(k);
    double f1_sum = 0.0;
    for (size_t c = 0; c < k; ++c) {
        size_t tp = r.confusion[c][c];
        size_t fp = 0, fn = 0;
        for (size_t o = 0; o < k; ++o) {
            if (o == c) continue;
            fp += r.confusion[o][c];
            fn += r.confusion[c][o];
        }
        const double p = tp + fp == 0 ? 0.0 : static_cast<double>(tp) / static_cast<double>(tp + fp);
        const double rec =
            tp + fn == 0 ? 0.0 : static_cast<double>(tp) / static_cast<double>(tp + fn);
        const double f = p + rec == 0.0 ? 0.0 : 2.0 * p * rec / (p + rec);
        r.precision[c] = p;
        r.recall[c] = rec;
        r.f1[c] = f;
        f1_sum += f;
    }
    r.macro_f1 = k == 0 ? 0.0 : f1_sum / static_cast<double>(k);
    return r;
}

std::string EvalReport::to_json() const {
    nlohmann::ordered_json j;
    j["classes"] = classes;
    j["confusion"] = confusion;
    j["accuracy"] = accuracy;
    j["macro_f1"] = macro_f1;
    j["per_class"] = {{"precision", precision}, {"recall", recall}, {"f1", f1}};
    return j.dump(2);
}

}  // namespace voltspy
