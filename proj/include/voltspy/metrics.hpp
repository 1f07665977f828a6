#pragma once

#include <string>
#include <vector>

#include "voltspy/common.hpp"

namespace voltspy {

// Confusion matrix plus accuracy, macro-F1 and per-class precision/recall.
// Rows of `confusion` are true classes, columns predicted.
struct EvalReport {
    std::vector<std::string> classes;
    std::vector<std::vector<size_t>> confusion;
    double accuracy = 0.0;
    double macro_f1 = 0.0;
    std::vector<double> precision;
    std::vector<double> recall;
    std::vector<double> f1;

    std::string to_json() const;
};

// Metrics over all classes in class_names, including ones never seen;
// 0/0 ratios are defined as 0.
EvalReport evaluate(const std::vector<std::string>& y_true, const std::vector<std::string>& y_pred,
                    const std::vector<std::string>& class_names);

}  // namespace voltspy
