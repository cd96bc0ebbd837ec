#pragma once

#include <span>
#include <string>
#include <vector>

namespace scaladj {

/// Binary logistic regression fitted by Newton iterations on standardized
/// features, L2 penalty on the weights (not the intercept).
struct LogisticModel {
    std::vector<double> weights;       // in standardized feature space
    double intercept = 0.0;
    std::vector<double> feature_mean;
    std::vector<double> feature_std;   // constant features keep std = 1 and weight ~ 0
    std::vector<std::string> warnings;

    double predict_probability(std::span<const double> features) const;
    bool predict(std::span<const double> features) const {
        return predict_probability(features) >= 0.5;
    }
};

LogisticModel fit_logistic_regression(const std::vector<std::vector<double>>& features,
                                      const std::vector<bool>& labels, double l2 = 1.0,
                                      int max_iterations = 100, double tolerance = 1e-10);

}  // namespace scaladj
