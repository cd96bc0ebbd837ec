#include "scaladj/logistic_regression.hpp"

#include <cmath>

#include "scaladj/error.hpp"

namespace scaladj {

namespace {

double sigmoid(double z) { return 1.0 / (1.0 + std::exp(-z)); }

// Solves A x = b in place; A is small (features + intercept).
std::vector<double> solve_dense(std::vector<std::vector<double>> a, std::vector<double> b) {
    const std::size_t n = b.size();
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t pivot = col;
        for (std::size_t r = col + 1; r < n; ++r)
            if (std::abs(a[r][col]) > std::abs(a[pivot][col])) pivot = r;
        std::swap(a[col], a[pivot]);
        std::swap(b[col], b[pivot]);
        if (std::abs(a[col][col]) < 1e-12)
            throw ValidationError("logistic regression: singular normal equations");
        for (std::size_t r = 0; r < n; ++r) {
            if (r == col) continue;
            double f = a[r][col] / a[col][col];
            for (std::size_t c = col; c < n; ++c) a[r][c] -= f * a[col][c];
            b[r] -= f * b[col];
        }
    }
    std::vector<double> x(n);
    for (std::size_t i = 0; i < n; ++i) x[i] = b[i] / a[i][i];
    return x;
}

}  // namespace

double LogisticModel::predict_probability(std::span<const double> features) const {
    if (features.size() != weights.size())
        throw ValidationError("logistic regression: feature dimension mismatch");
    double z = intercept;
    for (std::size_t i = 0; i < weights.size(); ++i)
        z += weights[i] * (features[i] - feature_mean[i]) / feature_std[i];
    return sigmoid(z);
}

LogisticModel fit_logistic_regression(const std::vector<std::vector<double>>& features,
                                      const std::vector<bool>& labels, double l2,
                                      int max_iterations, double tolerance) {
    if (features.empty() || features.size() != labels.size())
        throw ValidationError("logistic regression: empty or mismatched training data");
    const std::size_t n = features.size();
    const std::size_t d = features.front().size();
    for (const auto& row : features)
        if (row.size() != d) throw ValidationError("logistic regression: ragged feature rows");

    std::size_t positives = 0;
    for (bool y : labels) positives += y ? 1 : 0;
    if (positives == 0 || positives == n)
        throw ValidationError("logistic regression: degenerate single-class training set");

    LogisticModel model;
    model.feature_mean.assign(d, 0.0);
    model.feature_std.assign(d, 1.0);
    for (std::size_t j = 0; j < d; ++j) {
        double m = 0.0;
        for (const auto& row : features) m += row[j];
        m /= static_cast<double>(n);
        double var = 0.0;
        for (const auto& row : features) var += (row[j] - m) * (row[j] - m);
        double sd = std::sqrt(var / static_cast<double>(n));
        model.feature_mean[j] = m;
        if (sd > 0.0) {
            model.feature_std[j] = sd;
        } else {
            model.warnings.push_back("feature " + std::to_string(j) +
                                     " is constant on the training set");
        }
    }

    // standardized design matrix with intercept column last
    std::vector<std::vector<double>> x(n, std::vector<double>(d + 1, 1.0));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < d; ++j)
            x[i][j] = (features[i][j] - model.feature_mean[j]) / model.feature_std[j];

    std::vector<double> beta(d + 1, 0.0);
    for (int iter = 0; iter < max_iterations; ++iter) {
        std::vector<double> grad(d + 1, 0.0);
        std::vector<std::vector<double>> hess(d + 1, std::vector<double>(d + 1, 0.0));
        for (std::size_t i = 0; i < n; ++i) {
            double z = 0.0;
            for (std::size_t j = 0; j <= d; ++j) z += beta[j] * x[i][j];
            double p = sigmoid(z);
            double err = p - (labels[i] ? 1.0 : 0.0);
            double s = std::max(p * (1.0 - p), 1e-12);
            for (std::size_t j = 0; j <= d; ++j) {
                grad[j] += err * x[i][j];
                for (std::size_t k = 0; k <= d; ++k) hess[j][k] += s * x[i][j] * x[i][k];
            }
        }
        for (std::size_t j = 0; j < d; ++j) {  // penalty on weights only
            grad[j] += l2 * beta[j];
            hess[j][j] += l2;
        }
        auto step = solve_dense(std::move(hess), grad);
        double max_step = 0.0;
        for (std::size_t j = 0; j <= d; ++j) {
            beta[j] -= step[j];
            max_step = std::max(max_step, std::abs(step[j]));
        }
        if (max_step < tolerance) break;
    }

    model.weights.assign(beta.begin(), beta.begin() + static_cast<std::ptrdiff_t>(d));
    model.intercept = beta[d];
    return model;
}

}  // namespace scaladj
