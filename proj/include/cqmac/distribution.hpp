#pragma once

#include <cmath>
#include <cstddef>
#include <numeric>
#include <string>
#include <vector>

#include "cqmac/errors.hpp"
#include "cqmac/tolerances.hpp"

namespace cqmac {

// Probability distribution over an index set 0..n-1.
class Distribution {
public:
    explicit Distribution(std::vector<double> weights) : w_(std::move(weights)) {
        if (w_.empty()) throw validation_error("distribution over empty set");
        double sum = 0.0;
        for (double& x : w_) {
            if (x < 0.0) {
                if (x < -tolerances().distribution) throw validation_error("negative probability");
                x = 0.0;
            }
            sum += x;
        }
        if (std::abs(sum - 1.0) > tolerances().distribution)
            throw validation_error("distribution not normalized (sum " + std::to_string(sum) + ")");
    }

    static Distribution uniform(std::size_t n) {
        return Distribution(std::vector<double>(n, 1.0 / static_cast<double>(n)));
    }

    static Distribution point_mass(std::size_t n, std::size_t i) {
        std::vector<double> w(n, 0.0);
        w.at(i) = 1.0;
        return Distribution(std::move(w));
    }

    std::size_t size() const { return w_.size(); }
    double operator[](std::size_t i) const { return w_[i]; }
    const std::vector<double>& weights() const { return w_; }

private:
    std::vector<double> w_;
};

// Joint distribution on a product of two index sets, row-major.
class JointDistribution {
public:
    JointDistribution(std::size_t rows, std::size_t cols, std::vector<double> weights)
        : rows_(rows), cols_(cols), w_(std::move(weights)) {
        if (rows_ == 0 || cols_ == 0 || w_.size() != rows_ * cols_)
            throw validation_error("joint distribution shape mismatch");
        double sum = 0.0;
        for (double& x : w_) {
            if (x < 0.0) {
                if (x < -tolerances().distribution) throw validation_error("negative joint probability");
                x = 0.0;
            }
            sum += x;
        }
        if (std::abs(sum - 1.0) > tolerances().distribution)
            throw validation_error("joint distribution not normalized");
    }

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    double operator()(std::size_t i, std::size_t j) const { return w_[i * cols_ + j]; }

    std::vector<double> row_marginal() const {
        std::vector<double> m(rows_, 0.0);
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t j = 0; j < cols_; ++j) m[i] += (*this)(i, j);
        return m;
    }

    std::vector<double> col_marginal() const {
        std::vector<double> m(cols_, 0.0);
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t j = 0; j < cols_; ++j) m[j] += (*this)(i, j);
        return m;
    }

    const std::vector<double>& weights() const { return w_; }

private:
    std::size_t rows_, cols_;
    std::vector<double> w_;
};

} // namespace cqmac
