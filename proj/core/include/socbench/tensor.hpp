#pragma once

#include <cstddef>
#include <vector>

#include "socbench/errors.hpp"
#include "socbench/matrix.hpp"

namespace soc {

/// Dense row-major numeric array of rank 1-3.
class Tensor {
  public:
    Tensor() = default;
    Tensor(std::vector<std::size_t> shape, double fill = 0.0);
    Tensor(std::vector<std::size_t> shape, std::vector<double> data);

    const std::vector<std::size_t>& shape() const { return shape_; }
    std::size_t rank() const { return shape_.size(); }
    std::size_t size() const { return data_.size(); }
    std::size_t dim(std::size_t i) const { return shape_[i]; }

    std::vector<double>& data() { return data_; }
    const std::vector<double>& data() const { return data_; }

    double& operator[](std::size_t i) { return data_[i]; }
    double operator[](std::size_t i) const { return data_[i]; }

    double& at(std::size_t i, std::size_t j) { return data_[i * shape_[1] + j]; }
    double at(std::size_t i, std::size_t j) const { return data_[i * shape_[1] + j]; }
    double& at(std::size_t i, std::size_t j, std::size_t k) {
        return data_[(i * shape_[1] + j) * shape_[2] + k];
    }
    double at(std::size_t i, std::size_t j, std::size_t k) const {
        return data_[(i * shape_[1] + j) * shape_[2] + k];
    }

    /// Same data, new shape (product must match).
    Tensor reshaped(std::vector<std::size_t> shape) const;

    bool finite() const;

    bool operator==(const Tensor& other) const = default;

  private:
    std::vector<std::size_t> shape_;
    std::vector<double> data_;
};

/// (batch, features) -> (batch, 1, features); values unchanged.
Tensor reshape_input(const Matrix& x);

/// Inverse of reshape_input for seq-length-1 tensors.
Matrix flatten_to_matrix(const Tensor& t);

}  // namespace soc
