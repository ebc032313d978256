#include "socbench/tensor.hpp"

#include <cmath>
#include <numeric>

namespace soc {

namespace {

std::size_t shape_product(const std::vector<std::size_t>& shape) {
    return std::accumulate(shape.begin(), shape.end(), std::size_t{1},
                           std::multiplies<std::size_t>());
}

void check_rank(const std::vector<std::size_t>& shape) {
    if (shape.empty() || shape.size() > 3)
        throw Error(ErrorCode::ShapeMismatch, "tensor rank must be 1-3");
}

}  // namespace

Tensor::Tensor(std::vector<std::size_t> shape, double fill) : shape_(std::move(shape)) {
    check_rank(shape_);
    data_.assign(shape_product(shape_), fill);
}

Tensor::Tensor(std::vector<std::size_t> shape, std::vector<double> data)
    : shape_(std::move(shape)), data_(std::move(data)) {
    check_rank(shape_);
    if (data_.size() != shape_product(shape_))
        throw Error(ErrorCode::ShapeMismatch, "tensor data size does not match shape");
}

Tensor Tensor::reshaped(std::vector<std::size_t> shape) const {
    if (shape_product(shape) != data_.size())
        throw Error(ErrorCode::ShapeMismatch, "reshape changes element count");
    return Tensor(std::move(shape), data_);
}

bool Tensor::finite() const {
    for (double x : data_)
        if (!std::isfinite(x)) return false;
    return true;
}

Tensor reshape_input(const Matrix& x) {
    return Tensor({x.rows, 1, x.cols}, x.data);
}

Matrix flatten_to_matrix(const Tensor& t) {
    if (t.rank() == 2) return Matrix(t.dim(0), t.dim(1), t.data());
    if (t.rank() == 3 && t.dim(1) == 1) return Matrix(t.dim(0), t.dim(2), t.data());
    throw Error(ErrorCode::ShapeMismatch, "cannot flatten tensor of this shape");
}

}  // namespace soc
