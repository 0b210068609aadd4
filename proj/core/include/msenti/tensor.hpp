// Copyright 2026 The msenti Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//    http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef MSENTI_TENSOR_HPP
#define MSENTI_TENSOR_HPP

#include <cassert>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace msenti::nn {

using Shape = std::vector<std::size_t>;

std::size_t shape_size(const Shape& shape);
std::string shape_string(const Shape& shape);

/// Dense row-major array of doubles with an explicit shape.
class Tensor {
public:
    Tensor() = default;
    explicit Tensor(Shape shape, double fill = 0.0);
    Tensor(Shape shape, std::vector<double> data);

    const Shape& shape() const { return shape_; }
    std::size_t rank() const { return shape_.size(); }
    std::size_t dim(std::size_t axis) const { return shape_.at(axis); }
    std::size_t size() const { return data_.size(); }
    bool empty() const { return data_.empty(); }

    std::span<double> data() { return data_; }
    std::span<const double> data() const { return data_; }
    double* raw() { return data_.data(); }
    const double* raw() const { return data_.data(); }

    double& operator[](std::size_t i) { return data_[i]; }
    double operator[](std::size_t i) const { return data_[i]; }

    double& operator()(std::size_t i, std::size_t j) {
        assert(rank() == 2);
        return data_[i * shape_[1] + j];
    }
    double operator()(std::size_t i, std::size_t j) const {
        assert(rank() == 2);
        return data_[i * shape_[1] + j];
    }
    double& operator()(std::size_t i, std::size_t j, std::size_t k) {
        assert(rank() == 3);
        return data_[(i * shape_[1] + j) * shape_[2] + k];
    }
    double operator()(std::size_t i, std::size_t j, std::size_t k) const {
        assert(rank() == 3);
        return data_[(i * shape_[1] + j) * shape_[2] + k];
    }

    /// Row i of a rank-2 tensor.
    std::span<double> row(std::size_t i) { return {data_.data() + i * shape_[1], shape_[1]}; }
    std::span<const double> row(std::size_t i) const {
        return {data_.data() + i * shape_[1], shape_[1]};
    }

    void fill(double value);
    void set_zero() { fill(0.0); }
    bool all_finite() const;

    /// Same shape and bit-identical values.
    friend bool operator==(const Tensor& a, const Tensor& b);

private:
    Shape shape_;
    std::vector<double> data_;
};

} // namespace msenti::nn

#endif // MSENTI_TENSOR_HPP
