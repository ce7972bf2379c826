#pragma once

#include <cstddef>
#include <memory>
#include <string>
#include <vector>

#include "gaitid/core/error.hpp"

namespace gaitid::autodiff {

// Dense row-major tensor, usually (n, c, h, w) or (n, d).
template <typename T>
struct Tensor {
  std::vector<int> dims;
  std::vector<T> data;

  Tensor() = default;
  explicit Tensor(std::vector<int> d, T fill = T(0)) : dims(std::move(d)) {
    std::size_t n = 1;
    for (int v : dims) {
      require(v > 0, "tensor", "dimensions must be positive");
      n *= static_cast<std::size_t>(v);
    }
    data.assign(n, fill);
  }

  std::size_t size() const { return data.size(); }
  int rank() const { return static_cast<int>(dims.size()); }
  int dim(int i) const { return dims[static_cast<std::size_t>(i)]; }
  bool empty() const { return data.empty(); }
  bool same_shape(const Tensor& o) const { return dims == o.dims; }

  T& operator[](std::size_t i) { return data[i]; }
  const T& operator[](std::size_t i) const { return data[i]; }
  T& at(int n, int c, int h, int w) {
    return data[((static_cast<std::size_t>(n) * dims[1] + c) * dims[2] + h) * dims[3] + w];
  }
  const T& at(int n, int c, int h, int w) const {
    return data[((static_cast<std::size_t>(n) * dims[1] + c) * dims[2] + h) * dims[3] + w];
  }
};

std::string shape_string(const std::vector<int>& dims);

template <typename T>
struct Parameter {
  std::string name;
  Tensor<T> value;
  Tensor<T> grad;
};

// Owns the trainable tensors of a model in registration order.
template <typename T>
class ParameterSet {
 public:
  Parameter<T>& add(std::string name, Tensor<T> value) {
    auto p = std::make_unique<Parameter<T>>();
    p->name = std::move(name);
    p->grad = Tensor<T>(value.dims);
    p->value = std::move(value);
    items_.push_back(std::move(p));
    return *items_.back();
  }

  std::size_t size() const { return items_.size(); }
  Parameter<T>& operator[](std::size_t i) { return *items_[i]; }
  const Parameter<T>& operator[](std::size_t i) const { return *items_[i]; }

  std::size_t count() const {
    std::size_t n = 0;
    for (const auto& p : items_) n += p->value.size();
    return n;
  }
  void zero_grad() {
    for (auto& p : items_) std::fill(p->grad.data.begin(), p->grad.data.end(), T(0));
  }

 private:
  std::vector<std::unique_ptr<Parameter<T>>> items_;
};

}  // namespace gaitid::autodiff
