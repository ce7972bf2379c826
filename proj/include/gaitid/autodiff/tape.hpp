#pragma once

#include <functional>
#include <vector>

#include "gaitid/autodiff/tensor.hpp"
#include "gaitid/core/exec.hpp"

namespace gaitid::autodiff {

struct Var {
  int id = -1;
};

// Records one forward pass. backward() walks the nodes in reverse and
// accumulates gradients into inputs and, for parameter leaves, into the
// owning Parameter. A tape can be differentiated once per forward pass.
template <typename T>
class Tape {
 public:
  using Backward = std::function<void(Tape&, Var self)>;

  explicit Tape(Exec exec = Exec::parallel) : exec_(exec) {}

  Exec exec() const { return exec_; }
  // When set, every node value and gradient is checked for NaN/Inf.
  void set_check_finite(bool on) { check_finite_ = on; }

  Var leaf(Tensor<T> value, bool requires_grad = false);
  Var param(Parameter<T>& p);
  Var push(Tensor<T> value, const std::vector<Var>& inputs, Backward backward);

  const Tensor<T>& value(Var v) const { return nodes_[static_cast<std::size_t>(v.id)].value; }
  bool needs_grad(Var v) const { return nodes_[static_cast<std::size_t>(v.id)].needs_grad; }
  // Gradient buffer of a node, allocated as zeros on first access.
  Tensor<T>& grad(Var v);

  void backward(Var loss);
  void clear();
  std::size_t size() const { return nodes_.size(); }

 private:
  struct Node {
    Tensor<T> value;
    Tensor<T> grad;
    Backward backward;
    Parameter<T>* param = nullptr;
    bool needs_grad = false;
  };
  void check(const Tensor<T>& t, const char* what) const;

  Exec exec_;
  bool check_finite_ = true;
  bool consumed_ = false;
  std::vector<Node> nodes_;
};

}  // namespace gaitid::autodiff
