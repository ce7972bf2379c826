#include "gaitid/autodiff/tape.hpp"

#include <cmath>
#include <sstream>

namespace gaitid::autodiff {

std::string shape_string(const std::vector<int>& dims) {
  std::ostringstream s;
  s << '(';
  for (std::size_t i = 0; i < dims.size(); ++i) s << (i ? ", " : "") << dims[i];
  s << ')';
  return s.str();
}

template <typename T>
void Tape<T>::check(const Tensor<T>& t, const char* what) const {
  if (!check_finite_) return;
  for (const T v : t.data) {
    if (!std::isfinite(v)) throw ValidationError("autodiff", std::string("non-finite ") + what);
  }
}

template <typename T>
Var Tape<T>::leaf(Tensor<T> value, bool requires_grad) {
  check(value, "input");
  Node n;
  n.value = std::move(value);
  n.needs_grad = requires_grad;
  nodes_.push_back(std::move(n));
  consumed_ = false;
  return {static_cast<int>(nodes_.size()) - 1};
}

template <typename T>
Var Tape<T>::param(Parameter<T>& p) {
  Node n;
  n.value = p.value;
  n.param = &p;
  n.needs_grad = true;
  nodes_.push_back(std::move(n));
  consumed_ = false;
  return {static_cast<int>(nodes_.size()) - 1};
}

template <typename T>
Var Tape<T>::push(Tensor<T> value, const std::vector<Var>& inputs, Backward backward) {
  check(value, "activation");
  Node n;
  n.value = std::move(value);
  for (Var v : inputs) n.needs_grad = n.needs_grad || needs_grad(v);
  if (n.needs_grad) n.backward = std::move(backward);
  nodes_.push_back(std::move(n));
  consumed_ = false;
  return {static_cast<int>(nodes_.size()) - 1};
}

template <typename T>
Tensor<T>& Tape<T>::grad(Var v) {
  Node& n = nodes_[static_cast<std::size_t>(v.id)];
  if (n.grad.empty()) n.grad = Tensor<T>(n.value.dims);
  return n.grad;
}

template <typename T>
void Tape<T>::backward(Var loss) {
  require(loss.id >= 0 && static_cast<std::size_t>(loss.id) < nodes_.size(), "backward", "unknown loss node");
  require(!consumed_, "backward", "already ran for this forward pass");
  require(value(loss).size() == 1, "loss", "must be a scalar, got " + shape_string(value(loss).dims));
  consumed_ = true;
  grad(loss)[0] = T(1);
  for (int i = loss.id; i >= 0; --i) {
    Node& n = nodes_[static_cast<std::size_t>(i)];
    if (!n.needs_grad || n.grad.empty()) continue;
    check(n.grad, "gradient");
    if (n.backward) n.backward(*this, Var{i});
    if (n.param) {
      auto& g = n.param->grad.data;
      for (std::size_t k = 0; k < g.size(); ++k) g[k] += n.grad.data[k];
    }
  }
}

template <typename T>
void Tape<T>::clear() {
  nodes_.clear();
  consumed_ = false;
}

template class Tape<float>;
template class Tape<double>;

}  // namespace gaitid::autodiff
