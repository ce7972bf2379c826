#pragma once

#include "gaitid/autodiff/tensor.hpp"

// Direct-loop kernels used to cross-check the optimised ops.
namespace gaitid::autodiff::reference {

template <typename T>
Tensor<T> conv2d(const Tensor<T>& x, const Tensor<T>& w, const Tensor<T>& b, int stride, int padding);

// Gradients of sum(conv2d(x, w, b) * g_out) with respect to x, w and b.
template <typename T>
void conv2d_backward(const Tensor<T>& x, const Tensor<T>& w, const Tensor<T>& g_out, int stride, int padding,
                     Tensor<T>& g_x, Tensor<T>& g_w, Tensor<T>& g_b);

}  // namespace gaitid::autodiff::reference
