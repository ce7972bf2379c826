#pragma once

#include <vector>

#include "gaitid/autodiff/tape.hpp"

namespace gaitid::autodiff {

// x (n, c_in, h, w), w (c_out, c_in, k, k), b (c_out). Cross-correlation,
// evaluated as im2col followed by a matrix product.
template <typename T>
Var conv2d(Tape<T>& tape, Var x, Var w, Var b, int stride = 1, int padding = 0);

template <typename T>
Var relu(Tape<T>& tape, Var x);

// 2x2 max pooling, stride 2; output (h/2, w/2) rounded down.
template <typename T>
Var maxpool2(Tape<T>& tape, Var x);

// 3x3 average pooling, stride 1, zero padding 1, always divided by 9.
template <typename T>
Var avgpool3_s1(Tape<T>& tape, Var x);

template <typename T>
Var add(Tape<T>& tape, Var a, Var b);

// Concatenates (n, c_i, h, w) inputs along the channel axis, in order.
template <typename T>
Var concat_channels(Tape<T>& tape, const std::vector<Var>& xs);

// (n, ...) -> (n, prod(...))
template <typename T>
Var flatten(Tape<T>& tape, Var x);

// x (n, in), w (out, in), b (out) -> x w^T + b
template <typename T>
Var fc(Tape<T>& tape, Var x, Var w, Var b);

template <typename T>
Var sum(Tape<T>& tape, Var x);

// 0.5 * ||x||^2
template <typename T>
Var half_sq_norm(Tape<T>& tape, Var x);

}  // namespace gaitid::autodiff
