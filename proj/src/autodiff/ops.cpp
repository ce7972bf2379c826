#include "gaitid/autodiff/ops.hpp"

#include <Eigen/Core>
#include <algorithm>
#include <cstdint>
#include <memory>

namespace gaitid::autodiff {

namespace {

template <typename T>
using Mat = Eigen::Matrix<T, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
template <typename T>
using MapM = Eigen::Map<Mat<T>>;
template <typename T>
using MapC = Eigen::Map<const Mat<T>>;

void require_rank(const std::vector<int>& dims, int rank, const char* op) {
  require(static_cast<int>(dims.size()) == rank, "shape",
          std::string(op) + " expects rank " + std::to_string(rank) + ", got " + shape_string(dims));
}

struct ConvGeom {
  int n, c, h, w, co, kh, kw, ho, wo, stride, pad;
  std::int64_t rows() const { return static_cast<std::int64_t>(c) * kh * kw; }
  std::int64_t cols() const { return static_cast<std::int64_t>(n) * ho * wo; }
};

template <typename T>
void im2col(const T* x, const ConvGeom& g, T* cols, bool parallel) {
  const std::int64_t np = g.cols();
  const std::int64_t plane = static_cast<std::int64_t>(g.ho) * g.wo;
#pragma omp parallel for schedule(static) if (parallel)
  for (std::int64_t r = 0; r < g.rows(); ++r) {
    const int c = static_cast<int>(r / (g.kh * g.kw));
    const int i = static_cast<int>(r / g.kw % g.kh);
    const int j = static_cast<int>(r % g.kw);
    T* dst = cols + r * np;
    for (int n = 0; n < g.n; ++n) {
      const T* src = x + (static_cast<std::int64_t>(n) * g.c + c) * g.h * g.w;
      for (int oy = 0; oy < g.ho; ++oy) {
        const int y = oy * g.stride - g.pad + i;
        T* row = dst + n * plane + static_cast<std::int64_t>(oy) * g.wo;
        if (y < 0 || y >= g.h) {
          std::fill(row, row + g.wo, T(0));
          continue;
        }
        for (int ox = 0; ox < g.wo; ++ox) {
          const int xx = ox * g.stride - g.pad + j;
          row[ox] = (xx >= 0 && xx < g.w) ? src[y * g.w + xx] : T(0);
        }
      }
    }
  }
}

// Scatter-add of column gradients back to the input; each thread owns whole
// channels so the accumulation order is fixed.
template <typename T>
void col2im(const T* cols, const ConvGeom& g, T* gx, bool parallel) {
  const std::int64_t np = g.cols();
  const std::int64_t plane = static_cast<std::int64_t>(g.ho) * g.wo;
#pragma omp parallel for schedule(static) if (parallel)
  for (int c = 0; c < g.c; ++c) {
    for (int i = 0; i < g.kh; ++i) {
      for (int j = 0; j < g.kw; ++j) {
        const T* src = cols + ((static_cast<std::int64_t>(c) * g.kh + i) * g.kw + j) * np;
        for (int n = 0; n < g.n; ++n) {
          T* dst = gx + (static_cast<std::int64_t>(n) * g.c + c) * g.h * g.w;
          for (int oy = 0; oy < g.ho; ++oy) {
            const int y = oy * g.stride - g.pad + i;
            if (y < 0 || y >= g.h) continue;
            const T* row = src + n * plane + static_cast<std::int64_t>(oy) * g.wo;
            for (int ox = 0; ox < g.wo; ++ox) {
              const int xx = ox * g.stride - g.pad + j;
              if (xx >= 0 && xx < g.w) dst[y * g.w + xx] += row[ox];
            }
          }
        }
      }
    }
  }
}

}  // namespace

template <typename T>
Var conv2d(Tape<T>& tape, Var x, Var w, Var b, int stride, int padding) {
  const auto& xv = tape.value(x);
  const auto& wv = tape.value(w);
  const auto& bv = tape.value(b);
  require_rank(xv.dims, 4, "conv2d input");
  require_rank(wv.dims, 4, "conv2d weight");
  require(stride >= 1 && padding >= 0, "conv2d", "stride must be positive and padding non-negative");
  require(wv.dim(1) == xv.dim(1), "shape",
          "conv2d weight " + shape_string(wv.dims) + " does not match input " + shape_string(xv.dims));
  require(bv.rank() == 1 && bv.dim(0) == wv.dim(0), "shape", "conv2d bias must have c_out entries");
  ConvGeom g{xv.dim(0), xv.dim(1), xv.dim(2), xv.dim(3), wv.dim(0), wv.dim(2), wv.dim(3), 0, 0, stride, padding};
  g.ho = (g.h + 2 * padding - g.kh) / stride + 1;
  g.wo = (g.w + 2 * padding - g.kw) / stride + 1;
  require(g.ho > 0 && g.wo > 0, "shape", "conv2d kernel larger than padded input");
  const bool par = tape.exec() == Exec::parallel;

  auto cols = std::make_shared<std::vector<T>>(static_cast<std::size_t>(g.rows() * g.cols()));
  im2col(xv.data.data(), g, cols->data(), par);
  Mat<T> y = MapC<T>(wv.data.data(), g.co, g.rows()) * MapC<T>(cols->data(), g.rows(), g.cols());

  Tensor<T> out({g.n, g.co, g.ho, g.wo});
  const std::int64_t plane = static_cast<std::int64_t>(g.ho) * g.wo;
#pragma omp parallel for schedule(static) if (par)
  for (std::int64_t nc = 0; nc < static_cast<std::int64_t>(g.n) * g.co; ++nc) {
    const std::int64_t n = nc / g.co;
    const std::int64_t co = nc % g.co;
    const T* src = y.data() + co * g.cols() + n * plane;
    T* dst = out.data.data() + nc * plane;
    for (std::int64_t p = 0; p < plane; ++p) dst[p] = src[p] + bv[static_cast<std::size_t>(co)];
  }

  return tape.push(std::move(out), {x, w, b}, [x, w, b, g, cols, par](Tape<T>& t, Var self) {
    const auto& go = t.grad(self);
    const std::int64_t plane = static_cast<std::int64_t>(g.ho) * g.wo;
    Mat<T> gy(g.co, g.cols());
#pragma omp parallel for schedule(static) if (par)
    for (std::int64_t nc = 0; nc < static_cast<std::int64_t>(g.n) * g.co; ++nc) {
      const std::int64_t n = nc / g.co;
      const std::int64_t co = nc % g.co;
      std::copy_n(go.data.data() + nc * plane, plane, gy.data() + co * g.cols() + n * plane);
    }
    if (t.needs_grad(w)) {
      MapM<T>(t.grad(w).data.data(), g.co, g.rows()).noalias() +=
          gy * MapC<T>(cols->data(), g.rows(), g.cols()).transpose();
    }
    if (t.needs_grad(b)) {
      auto& gb = t.grad(b);
      for (int co = 0; co < g.co; ++co) {
        T s = 0;
        const T* row = gy.data() + static_cast<std::int64_t>(co) * g.cols();
        for (std::int64_t k = 0; k < g.cols(); ++k) s += row[k];
        gb[static_cast<std::size_t>(co)] += s;
      }
    }
    if (t.needs_grad(x)) {
      Mat<T> gcols = MapC<T>(t.value(w).data.data(), g.co, g.rows()).transpose() * gy;
      col2im(gcols.data(), g, t.grad(x).data.data(), par);
    }
  });
}

template <typename T>
Var relu(Tape<T>& tape, Var x) {
  const auto& xv = tape.value(x);
  Tensor<T> out(xv.dims);
  for (std::size_t i = 0; i < xv.size(); ++i) out[i] = xv[i] > T(0) ? xv[i] : T(0);
  return tape.push(std::move(out), {x}, [x](Tape<T>& t, Var self) {
    const auto& go = t.grad(self);
    const auto& xv = t.value(x);
    auto& gx = t.grad(x);
    for (std::size_t i = 0; i < gx.size(); ++i) {
      if (xv[i] > T(0)) gx[i] += go[i];
    }
  });
}

template <typename T>
Var maxpool2(Tape<T>& tape, Var x) {
  const auto& xv = tape.value(x);
  require_rank(xv.dims, 4, "maxpool2");
  const int n = xv.dim(0), c = xv.dim(1), h = xv.dim(2), w = xv.dim(3);
  require(h >= 2 && w >= 2, "shape", "maxpool2 needs at least 2x2 input, got " + shape_string(xv.dims));
  const int ho = h / 2, wo = w / 2;
  Tensor<T> out({n, c, ho, wo});
  auto arg = std::make_shared<std::vector<std::int64_t>>(out.size());
  const bool par = tape.exec() == Exec::parallel;
#pragma omp parallel for schedule(static) if (par)
  for (std::int64_t nc = 0; nc < static_cast<std::int64_t>(n) * c; ++nc) {
    const std::int64_t in_base = nc * h * w;
    for (int y = 0; y < ho; ++y) {
      for (int xx = 0; xx < wo; ++xx) {
        std::int64_t best = in_base + static_cast<std::int64_t>(2 * y) * w + 2 * xx;
        for (int dy = 0; dy < 2; ++dy) {
          for (int dx = 0; dx < 2; ++dx) {
            const std::int64_t k = in_base + static_cast<std::int64_t>(2 * y + dy) * w + 2 * xx + dx;
            if (xv.data[static_cast<std::size_t>(k)] > xv.data[static_cast<std::size_t>(best)]) best = k;
          }
        }
        const std::int64_t o = (nc * ho + y) * wo + xx;
        out.data[static_cast<std::size_t>(o)] = xv.data[static_cast<std::size_t>(best)];
        (*arg)[static_cast<std::size_t>(o)] = best;
      }
    }
  }
  return tape.push(std::move(out), {x}, [x, arg](Tape<T>& t, Var self) {
    const auto& go = t.grad(self);
    auto& gx = t.grad(x);
    for (std::size_t o = 0; o < go.size(); ++o) gx.data[static_cast<std::size_t>((*arg)[o])] += go[o];
  });
}

namespace {

template <typename T>
void box3(const T* src, T* dst, int planes, int h, int w, bool accumulate, bool parallel) {
  const T ninth = T(1) / T(9);
#pragma omp parallel for schedule(static) if (parallel)
  for (int p = 0; p < planes; ++p) {
    const T* s = src + static_cast<std::int64_t>(p) * h * w;
    T* d = dst + static_cast<std::int64_t>(p) * h * w;
    for (int y = 0; y < h; ++y) {
      for (int x = 0; x < w; ++x) {
        T acc = 0;
        for (int dy = -1; dy <= 1; ++dy) {
          const int yy = y + dy;
          if (yy < 0 || yy >= h) continue;
          for (int dx = -1; dx <= 1; ++dx) {
            const int xx = x + dx;
            if (xx >= 0 && xx < w) acc += s[yy * w + xx];
          }
        }
        if (accumulate) {
          d[y * w + x] += acc * ninth;
        } else {
          d[y * w + x] = acc * ninth;
        }
      }
    }
  }
}

}  // namespace

template <typename T>
Var avgpool3_s1(Tape<T>& tape, Var x) {
  const auto& xv = tape.value(x);
  require_rank(xv.dims, 4, "avgpool3_s1");
  const int planes = xv.dim(0) * xv.dim(1), h = xv.dim(2), w = xv.dim(3);
  const bool par = tape.exec() == Exec::parallel;
  Tensor<T> out(xv.dims);
  box3(xv.data.data(), out.data.data(), planes, h, w, false, par);
  // The zero-padded box filter is symmetric, so its adjoint is itself.
  return tape.push(std::move(out), {x}, [x, planes, h, w, par](Tape<T>& t, Var self) {
    box3(t.grad(self).data.data(), t.grad(x).data.data(), planes, h, w, true, par);
  });
}

template <typename T>
Var add(Tape<T>& tape, Var a, Var b) {
  const auto& av = tape.value(a);
  const auto& bv = tape.value(b);
  require(av.same_shape(bv), "shape", "add of " + shape_string(av.dims) + " and " + shape_string(bv.dims));
  Tensor<T> out(av.dims);
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = av[i] + bv[i];
  return tape.push(std::move(out), {a, b}, [a, b](Tape<T>& t, Var self) {
    const auto& go = t.grad(self);
    for (Var v : {a, b}) {
      if (!t.needs_grad(v)) continue;
      auto& g = t.grad(v);
      for (std::size_t i = 0; i < g.size(); ++i) g[i] += go[i];
    }
  });
}

template <typename T>
Var concat_channels(Tape<T>& tape, const std::vector<Var>& xs) {
  require(!xs.empty(), "concat", "needs at least one input");
  const auto& first = tape.value(xs.front());
  require_rank(first.dims, 4, "concat_channels");
  int total = 0;
  for (Var v : xs) {
    const auto& d = tape.value(v).dims;
    require(d.size() == 4 && d[0] == first.dim(0) && d[2] == first.dim(2) && d[3] == first.dim(3), "shape",
            "concat_channels of " + shape_string(first.dims) + " and " + shape_string(d));
    total += d[1];
  }
  const int n = first.dim(0);
  const std::int64_t plane = static_cast<std::int64_t>(first.dim(2)) * first.dim(3);
  Tensor<T> out({n, total, first.dim(2), first.dim(3)});
  int offset = 0;
  for (Var v : xs) {
    const auto& xv = tape.value(v);
    const int c = xv.dim(1);
    for (int i = 0; i < n; ++i) {
      std::copy_n(xv.data.data() + static_cast<std::int64_t>(i) * c * plane, c * plane,
                  out.data.data() + (static_cast<std::int64_t>(i) * total + offset) * plane);
    }
    offset += c;
  }
  return tape.push(std::move(out), xs, [xs, n, total, plane](Tape<T>& t, Var self) {
    const auto& go = t.grad(self);
    int offset = 0;
    for (Var v : xs) {
      const int c = t.value(v).dim(1);
      if (t.needs_grad(v)) {
        auto& g = t.grad(v);
        for (int i = 0; i < n; ++i) {
          const T* src = go.data.data() + (static_cast<std::int64_t>(i) * total + offset) * plane;
          T* dst = g.data.data() + static_cast<std::int64_t>(i) * c * plane;
          for (std::int64_t k = 0; k < c * plane; ++k) dst[k] += src[k];
        }
      }
      offset += c;
    }
  });
}

template <typename T>
Var flatten(Tape<T>& tape, Var x) {
  const auto& xv = tape.value(x);
  require(xv.rank() >= 2, "shape", "flatten needs rank >= 2");
  Tensor<T> out({xv.dim(0), static_cast<int>(xv.size() / xv.dim(0))});
  out.data = xv.data;
  return tape.push(std::move(out), {x}, [x](Tape<T>& t, Var self) {
    const auto& go = t.grad(self);
    auto& g = t.grad(x);
    for (std::size_t i = 0; i < g.size(); ++i) g[i] += go[i];
  });
}

template <typename T>
Var fc(Tape<T>& tape, Var x, Var w, Var b) {
  const auto& xv = tape.value(x);
  const auto& wv = tape.value(w);
  const auto& bv = tape.value(b);
  require_rank(xv.dims, 2, "fc input");
  require_rank(wv.dims, 2, "fc weight");
  require(wv.dim(1) == xv.dim(1), "shape", "fc weight " + shape_string(wv.dims) + " vs input " + shape_string(xv.dims));
  require(bv.rank() == 1 && bv.dim(0) == wv.dim(0), "shape", "fc bias must have one entry per output");
  const int n = xv.dim(0), in = xv.dim(1), out_dim = wv.dim(0);
  Tensor<T> out({n, out_dim});
  MapM<T> y(out.data.data(), n, out_dim);
  y.noalias() = MapC<T>(xv.data.data(), n, in) * MapC<T>(wv.data.data(), out_dim, in).transpose();
  for (int i = 0; i < n; ++i) {
    for (int o = 0; o < out_dim; ++o) y(i, o) += bv[static_cast<std::size_t>(o)];
  }
  return tape.push(std::move(out), {x, w, b}, [x, w, b, n, in, out_dim](Tape<T>& t, Var self) {
    MapC<T> gy(t.grad(self).data.data(), n, out_dim);
    if (t.needs_grad(x)) {
      MapM<T>(t.grad(x).data.data(), n, in).noalias() += gy * MapC<T>(t.value(w).data.data(), out_dim, in);
    }
    if (t.needs_grad(w)) {
      MapM<T>(t.grad(w).data.data(), out_dim, in).noalias() += gy.transpose() * MapC<T>(t.value(x).data.data(), n, in);
    }
    if (t.needs_grad(b)) {
      auto& gb = t.grad(b);
      for (int o = 0; o < out_dim; ++o) {
        T s = 0;
        for (int i = 0; i < n; ++i) s += gy(i, o);
        gb[static_cast<std::size_t>(o)] += s;
      }
    }
  });
}

template <typename T>
Var sum(Tape<T>& tape, Var x) {
  const auto& xv = tape.value(x);
  Tensor<T> out({1});
  for (const T v : xv.data) out[0] += v;
  return tape.push(std::move(out), {x}, [x](Tape<T>& t, Var self) {
    const T g0 = t.grad(self)[0];
    auto& g = t.grad(x);
    for (auto& v : g.data) v += g0;
  });
}

template <typename T>
Var half_sq_norm(Tape<T>& tape, Var x) {
  const auto& xv = tape.value(x);
  Tensor<T> out({1});
  for (const T v : xv.data) out[0] += v * v;
  out[0] *= T(0.5);
  return tape.push(std::move(out), {x}, [x](Tape<T>& t, Var self) {
    const T g0 = t.grad(self)[0];
    const auto& xv = t.value(x);
    auto& g = t.grad(x);
    for (std::size_t i = 0; i < g.size(); ++i) g[i] += g0 * xv[i];
  });
}

#define GAITID_INSTANTIATE(T)                                                   \
  template Var conv2d<T>(Tape<T>&, Var, Var, Var, int, int);                    \
  template Var relu<T>(Tape<T>&, Var);                                          \
  template Var maxpool2<T>(Tape<T>&, Var);                                      \
  template Var avgpool3_s1<T>(Tape<T>&, Var);                                   \
  template Var add<T>(Tape<T>&, Var, Var);                                      \
  template Var concat_channels<T>(Tape<T>&, const std::vector<Var>&);           \
  template Var flatten<T>(Tape<T>&, Var);                                       \
  template Var fc<T>(Tape<T>&, Var, Var, Var);                                  \
  template Var sum<T>(Tape<T>&, Var);                                           \
  template Var half_sq_norm<T>(Tape<T>&, Var);

GAITID_INSTANTIATE(float)
GAITID_INSTANTIATE(double)
#undef GAITID_INSTANTIATE

}  // namespace gaitid::autodiff
