#include "gaitid/autodiff/reference.hpp"

namespace gaitid::autodiff::reference {

namespace {

struct Geom {
  int n, c, h, w, co, kh, kw, ho, wo;
};

template <typename T>
Geom geometry(const Tensor<T>& x, const Tensor<T>& w, int stride, int padding) {
  require(x.rank() == 4 && w.rank() == 4 && w.dim(1) == x.dim(1), "shape", "conv2d shape mismatch");
  Geom g{x.dim(0), x.dim(1), x.dim(2), x.dim(3), w.dim(0), w.dim(2), w.dim(3), 0, 0};
  g.ho = (g.h + 2 * padding - g.kh) / stride + 1;
  g.wo = (g.w + 2 * padding - g.kw) / stride + 1;
  return g;
}

}  // namespace

template <typename T>
Tensor<T> conv2d(const Tensor<T>& x, const Tensor<T>& w, const Tensor<T>& b, int stride, int padding) {
  const Geom g = geometry(x, w, stride, padding);
  Tensor<T> out({g.n, g.co, g.ho, g.wo});
  for (int n = 0; n < g.n; ++n)
    for (int o = 0; o < g.co; ++o)
      for (int y = 0; y < g.ho; ++y)
        for (int xx = 0; xx < g.wo; ++xx) {
          T acc = b[static_cast<std::size_t>(o)];
          for (int c = 0; c < g.c; ++c)
            for (int i = 0; i < g.kh; ++i)
              for (int j = 0; j < g.kw; ++j) {
                const int iy = y * stride - padding + i;
                const int ix = xx * stride - padding + j;
                if (iy >= 0 && iy < g.h && ix >= 0 && ix < g.w) acc += w.at(o, c, i, j) * x.at(n, c, iy, ix);
              }
          out.at(n, o, y, xx) = acc;
        }
  return out;
}

template <typename T>
void conv2d_backward(const Tensor<T>& x, const Tensor<T>& w, const Tensor<T>& g_out, int stride, int padding,
                     Tensor<T>& g_x, Tensor<T>& g_w, Tensor<T>& g_b) {
  const Geom g = geometry(x, w, stride, padding);
  g_x = Tensor<T>(x.dims);
  g_w = Tensor<T>(w.dims);
  g_b = Tensor<T>({g.co});
  for (int n = 0; n < g.n; ++n)
    for (int o = 0; o < g.co; ++o)
      for (int y = 0; y < g.ho; ++y)
        for (int xx = 0; xx < g.wo; ++xx) {
          const T go = g_out.at(n, o, y, xx);
          g_b[static_cast<std::size_t>(o)] += go;
          for (int c = 0; c < g.c; ++c)
            for (int i = 0; i < g.kh; ++i)
              for (int j = 0; j < g.kw; ++j) {
                const int iy = y * stride - padding + i;
                const int ix = xx * stride - padding + j;
                if (iy < 0 || iy >= g.h || ix < 0 || ix >= g.w) continue;
                g_w.at(o, c, i, j) += go * x.at(n, c, iy, ix);
                g_x.at(n, c, iy, ix) += go * w.at(o, c, i, j);
              }
        }
}

template Tensor<float> conv2d(const Tensor<float>&, const Tensor<float>&, const Tensor<float>&, int, int);
template Tensor<double> conv2d(const Tensor<double>&, const Tensor<double>&, const Tensor<double>&, int, int);
template void conv2d_backward(const Tensor<float>&, const Tensor<float>&, const Tensor<float>&, int, int,
                              Tensor<float>&, Tensor<float>&, Tensor<float>&);
template void conv2d_backward(const Tensor<double>&, const Tensor<double>&, const Tensor<double>&, int, int,
                              Tensor<double>&, Tensor<double>&, Tensor<double>&);

}  // namespace gaitid::autodiff::reference
