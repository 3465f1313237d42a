#include "nn_ops.hpp"

#include <cmath>

namespace hdasc {

Tensor add(const Tensor& a, const Tensor& b) {
    require_same_shape(a, b, "add");
    Tensor out(a.shape());
    for (size_t i = 0; i < a.numel(); ++i) out[i] = a[i] + b[i];
    return out;
}

Tensor sub(const Tensor& a, const Tensor& b) {
    require_same_shape(a, b, "sub");
    Tensor out(a.shape());
    for (size_t i = 0; i < a.numel(); ++i) out[i] = a[i] - b[i];
    return out;
}

Tensor mul(const Tensor& a, const Tensor& b) {
    require_same_shape(a, b, "mul");
    Tensor out(a.shape());
    for (size_t i = 0; i < a.numel(); ++i) out[i] = a[i] * b[i];
    return out;
}

Tensor scale(const Tensor& a, double s) {
    Tensor out(a.shape());
    for (size_t i = 0; i < a.numel(); ++i) out[i] = a[i] * s;
    return out;
}

Tensor add_scalar(const Tensor& a, double s) {
    Tensor out(a.shape());
    for (size_t i = 0; i < a.numel(); ++i) out[i] = a[i] + s;
    return out;
}

Tensor dense(const Tensor& x, const Tensor& w, const Tensor& b) {
    if (x.rank() != 1 || w.rank() != 2 || b.rank() != 1 || w.dim(1) != x.dim(0) ||
        w.dim(0) != b.dim(0))
        throw DimensionError("dense: x " + shape_str(x.shape()) + " w " + shape_str(w.shape()) +
                             " b " + shape_str(b.shape()));
    const int m = w.dim(0), n = w.dim(1);
    Tensor out(Shape{m});
    const double* xp = x.data();
    for (int i = 0; i < m; ++i) {
        const double* wrow = w.data() + static_cast<size_t>(i) * n;
        double acc = b[i];
        for (int j = 0; j < n; ++j) acc += wrow[j] * xp[j];
        out[i] = acc;
    }
    return out;
}

void dense_backward(const Tensor& x, const Tensor& w, const Tensor& gy, Tensor* gx, Tensor* gw,
                    Tensor* gb) {
    const int m = w.dim(0), n = w.dim(1);
    if (gx) {
        for (int i = 0; i < m; ++i) {
            const double g = gy[i];
            const double* wrow = w.data() + static_cast<size_t>(i) * n;
            double* gxp = gx->data();
            for (int j = 0; j < n; ++j) gxp[j] += g * wrow[j];
        }
    }
    if (gw) {
        for (int i = 0; i < m; ++i) {
            const double g = gy[i];
            double* gwrow = gw->data() + static_cast<size_t>(i) * n;
            const double* xp = x.data();
            for (int j = 0; j < n; ++j) gwrow[j] += g * xp[j];
        }
    }
    if (gb)
        for (int i = 0; i < m; ++i) (*gb)[i] += gy[i];
}

Tensor matmul(const Tensor& a, const Tensor& b) {
    if (a.rank() != 2 || b.rank() != 2 || a.dim(1) != b.dim(0))
        throw DimensionError("matmul: " + shape_str(a.shape()) + " x " + shape_str(b.shape()));
    const int m = a.dim(0), k = a.dim(1), n = b.dim(0) ? b.dim(1) : 0;
    Tensor out(Shape{m, n});
    for (int i = 0; i < m; ++i) {
        for (int p = 0; p < k; ++p) {
            const double av = a[static_cast<size_t>(i) * k + p];
            const double* brow = b.data() + static_cast<size_t>(p) * n;
            double* orow = out.data() + static_cast<size_t>(i) * n;
            for (int j = 0; j < n; ++j) orow[j] += av * brow[j];
        }
    }
    return out;
}

Tensor add_col_bias(const Tensor& x, const Tensor& b) {
    if (x.rank() != 2 || b.rank() != 1 || b.dim(0) != x.dim(0))
        throw DimensionError("add_col_bias: " + shape_str(x.shape()) + " + " + shape_str(b.shape()));
    Tensor out = x;
    const int m = x.dim(0), n = x.dim(1);
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < n; ++j) out[static_cast<size_t>(i) * n + j] += b[i];
    return out;
}

static void check_conv_args(const Tensor& x, const Tensor& w, const Tensor& b, int stride,
                            int pad) {
    if (x.rank() != 3 || w.rank() != 4 || b.rank() != 1)
        throw DimensionError("conv2d: ranks " + shape_str(x.shape()) + " " + shape_str(w.shape()));
    if (w.dim(1) != x.dim(0) || w.dim(0) != b.dim(0))
        throw DimensionError("conv2d: channels " + shape_str(x.shape()) + " vs " +
                             shape_str(w.shape()));
    if (stride < 1 || pad < 0) throw DimensionError("conv2d: invalid stride/padding");
    const int h = x.dim(1), wi = x.dim(2), kh = w.dim(2), kw = w.dim(3);
    if (h + 2 * pad < kh || wi + 2 * pad < kw)
        throw DimensionError("conv2d: kernel larger than padded input");
}

Tensor conv2d(const Tensor& x, const Tensor& w, const Tensor& b, int stride, int pad) {
    check_conv_args(x, w, b, stride, pad);
    const int ic = x.dim(0), h = x.dim(1), wi = x.dim(2);
    const int oc = w.dim(0), kh = w.dim(2), kw = w.dim(3);
    const int oh = (h + 2 * pad - kh) / stride + 1;
    const int ow = (wi + 2 * pad - kw) / stride + 1;
    Tensor out(Shape{oc, oh, ow});
    for (int o = 0; o < oc; ++o) {
        double* oplane = out.data() + static_cast<size_t>(o) * oh * ow;
        for (int oy = 0; oy < oh; ++oy)
            for (int ox = 0; ox < ow; ++ox) oplane[oy * ow + ox] = b[o];
        for (int c = 0; c < ic; ++c) {
            const double* xplane = x.data() + static_cast<size_t>(c) * h * wi;
            const double* kplane = w.data() + ((static_cast<size_t>(o) * ic + c) * kh) * kw;
            for (int oy = 0; oy < oh; ++oy) {
                for (int ox = 0; ox < ow; ++ox) {
                    double acc = 0.0;
                    const int iy0 = oy * stride - pad, ix0 = ox * stride - pad;
                    for (int ky = 0; ky < kh; ++ky) {
                        const int iy = iy0 + ky;
                        if (iy < 0 || iy >= h) continue;
                        const double* xrow = xplane + static_cast<size_t>(iy) * wi;
                        const double* krow = kplane + static_cast<size_t>(ky) * kw;
                        for (int kx = 0; kx < kw; ++kx) {
                            const int ix = ix0 + kx;
                            if (ix < 0 || ix >= wi) continue;
                            acc += xrow[ix] * krow[kx];
                        }
                    }
                    oplane[oy * ow + ox] += acc;
                }
            }
        }
    }
    return out;
}

void conv2d_backward(const Tensor& x, const Tensor& w, const Tensor& gy, int stride, int pad,
                     Tensor* gx, Tensor* gw, Tensor* gb) {
    const int ic = x.dim(0), h = x.dim(1), wi = x.dim(2);
    const int oc = w.dim(0), kh = w.dim(2), kw = w.dim(3);
    const int oh = gy.dim(1), ow = gy.dim(2);
    for (int o = 0; o < oc; ++o) {
        const double* gplane = gy.data() + static_cast<size_t>(o) * oh * ow;
        if (gb) {
            double acc = 0.0;
            for (int i = 0; i < oh * ow; ++i) acc += gplane[i];
            (*gb)[o] += acc;
        }
        for (int c = 0; c < ic; ++c) {
            const double* xplane = x.data() + static_cast<size_t>(c) * h * wi;
            const double* kplane = w.data() + ((static_cast<size_t>(o) * ic + c) * kh) * kw;
            double* gxplane = gx ? gx->data() + static_cast<size_t>(c) * h * wi : nullptr;
            double* gwplane = gw ? gw->data() + ((static_cast<size_t>(o) * ic + c) * kh) * kw : nullptr;
            for (int oy = 0; oy < oh; ++oy) {
                for (int ox = 0; ox < ow; ++ox) {
                    const double g = gplane[oy * ow + ox];
                    if (g == 0.0) continue;
                    const int iy0 = oy * stride - pad, ix0 = ox * stride - pad;
                    for (int ky = 0; ky < kh; ++ky) {
                        const int iy = iy0 + ky;
                        if (iy < 0 || iy >= h) continue;
                        for (int kx = 0; kx < kw; ++kx) {
                            const int ix = ix0 + kx;
                            if (ix < 0 || ix >= wi) continue;
                            if (gxplane)
                                gxplane[static_cast<size_t>(iy) * wi + ix] +=
                                    g * kplane[static_cast<size_t>(ky) * kw + kx];
                            if (gwplane)
                                gwplane[static_cast<size_t>(ky) * kw + kx] +=
                                    g * xplane[static_cast<size_t>(iy) * wi + ix];
                        }
                    }
                }
            }
        }
    }
}

Tensor pixel_shuffle(const Tensor& x, int r) {
    if (x.rank() != 3) throw DimensionError("pixel_shuffle: rank " + shape_str(x.shape()));
    if (r < 1 || x.dim(0) % (r * r) != 0)
        throw DimensionError("pixel_shuffle: channels " + std::to_string(x.dim(0)) +
                             " not divisible by r^2=" + std::to_string(r * r));
    const int c = x.dim(0) / (r * r), h = x.dim(1), w = x.dim(2);
    Tensor out(Shape{c, h * r, w * r});
    for (int oc = 0; oc < c; ++oc)
        for (int dy = 0; dy < r; ++dy)
            for (int dx = 0; dx < r; ++dx) {
                const double* src = x.data() + (static_cast<size_t>(oc) * r * r + dy * r + dx) * h * w;
                for (int y = 0; y < h; ++y)
                    for (int xx = 0; xx < w; ++xx)
                        out[(static_cast<size_t>(oc) * h * r + y * r + dy) * (w * r) + xx * r + dx] =
                            src[static_cast<size_t>(y) * w + xx];
            }
    return out;
}

Tensor pixel_unshuffle(const Tensor& x, int r) {
    if (x.rank() != 3) throw DimensionError("pixel_unshuffle: rank " + shape_str(x.shape()));
    if (r < 1 || x.dim(1) % r != 0 || x.dim(2) % r != 0)
        throw DimensionError("pixel_unshuffle: spatial dims not divisible by r");
    const int c = x.dim(0), h = x.dim(1) / r, w = x.dim(2) / r;
    Tensor out(Shape{c * r * r, h, w});
    for (int ic = 0; ic < c; ++ic)
        for (int dy = 0; dy < r; ++dy)
            for (int dx = 0; dx < r; ++dx) {
                double* dst = out.data() + (static_cast<size_t>(ic) * r * r + dy * r + dx) * h * w;
                for (int y = 0; y < h; ++y)
                    for (int xx = 0; xx < w; ++xx)
                        dst[static_cast<size_t>(y) * w + xx] =
                            x[(static_cast<size_t>(ic) * h * r + y * r + dy) * (w * r) + xx * r + dx];
            }
    return out;
}

Tensor relu(const Tensor& x) {
    Tensor out(x.shape());
    for (size_t i = 0; i < x.numel(); ++i) out[i] = x[i] > 0.0 ? x[i] : 0.0;
    return out;
}

Tensor leaky_relu(const Tensor& x, double slope) {
    Tensor out(x.shape());
    for (size_t i = 0; i < x.numel(); ++i) out[i] = x[i] > 0.0 ? x[i] : slope * x[i];
    return out;
}

Tensor tanh_op(const Tensor& x) {
    Tensor out(x.shape());
    for (size_t i = 0; i < x.numel(); ++i) out[i] = std::tanh(x[i]);
    return out;
}

Tensor sigmoid_op(const Tensor& x) {
    Tensor out(x.shape());
    for (size_t i = 0; i < x.numel(); ++i) {
        const double v = x[i];
        out[i] = v >= 0.0 ? 1.0 / (1.0 + std::exp(-v)) : std::exp(v) / (1.0 + std::exp(v));
    }
    return out;
}

Tensor softplus_op(const Tensor& x) {
    Tensor out(x.shape());
    for (size_t i = 0; i < x.numel(); ++i) {
        const double v = x[i];
        out[i] = v > 30.0 ? v : std::log1p(std::exp(v > -30.0 ? v : -30.0));
    }
    return out;
}

Tensor clamp(const Tensor& x, double lo, double hi) {
    Tensor out(x.shape());
    for (size_t i = 0; i < x.numel(); ++i) out[i] = x[i] < lo ? lo : (x[i] > hi ? hi : x[i]);
    return out;
}

Tensor clamp_min(const Tensor& x, double lo) {
    Tensor out(x.shape());
    for (size_t i = 0; i < x.numel(); ++i) out[i] = x[i] < lo ? lo : x[i];
    return out;
}

Tensor log_op(const Tensor& x) {
    Tensor out(x.shape());
    for (size_t i = 0; i < x.numel(); ++i) out[i] = std::log(x[i]);
    return out;
}

Tensor sum(const Tensor& x) {
    double acc = 0.0;
    for (size_t i = 0; i < x.numel(); ++i) acc += x[i];
    return Tensor(Shape{1}, {acc});
}

Tensor mean(const Tensor& x) {
    return Tensor(Shape{1}, {sum(x)[0] / static_cast<double>(x.numel())});
}

Tensor norm2(const Tensor& x) {
    double acc = 0.0;
    for (size_t i = 0; i < x.numel(); ++i) acc += x[i] * x[i];
    return Tensor(Shape{1}, {std::sqrt(acc)});
}

namespace {

// One orthonormal 1-D DFT pass along contiguous rows of an h x w complex grid.
void dft_rows(const std::vector<double>& re_in, const std::vector<double>& im_in, int rows,
              int cols, bool inverse, std::vector<double>& re_out, std::vector<double>& im_out) {
    re_out.assign(static_cast<size_t>(rows) * cols, 0.0);
    im_out.assign(static_cast<size_t>(rows) * cols, 0.0);
    const double sign = inverse ? 1.0 : -1.0;
    const double scale = 1.0 / std::sqrt(static_cast<double>(cols));
    std::vector<double> cs(cols), sn(cols);
    for (int k = 0; k < cols; ++k) {
        const double a = sign * 2.0 * M_PI * k / cols;
        cs[k] = std::cos(a);
        sn[k] = std::sin(a);
    }
    for (int r = 0; r < rows; ++r) {
        const size_t off = static_cast<size_t>(r) * cols;
        for (int u = 0; u < cols; ++u) {
            double ar = 0.0, ai = 0.0;
            size_t idx = 0;  // (u*j) mod cols accumulated incrementally
            for (int j = 0; j < cols; ++j) {
                const double c = cs[idx], s = sn[idx];
                const double xr = re_in[off + j], xi = im_in[off + j];
                ar += xr * c - xi * s;
                ai += xr * s + xi * c;
                idx += u;
                if (idx >= static_cast<size_t>(cols)) idx -= cols;
            }
            re_out[off + u] = ar * scale;
            im_out[off + u] = ai * scale;
        }
    }
}

void transpose_grid(const std::vector<double>& in, int rows, int cols, std::vector<double>& out) {
    out.resize(in.size());
    for (int r = 0; r < rows; ++r)
        for (int c = 0; c < cols; ++c)
            out[static_cast<size_t>(c) * rows + r] = in[static_cast<size_t>(r) * cols + c];
}

// Full 2-D orthonormal transform of a complex grid.
void dft2_complex(const std::vector<double>& re, const std::vector<double>& im, int h, int w,
                  bool inverse, std::vector<double>& ore, std::vector<double>& oim) {
    std::vector<double> r1, i1, r2, i2;
    dft_rows(re, im, h, w, inverse, r1, i1);
    transpose_grid(r1, h, w, r2);
    transpose_grid(i1, h, w, i2);
    dft_rows(r2, i2, w, h, inverse, r1, i1);
    transpose_grid(r1, w, h, ore);
    transpose_grid(i1, w, h, oim);
}

}  // namespace

Tensor dft2d(const Tensor& x) {
    if (x.rank() != 2) throw DimensionError("dft2d: expected [h,w], got " + shape_str(x.shape()));
    const int h = x.dim(0), w = x.dim(1);
    std::vector<double> im(x.numel(), 0.0), ore, oim;
    dft2_complex(x.vec(), im, h, w, false, ore, oim);
    Tensor out(Shape{2, h, w});
    std::copy(ore.begin(), ore.end(), out.data());
    std::copy(oim.begin(), oim.end(), out.data() + x.numel());
    return out;
}

Tensor dft2d_adjoint(const Tensor& g) {
    if (g.rank() != 3 || g.dim(0) != 2)
        throw DimensionError("dft2d_adjoint: expected [2,h,w], got " + shape_str(g.shape()));
    const int h = g.dim(1), w = g.dim(2);
    const size_t n = static_cast<size_t>(h) * w;
    std::vector<double> re(g.data(), g.data() + n), im(g.data() + n, g.data() + 2 * n), ore, oim;
    dft2_complex(re, im, h, w, true, ore, oim);
    Tensor out(Shape{h, w});
    std::copy(ore.begin(), ore.end(), out.data());
    return out;
}

Tensor hypot_pair(const Tensor& x, double eps) {
    if (x.rank() < 1 || x.dim(0) != 2)
        throw DimensionError("hypot_pair: leading dim must be 2, got " + shape_str(x.shape()));
    Shape s(x.shape().begin() + 1, x.shape().end());
    if (s.empty()) s.push_back(1);
    Tensor out(s);
    const size_t n = out.numel();
    for (size_t i = 0; i < n; ++i) {
        const double a = x[i], b = x[n + i];
        out[i] = std::sqrt(a * a + b * b + eps);
    }
    return out;
}

Tensor concat(const Tensor& a, const Tensor& b) {
    if (a.rank() != 1 || b.rank() != 1) throw DimensionError("concat: rank-1 only");
    Tensor out(Shape{a.dim(0) + b.dim(0)});
    std::copy(a.data(), a.data() + a.numel(), out.data());
    std::copy(b.data(), b.data() + b.numel(), out.data() + a.numel());
    return out;
}

Tensor slice(const Tensor& x, size_t offset, size_t len) {
    if (offset + len > x.numel()) throw DimensionError("slice: range exceeds tensor");
    Tensor out(Shape{static_cast<int>(len)});
    std::copy(x.data() + offset, x.data() + offset + len, out.data());
    return out;
}

Tensor rowwise_mul(const Tensor& x, const Tensor& a) {
    if (x.rank() != 2 || a.rank() != 1 || a.dim(0) != x.dim(0))
        throw DimensionError("rowwise_mul: " + shape_str(x.shape()) + " x " + shape_str(a.shape()));
    Tensor out = x;
    const int m = x.dim(0), n = x.dim(1);
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < n; ++j) out[static_cast<size_t>(i) * n + j] *= a[i];
    return out;
}

Tensor pow_scalar(const Tensor& s, double p) {
    if (s.numel() != 1) throw DimensionError("pow_scalar: expected scalar tensor");
    return Tensor(Shape{1}, {std::pow(s[0], p)});
}

Tensor bcast_mul(const Tensor& x, const Tensor& s) {
    if (s.numel() != 1) throw DimensionError("bcast_mul: expected scalar tensor");
    return scale(x, s[0]);
}

}  // namespace hdasc
