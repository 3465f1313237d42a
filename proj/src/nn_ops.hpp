#pragma once

#include "tensor.hpp"

namespace hdasc {

// Plain-tensor kernels. The autodiff layer wraps these same routines, so the
// inference path and the training path compute identical values.

Tensor add(const Tensor& a, const Tensor& b);
Tensor sub(const Tensor& a, const Tensor& b);
Tensor mul(const Tensor& a, const Tensor& b);
Tensor scale(const Tensor& a, double s);
Tensor add_scalar(const Tensor& a, double s);

// y = W x + b with W [m,n], x [n], b [m].
Tensor dense(const Tensor& x, const Tensor& w, const Tensor& b);
void dense_backward(const Tensor& x, const Tensor& w, const Tensor& gy, Tensor* gx, Tensor* gw,
                    Tensor* gb);

// C = A B with A [m,k], B [k,n].
Tensor matmul(const Tensor& a, const Tensor& b);
// X [m,n] + b [m] broadcast along columns.
Tensor add_col_bias(const Tensor& x, const Tensor& b);

// Cross-correlation, x [ic,h,w], w [oc,ic,kh,kw], b [oc].
Tensor conv2d(const Tensor& x, const Tensor& w, const Tensor& b, int stride, int pad);
void conv2d_backward(const Tensor& x, const Tensor& w, const Tensor& gy, int stride, int pad,
                     Tensor* gx, Tensor* gw, Tensor* gb);

// (c·r²,h,w) -> (c, r·h, r·w); bijective rearrangement.
Tensor pixel_shuffle(const Tensor& x, int r);
Tensor pixel_unshuffle(const Tensor& x, int r);

Tensor relu(const Tensor& x);
Tensor leaky_relu(const Tensor& x, double slope);
Tensor tanh_op(const Tensor& x);
Tensor sigmoid_op(const Tensor& x);
Tensor softplus_op(const Tensor& x);
Tensor clamp(const Tensor& x, double lo, double hi);
Tensor clamp_min(const Tensor& x, double lo);
Tensor log_op(const Tensor& x);

Tensor sum(const Tensor& x);   // -> [1]
Tensor mean(const Tensor& x);  // -> [1]
// Euclidean norm -> [1].
Tensor norm2(const Tensor& x);

// Orthonormal 2-D DFT of a [h,w] grid -> [2,h,w] (real plane, imaginary plane).
Tensor dft2d(const Tensor& x);
// Adjoint of dft2d: real part of the orthonormal inverse transform of g [2,h,w].
Tensor dft2d_adjoint(const Tensor& g);

// x [2,n...] -> sqrt(re² + im² + eps), shape [n...].
Tensor hypot_pair(const Tensor& x, double eps);

Tensor concat(const Tensor& a, const Tensor& b);          // rank-1 concat
Tensor slice(const Tensor& x, size_t offset, size_t len); // rank-1 contiguous slice

// X [m,n] with a [m]: row i scaled by a[i].
Tensor rowwise_mul(const Tensor& x, const Tensor& a);

// Scalar helpers on [1] tensors.
Tensor pow_scalar(const Tensor& s, double p);
Tensor bcast_mul(const Tensor& x, const Tensor& s);  // x * s[0]

}  // namespace hdasc
