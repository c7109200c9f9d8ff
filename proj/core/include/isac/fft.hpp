#pragma once

#include <span>

#include "isac/types.hpp"

// Unitary discrete Fourier transforms.
//
// forward:  X[m] = sum_l x[l] e^{-j 2 pi l m / n} / sqrt(n)
// inverse:  x[l] = sum_m X[m] e^{+j 2 pi l m / n} / sqrt(n)
//
// Plans are cached per shape behind a mutex; execution is lock-free and safe
// from concurrent workers.
namespace isac::fft {

enum class Direction { forward, inverse };

void transform(std::span<const cplx> in, std::span<cplx> out, Direction dir);
void transform_inplace(std::span<cplx> data, Direction dir);
CVec transform(std::span<const cplx> in, Direction dir);

// Transform every row (length cols) / every column (length rows) in place.
void transform_rows(CMatrix& m, Direction dir);
void transform_cols(CMatrix& m, Direction dir);

}  // namespace isac::fft
