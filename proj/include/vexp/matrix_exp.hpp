#pragma once

#include "vexp/types.hpp"

namespace vexp {

/// Matrix exponential by scaling and squaring around a Taylor core.
///
/// The argument is scaled by 2^-s until its 1-norm is at most 1/2, the
/// Taylor series is summed to working precision, and the result is squared
/// s times. Throws std::invalid_argument for non-square or non-finite input.
Matrix matrix_exp(const Matrix& a);
CMatrix matrix_exp(const CMatrix& a);

/// exp(A) for real symmetric A, via the eigendecomposition.
Matrix symmetric_exp(const Matrix& a);

/// Principal logarithm of a symmetric positive-definite matrix.
Matrix symmetric_log(const Matrix& a);

/// Symmetric square root of a symmetric positive semi-definite matrix.
Matrix symmetric_sqrt(const Matrix& a);

bool all_finite(const Matrix& a);

}  // namespace vexp
