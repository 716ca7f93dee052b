#pragma once

#include "nsk/field.hpp"

namespace nsk {

/// Forward DFT of every component, unnormalized: c_k = sum_x f(x) e^{-i xi.x}.
ComplexField forward_transform(const RealField& f);
ComplexField forward_transform(const ComplexField& f);

/// Inverse DFT with the 1/n^N factor. The real variant keeps the real part
/// and is meant for conjugate-symmetric input.
ComplexField inverse_transform(const ComplexField& c);
RealField inverse_transform_real(const ComplexField& c);

}  // namespace nsk
