#pragma once

#include "rq/image.hpp"

namespace rq {

// Unnormalized forward 2D DFT: F[k] = sum_x f[x] exp(-2*pi*j k.x / n).
Spectrum2D dft2(const Image2D& img);

// Inverse 2D DFT with 1/(n1*n2) normalization. Throws NonHermitianSpectrum
// when the imaginary part of the result exceeds 1e-9 * (max|real| + 1).
Image2D idft2(const Spectrum2D& spec);

// Inverse 2D DFT returning the complex result, no realness check.
Spectrum2D idft2_complex(const Spectrum2D& spec);

}  // namespace rq
