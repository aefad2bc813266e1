#pragma once

// Real 3D transforms on x-fastest grids.
//
// Spectra are stored half-complex along x: (nx/2 + 1) * ny * nz entries,
// index = mx + (nx/2 + 1) * (my + ny * mz). The forward transform is
// unnormalized (sum_g v_g exp(-i k.r_g)); backward scales by 1/(nx ny nz),
// so backward(forward(v)) == v.

#include <complex>
#include <memory>
#include <span>

#include "pppm/model.hpp"

namespace pppm {

using Complex = std::complex<double>;

inline std::size_t half_spectrum_size(const GridDims &d) {
  return static_cast<std::size_t>(d.nx / 2 + 1) * static_cast<std::size_t>(d.ny) * static_cast<std::size_t>(d.nz);
}

/// Swappable 3D transform backend. Implementations must be safe to call
/// concurrently on distinct buffers.
class RealTransform3d {
public:
  virtual ~RealTransform3d() = default;
  virtual const GridDims &dims() const = 0;
  virtual void forward(std::span<const double> in, std::span<Complex> out) const = 0;
  virtual void backward(std::span<const Complex> in, std::span<double> out) const = 0;
};

/// Single-process FFTW backend.
std::unique_ptr<RealTransform3d> make_fftw_transform(const GridDims &dims);

} // namespace pppm
