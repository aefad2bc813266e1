#include "pppm/fft.hpp"

#include <fftw3.h>

#include <mutex>
#include <vector>

namespace pppm {
namespace {

// The FFTW planner is not reentrant; execution is.
std::mutex &planner_mutex() {
  static std::mutex m;
  return m;
}

class FftwTransform final : public RealTransform3d {
public:
  explicit FftwTransform(const GridDims &dims) : dims_(dims) {
    if (dims.nx < 1 || dims.ny < 1 || dims.nz < 1) throw ConfigurationError("transform dims must be positive");
    std::vector<double> real(dims.count());
    std::vector<Complex> spec(half_spectrum_size(dims));
    auto *c = reinterpret_cast<fftw_complex *>(spec.data());
    const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
    std::lock_guard lock(planner_mutex());
    // FFTW is row-major, so x (fastest here) is its last dimension.
    forward_ = fftw_plan_dft_r2c_3d(dims.nz, dims.ny, dims.nx, real.data(), c, flags);
    backward_ = fftw_plan_dft_c2r_3d(dims.nz, dims.ny, dims.nx, c, real.data(), flags);
    if (forward_ == nullptr || backward_ == nullptr) throw Error("FFTW failed to create a plan");
  }

  ~FftwTransform() override {
    std::lock_guard lock(planner_mutex());
    fftw_destroy_plan(forward_);
    fftw_destroy_plan(backward_);
  }

  FftwTransform(const FftwTransform &) = delete;
  FftwTransform &operator=(const FftwTransform &) = delete;

  const GridDims &dims() const override { return dims_; }

  void forward(std::span<const double> in, std::span<Complex> out) const override {
    check(in.size(), out.size());
    // r2c keeps its input intact.
    fftw_execute_dft_r2c(forward_, const_cast<double *>(in.data()), reinterpret_cast<fftw_complex *>(out.data()));
  }

  void backward(std::span<const Complex> in, std::span<double> out) const override {
    check(out.size(), in.size());
    // Multi-dimensional c2r overwrites its input.
    std::vector<Complex> scratch(in.begin(), in.end());
    fftw_execute_dft_c2r(backward_, reinterpret_cast<fftw_complex *>(scratch.data()), out.data());
    const double scale = 1.0 / static_cast<double>(dims_.count());
    for (double &v : out) v *= scale;
  }

private:
  void check(std::size_t real_size, std::size_t spectrum_size) const {
    if (real_size != dims_.count() || spectrum_size != half_spectrum_size(dims_)) {
      throw InvalidInput("transform buffer sizes do not match grid " + to_string(dims_));
    }
  }

  GridDims dims_;
  fftw_plan forward_ = nullptr;
  fftw_plan backward_ = nullptr;
};

} // namespace

std::unique_ptr<RealTransform3d> make_fftw_transform(const GridDims &dims) {
  return std::make_unique<FftwTransform>(dims);
}

} // namespace pppm
