#pragma once

#include <complex>
#include <cstddef>
#include <span>

namespace ptkho {

using Complex = std::complex<double>;

// Owning wrapper around a pair of in-place FFTW plans of one size.
//
// Plans are created with FFTW_ESTIMATE so the chosen algorithm, and
// therefore every rounding decision, is identical from run to run.
// Both directions are unnormalized; a forward/backward round trip scales
// the data by size().
class SpectralTransform {
 public:
  explicit SpectralTransform(std::size_t size);
  ~SpectralTransform();

  SpectralTransform(const SpectralTransform&) = delete;
  SpectralTransform& operator=(const SpectralTransform&) = delete;

  std::size_t size() const noexcept { return size_; }
  std::span<Complex> buffer() noexcept { return {data_, size_}; }

  // sum_n x_n exp(+2 pi i n l / D): momentum index n -> coordinate sample l.
  void to_coordinate();
  // sum_l x_l exp(-2 pi i n l / D): coordinate sample l -> momentum index n.
  void to_momentum();

  // Per-thread cached instance for one-off transforms.
  static SpectralTransform& for_thread(std::size_t size);

 private:
  std::size_t size_;
  Complex* data_;
  void* forward_;
  void* backward_;
};

}  // namespace ptkho
