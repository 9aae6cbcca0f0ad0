#include "ptkho/fft.hpp"

#include <fftw3.h>

#include <map>
#include <memory>
#include <mutex>
#include <new>

namespace ptkho {
namespace {

// The FFTW planner is not thread-safe; execution is.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

}  // namespace

SpectralTransform::SpectralTransform(std::size_t size) : size_(size) {
  auto* raw = static_cast<fftw_complex*>(fftw_malloc(sizeof(fftw_complex) * size));
  if (raw == nullptr) throw std::bad_alloc();
  data_ = reinterpret_cast<Complex*>(raw);
  std::lock_guard lock(planner_mutex());
  const int n = static_cast<int>(size);
  forward_ = fftw_plan_dft_1d(n, raw, raw, FFTW_FORWARD, FFTW_ESTIMATE);
  backward_ = fftw_plan_dft_1d(n, raw, raw, FFTW_BACKWARD, FFTW_ESTIMATE);
}

SpectralTransform::~SpectralTransform() {
  std::lock_guard lock(planner_mutex());
  fftw_destroy_plan(static_cast<fftw_plan>(forward_));
  fftw_destroy_plan(static_cast<fftw_plan>(backward_));
  fftw_free(data_);
}

void SpectralTransform::to_coordinate() { fftw_execute(static_cast<fftw_plan>(backward_)); }

void SpectralTransform::to_momentum() { fftw_execute(static_cast<fftw_plan>(forward_)); }

SpectralTransform& SpectralTransform::for_thread(std::size_t size) {
  thread_local std::map<std::size_t, std::unique_ptr<SpectralTransform>> cache;
  auto& slot = cache[size];
  if (!slot) slot = std::make_unique<SpectralTransform>(size);
  return *slot;
}

}  // namespace ptkho
