#include "fft.hpp"

#include <fftw3.h>

#include <mutex>

#include "fftw_lock.hpp"

namespace conewolff::detail {

void fft_inplace(cplx* data, const std::vector<int>& dims, int sign) {
  auto* buf = reinterpret_cast<fftw_complex*>(data);
  fftw_plan plan;
  {
    std::lock_guard<std::mutex> g(fftw_planner_mutex());
    plan = fftw_plan_dft(static_cast<int>(dims.size()), dims.data(), buf, buf, sign < 0 ? FFTW_FORWARD : FFTW_BACKWARD,
                         FFTW_ESTIMATE);
  }
  fftw_execute(plan);
  std::lock_guard<std::mutex> g(fftw_planner_mutex());
  fftw_destroy_plan(plan);
}

}  // namespace conewolff::detail
