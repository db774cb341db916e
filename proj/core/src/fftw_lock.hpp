#pragma once

#include <mutex>

namespace conewolff::detail {

// FFTW planning is not thread-safe; every plan/destroy goes through this lock.
inline std::mutex& fftw_planner_mutex() {
  static std::mutex m;
  return m;
}

}  // namespace conewolff::detail
