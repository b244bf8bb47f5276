#pragma once

#include <mutex>

namespace rpde::detail {

// One lock for every fftw planner call in the library; the planner keeps global state.
std::mutex& fftw_planner_mutex();

}  // namespace rpde::detail
