// Copyright 2026 The qpureb Authors - All rights reserved.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <omp.h>

#include <cstddef>
#include <exception>
#include <mutex>
#include <type_traits>
#include <vector>

namespace qpureb {

// Maps f over [0, n) on an OpenMP team of `threads` workers (<= 0: runtime
// default). Results land in index order, so output is independent of the
// thread count as long as f(i) is. The first exception thrown by any f(i) is
// rethrown after the loop.
template <class F>
auto parallel_map(std::size_t n, F&& f, int threads = 0) -> std::vector<std::invoke_result_t<F&, std::size_t>> {
  using R = std::invoke_result_t<F&, std::size_t>;
  std::vector<R> out(n);
  std::exception_ptr error;
  std::mutex error_mutex;
  const int team = threads > 0 ? threads : omp_get_max_threads();
  const auto count = static_cast<std::ptrdiff_t>(n);
#pragma omp parallel for schedule(dynamic, 1) num_threads(team)
  for (std::ptrdiff_t i = 0; i < count; ++i) {
    try {
      out[static_cast<std::size_t>(i)] = f(static_cast<std::size_t>(i));
    } catch (...) {
      std::lock_guard<std::mutex> lock(error_mutex);
      if (!error) error = std::current_exception();
    }
  }
  if (error) std::rethrow_exception(error);
  return out;
}

}  // namespace qpureb
