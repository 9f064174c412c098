#pragma once

#include <atomic>
#include <cstddef>
#include <cstdint>
#include <exception>
#include <limits>
#include <mutex>
#include <optional>
#include <random>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace giry {

/// Independent per-trial stream: trial `index` under `seed` always sees the
/// same numbers, whatever thread runs it.
inline std::mt19937_64 trial_rng(std::uint64_t seed, std::uint64_t index) {
  // splitmix64 finaliser over the pair
  std::uint64_t z = seed * 0x9E3779B97F4A7C15ULL + index + 0x632BE59BD9B4E019ULL;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  z ^= z >> 31;
  return std::mt19937_64(z);
}

namespace serial {

/// Smallest i in [0, n) with fails(i), or nullopt. Reference implementation.
template <class Pred>
std::optional<std::size_t> first_failure(std::size_t n, Pred&& fails) {
  for (std::size_t i = 0; i < n; ++i)
    if (fails(i)) return i;
  return std::nullopt;
}

}  // namespace serial

namespace omp {

/// Same contract as serial::first_failure. Indices above the best failure
/// found so far are skipped, so `fails` must be pure in i.
template <class Pred>
std::optional<std::size_t> first_failure(std::size_t n, Pred&& fails) {
  constexpr std::size_t none = std::numeric_limits<std::size_t>::max();
  std::atomic<std::size_t> best{none};
  std::exception_ptr error;
  std::size_t error_index = none;
  std::mutex error_mutex;
  const auto count = static_cast<std::int64_t>(n);
#pragma omp parallel for schedule(dynamic, 8)
  for (std::int64_t k = 0; k < count; ++k) {
    const auto i = static_cast<std::size_t>(k);
    if (i > best.load(std::memory_order_relaxed)) continue;
    bool failed = false;
    try {
      failed = fails(i);
    } catch (...) {
      std::lock_guard lock(error_mutex);
      if (i < error_index) {
        error = std::current_exception();
        error_index = i;
      }
      std::size_t cur = best.load();
      while (i < cur && !best.compare_exchange_weak(cur, i)) {
      }
    }
    if (failed) {
      std::size_t cur = best.load();
      while (i < cur && !best.compare_exchange_weak(cur, i)) {
      }
    }
  }
  // A throwing trial counts as the stopping point, as in the serial loop.
  if (error && error_index == best.load()) std::rethrow_exception(error);
  if (best.load() == none) return std::nullopt;
  return best.load();
}

}  // namespace omp

/// Dispatches to the OpenMP kernel; set GIRY_SERIAL to force the reference.
template <class Pred>
std::optional<std::size_t> first_failure(std::size_t n, Pred&& fails) {
#ifdef GIRY_SERIAL
  return serial::first_failure(n, std::forward<Pred>(fails));
#else
  return omp::first_failure(n, std::forward<Pred>(fails));
#endif
}

}  // namespace giry
