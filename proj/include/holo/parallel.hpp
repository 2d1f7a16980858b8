#pragma once

#include <cstddef>
#include <exception>
#include <optional>
#include <vector>

namespace holo {

/// Execution backend for the data-parallel kernels. The serial path is the
/// reference implementation; both produce bit-identical results.
enum class Exec { serial, parallel };

namespace detail {

// Nodes per reduction block. Fixed so the summation tree never depends on the
// thread count.
inline constexpr std::size_t kReductionBlock = 512;

template <class T>
T pairwise_combine(std::vector<T>& partial) {
  if (partial.empty()) return T{};
  std::size_t n = partial.size();
  while (n > 1) {
    const std::size_t half = (n + 1) / 2;
    for (std::size_t i = 0; i + half < n; ++i) partial[i] += partial[i + half];
    n = half;
  }
  return partial[0];
}

}  // namespace detail

/// Deterministic blocked reduction over [0, count).
///
/// `block_sum(begin, end)` returns the sum over one block and may throw; the
/// exception from the lowest-numbered failing block is rethrown after the
/// loop, so error reports are also independent of scheduling.
template <class T, class BlockSum>
T blocked_reduce(std::size_t count, Exec exec, BlockSum&& block_sum, const T& zero = T{}) {
  const std::size_t block = detail::kReductionBlock;
  const std::size_t nblocks = (count + block - 1) / block;
  if (nblocks == 0) return zero;
  std::vector<T> partial(nblocks, zero);
  std::vector<std::exception_ptr> failure(nblocks);

  auto run_block = [&](std::size_t b) {
    const std::size_t begin = b * block;
    const std::size_t end = begin + block < count ? begin + block : count;
    try {
      partial[b] = block_sum(begin, end);
    } catch (...) {
      failure[b] = std::current_exception();
    }
  };

  if (exec == Exec::parallel) {
    const long long nb = static_cast<long long>(nblocks);
#pragma omp parallel for schedule(static)
    for (long long b = 0; b < nb; ++b) run_block(static_cast<std::size_t>(b));
  } else {
    for (std::size_t b = 0; b < nblocks; ++b) run_block(b);
  }

  for (auto& f : failure)
    if (f) std::rethrow_exception(f);
  return detail::pairwise_combine(partial);
}

/// Runs `body(i)` for i in [0, count); each index is handled by exactly one
/// thread. Exceptions are collected and the one with the lowest index wins.
template <class Body>
void indexed_for(std::size_t count, Exec exec, Body&& body) {
  std::vector<std::exception_ptr> failure(count);
  if (exec == Exec::parallel) {
    const long long n = static_cast<long long>(count);
#pragma omp parallel for schedule(dynamic, 4)
    for (long long i = 0; i < n; ++i) {
      try {
        body(static_cast<std::size_t>(i));
      } catch (...) {
        failure[static_cast<std::size_t>(i)] = std::current_exception();
      }
    }
  } else {
    for (std::size_t i = 0; i < count; ++i) {
      try {
        body(i);
      } catch (...) {
        failure[i] = std::current_exception();
      }
    }
  }
  for (auto& f : failure)
    if (f) std::rethrow_exception(f);
}

}  // namespace holo
