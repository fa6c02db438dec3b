#pragma once

// Deterministic data parallelism: work is split into contiguous chunks and
// results are merged in index order, so output never depends on the number
// of workers.

#include <algorithm>
#include <cstddef>
#include <exception>
#include <optional>
#include <thread>
#include <vector>

namespace almostsq {

/// Calls f(i) for i in [0, n) and returns the results in index order.
template <class F>
auto parallel_map(std::size_t n, unsigned workers, F f) -> std::vector<decltype(f(std::size_t{}))> {
  using T = decltype(f(std::size_t{}));
  std::vector<std::optional<T>> slots(n);
  const std::size_t w = std::clamp<std::size_t>(workers, 1, std::max<std::size_t>(n, 1));
  if (w == 1) {
    std::vector<T> out;
    out.reserve(n);
    for (std::size_t i = 0; i < n; ++i) out.push_back(f(i));
    return out;
  }
  std::vector<std::exception_ptr> errors(w);
  {
    std::vector<std::jthread> pool;
    pool.reserve(w);
    for (std::size_t t = 0; t < w; ++t) {
      pool.emplace_back([&, t] {
        const std::size_t begin = n * t / w;
        const std::size_t end = n * (t + 1) / w;
        try {
          for (std::size_t i = begin; i < end; ++i) slots[i].emplace(f(i));
        } catch (...) {
          errors[t] = std::current_exception();
        }
      });
    }
  }
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  std::vector<T> out;
  out.reserve(n);
  for (auto& s : slots) out.push_back(std::move(*s));
  return out;
}

/// Runs chunk(begin, end) over `workers` contiguous slices of [0, n) and folds
/// the partial results left to right with combine. `combine` must be
/// associative for the result to be independent of the worker count.
template <class T, class Chunk, class Combine>
std::optional<T> parallel_reduce(std::size_t n, unsigned workers, Chunk chunk, Combine combine) {
  if (n == 0) return std::nullopt;
  const std::size_t w = std::clamp<std::size_t>(workers, 1, n);
  auto partials = parallel_map(w, static_cast<unsigned>(w), [&](std::size_t t) -> std::optional<T> {
    return chunk(n * t / w, n * (t + 1) / w);
  });
  std::optional<T> acc;
  for (auto& p : partials) {
    if (!p) continue;
    acc = acc ? combine(std::move(*acc), std::move(*p)) : std::move(p);
  }
  return acc;
}

}  // namespace almostsq
