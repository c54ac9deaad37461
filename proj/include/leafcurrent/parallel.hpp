#pragma once

#include <algorithm>
#include <atomic>
#include <exception>
#include <optional>
#include <thread>
#include <type_traits>
#include <vector>

namespace leafcurrent {

/// Applies fn to every item on up to `threads` workers. Results are stored
/// by index, so the output does not depend on scheduling. The first
/// exception (by index) is rethrown after all workers finish.
template <class T, class F>
auto parallel_map(const std::vector<T>& items, int threads, F&& fn)
    -> std::vector<std::invoke_result_t<F&, const T&>> {
  using R = std::invoke_result_t<F&, const T&>;
  const size_t n = items.size();
  std::vector<std::optional<R>> slots(n);
  std::vector<std::exception_ptr> errors(n);
  std::atomic<size_t> next{0};

  auto worker = [&] {
    for (size_t i = next++; i < n; i = next++) {
      try {
        slots[i].emplace(fn(items[i]));
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };

  const size_t pool = std::clamp<size_t>(threads > 0 ? static_cast<size_t>(threads) : 1, 1, std::max<size_t>(n, 1));
  if (pool == 1) {
    worker();
  } else {
    std::vector<std::jthread> workers;
    workers.reserve(pool);
    for (size_t k = 0; k < pool; ++k) workers.emplace_back(worker);
  }

  for (const auto& e : errors)
    if (e) std::rethrow_exception(e);
  std::vector<R> out;
  out.reserve(n);
  for (auto& s : slots) out.push_back(std::move(*s));
  return out;
}

}  // namespace leafcurrent
