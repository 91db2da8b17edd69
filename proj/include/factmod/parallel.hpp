#pragma once

// Ordered parallel map: workers pull indices from a shared counter, the
// calling thread emits results strictly in input order.

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace factmod {

/// Worker count from FACTMOD_THREADS, else the hardware concurrency (at least 1).
inline unsigned default_threads() {
  if (const char* env = std::getenv("FACTMOD_THREADS")) {
    const long v = std::strtol(env, nullptr, 10);
    if (v >= 1) return static_cast<unsigned>(v);
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

/// Computes compute(state, item) for every item and returns results in input order.
/// `make_state` builds one worker-local state (scratch buffers) per thread.
template <class Item, class MakeState, class Compute>
auto ordered_parallel_map(const std::vector<Item>& items, unsigned threads, MakeState make_state,
                          Compute compute) {
  using State = decltype(make_state());
  using Result = decltype(compute(std::declval<State&>(), items.front()));
  std::vector<Result> out(items.size());
  if (items.empty()) return out;

  threads = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(items.size())));
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mu;

  auto work = [&] {
    try {
      State state = make_state();
      for (std::size_t i = next.fetch_add(1); i < items.size(); i = next.fetch_add(1)) {
        out[i] = compute(state, items[i]);
      }
    } catch (...) {
      std::lock_guard lock(error_mu);
      if (!error) error = std::current_exception();
      next.store(items.size());
    }
  };

  if (threads == 1) {
    work();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(threads - 1);
    for (unsigned t = 1; t < threads; ++t) pool.emplace_back(work);
    work();
  }
  if (error) std::rethrow_exception(error);
  return out;
}

}  // namespace factmod
