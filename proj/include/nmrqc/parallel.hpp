#pragma once

#include <algorithm>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace nmrqc {

// Runs fn(b) for b in [0, batches) on up to `workers` threads and returns the
// results in batch order, so any ordered reduction is independent of the worker count.
template <class R, class F>
std::vector<R> run_batches(std::size_t batches, unsigned workers, F fn) {
  std::vector<R> out(batches);
  if (workers == 0) workers = std::max(1u, std::thread::hardware_concurrency());
  workers = static_cast<unsigned>(std::min<std::size_t>(workers, std::max<std::size_t>(batches, 1)));
  if (workers <= 1) {
    for (std::size_t b = 0; b < batches; ++b) out[b] = fn(b);
    return out;
  }
  std::exception_ptr failure;
  std::mutex mu;
  std::vector<std::thread> pool;
  for (unsigned w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      for (std::size_t b = w; b < batches; b += workers) {
        try {
          out[b] = fn(b);
        } catch (...) {
          std::lock_guard<std::mutex> lock(mu);
          if (!failure) failure = std::current_exception();
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);
  return out;
}

}  // namespace nmrqc
