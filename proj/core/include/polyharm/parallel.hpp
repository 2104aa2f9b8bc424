#pragma once

// Static-partition parallel loop over independent indices.  Results must be
// written to per-index slots so the outcome does not depend on the worker count.

#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace polyharm {

// Worker count used when an operation is not given one; initialized from the
// POLYHARM_WORKERS environment variable, else 1.
int default_workers();
void set_default_workers(int workers);

template <class Fn>
void parallel_for(std::size_t count, int workers, Fn&& fn) {
  if (workers <= 0) workers = default_workers();
  if (workers <= 1 || count < 2) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  const std::size_t w = std::min<std::size_t>(static_cast<std::size_t>(workers), count);
  std::vector<std::thread> pool;
  std::exception_ptr err;
  std::mutex mu;
  for (std::size_t t = 0; t < w; ++t) {
    pool.emplace_back([&, t] {
      try {
        for (std::size_t i = t * count / w; i < (t + 1) * count / w; ++i) fn(i);
      } catch (...) {
        std::lock_guard<std::mutex> lk(mu);
        if (!err) err = std::current_exception();
      }
    });
  }
  for (auto& th : pool) th.join();
  if (err) std::rethrow_exception(err);
}

}  // namespace polyharm
