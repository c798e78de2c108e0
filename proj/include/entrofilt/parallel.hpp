#ifndef ENTROFILT_PARALLEL_HPP_
#define ENTROFILT_PARALLEL_HPP_

#include <algorithm>
#include <cstdlib>
#include <exception>
#include <string>
#include <thread>
#include <vector>

namespace entrofilt {

/// Worker count: hardware concurrency, capped by ENTROFILT_THREADS.
inline int worker_count() {
  int n = static_cast<int>(std::thread::hardware_concurrency());
  if (n < 1) n = 1;
  if (const char* env = std::getenv("ENTROFILT_THREADS")) {
    try {
      const int cap = std::stoi(env);
      if (cap >= 1) n = std::min(n, cap);
    } catch (const std::exception&) {
      // unparsable value: ignore the cap
    }
  }
  return n;
}

/// Runs body(i) for i in [0, n) on contiguous chunks. If several chunks
/// throw, the exception from the lowest chunk is rethrown so failures are
/// reported deterministically.
template <typename Body>
void parallel_for(int n, Body&& body, int workers = worker_count()) {
  workers = std::max(1, std::min(workers, n / 64));
  if (workers <= 1) {
    for (int i = 0; i < n; ++i) body(i);
    return;
  }
  std::vector<std::exception_ptr> errors(workers);
  {
    std::vector<std::jthread> threads;
    threads.reserve(workers);
    for (int w = 0; w < workers; ++w) {
      const int begin = static_cast<int>(static_cast<long>(n) * w / workers);
      const int end = static_cast<int>(static_cast<long>(n) * (w + 1) / workers);
      threads.emplace_back([&, w, begin, end] {
        try {
          for (int i = begin; i < end; ++i) body(i);
        } catch (...) {
          errors[w] = std::current_exception();
        }
      });
    }
  }
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

}  // namespace entrofilt

#endif  // ENTROFILT_PARALLEL_HPP_
