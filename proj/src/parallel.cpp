#include "quatflow/parallel.hpp"

#include <algorithm>
#include <cstdlib>
#include <thread>
#include <vector>

namespace quatflow {

int worker_count() {
  static const int count = [] {
    const char* env = std::getenv("QUATFLOW_THREADS");
    if (env == nullptr) return 1;
    const int n = std::atoi(env);
    return n > 0 ? n : 1;
  }();
  return count;
}

void parallel_for(std::ptrdiff_t count, const std::function<void(std::ptrdiff_t, std::ptrdiff_t)>& body) {
  const std::ptrdiff_t workers = std::min<std::ptrdiff_t>(worker_count(), count);
  if (workers <= 1) {
    body(0, count);
    return;
  }
  const std::ptrdiff_t chunk = (count + workers - 1) / workers;
  std::vector<std::jthread> pool;
  pool.reserve(static_cast<std::size_t>(workers - 1));
  for (std::ptrdiff_t w = 1; w < workers; ++w) {
    const std::ptrdiff_t begin = w * chunk;
    const std::ptrdiff_t end = std::min(count, begin + chunk);
    if (begin < end) pool.emplace_back([&body, begin, end] { body(begin, end); });
  }
  body(0, std::min(count, chunk));
}

}  // namespace quatflow
