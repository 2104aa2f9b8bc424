#include "polyharm/parallel.hpp"

#include <atomic>
#include <cstdlib>
#include <string>

namespace polyharm {

namespace {

int from_env() {
  const char* s = std::getenv("POLYHARM_WORKERS");
  if (!s) return 1;
  try {
    int v = std::stoi(s);
    return v > 0 ? v : 1;
  } catch (...) {
    return 1;
  }
}

std::atomic<int>& slot() {
  static std::atomic<int> w{from_env()};
  return w;
}

}  // namespace

int default_workers() { return slot().load(); }
void set_default_workers(int workers) { slot().store(workers > 0 ? workers : 1); }

}  // namespace polyharm
