#include "pixnav/parallel.hpp"

#include <atomic>

namespace pixnav {

namespace {
std::atomic<unsigned> g_thread_limit{0};
}

void set_thread_limit(unsigned threads) { g_thread_limit.store(threads); }

unsigned thread_limit() {
  const unsigned configured = g_thread_limit.load();
  if (configured != 0) {
    return configured;
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

}  // namespace pixnav
