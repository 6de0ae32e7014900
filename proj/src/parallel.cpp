#include "funss/parallel.hpp"

#include <omp.h>

#include <atomic>
#include <cstdlib>
#include <string>

namespace funss::parallel {

namespace {
std::atomic<int> g_threads{0};  // 0 = not yet initialized

int clamp_threads(int n) {
  int hw = omp_get_max_threads();
  if (n < 1) n = 1;
  if (n > hw) n = hw;
  return n;
}
}  // namespace

void init_from_env() {
  int n = omp_get_max_threads();
  if (const char* env = std::getenv("FUNSS_THREADS")) {
    try {
      n = std::stoi(env);
    } catch (...) {
      // ignore malformed values, keep the hardware default
    }
  }
  g_threads.store(clamp_threads(n));
}

int thread_count() {
  int n = g_threads.load();
  if (n == 0) {
    init_from_env();
    n = g_threads.load();
  }
  return n;
}

void set_thread_count(int n) { g_threads.store(clamp_threads(n)); }

}  // namespace funss::parallel
