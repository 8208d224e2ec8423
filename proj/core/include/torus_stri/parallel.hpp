#pragma once

#include <cstddef>
#include <functional>

namespace torus {

// Process-wide worker cap. Defaults to the TORUS_STRI_THREADS environment
// variable when set, else the hardware concurrency.
std::size_t thread_count();
void set_thread_count(std::size_t n);

// Runs body(i) for i in [0, n). Each index is handled by exactly one worker;
// callers write into per-index slots and combine in index order, which keeps
// results independent of the number of workers.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

// Scoped override of the worker cap (tests, determinism checks).
class ThreadCountGuard {
 public:
  explicit ThreadCountGuard(std::size_t n) : previous_(thread_count()) {
    set_thread_count(n);
  }
  ~ThreadCountGuard() { set_thread_count(previous_); }
  ThreadCountGuard(const ThreadCountGuard&) = delete;
  ThreadCountGuard& operator=(const ThreadCountGuard&) = delete;

 private:
  std::size_t previous_;
};

}  // namespace torus
