#include "discrepancy/parallel.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <limits>
#include <mutex>
#include <thread>
#include <vector>

namespace discrepancy {

namespace {

constexpr std::size_t kNone = std::numeric_limits<std::size_t>::max();

struct FirstError {
  std::mutex mu;
  std::size_t index = kNone;
  std::exception_ptr error;

  void record(std::size_t k, std::exception_ptr e) {
    std::lock_guard lock(mu);
    if (k < index) {
      index = k;
      error = std::move(e);
    }
  }
};

void run_workers(std::size_t workers, const std::function<void()>& loop) {
  if (workers <= 1) {
    loop();
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(loop);
  for (auto& t : pool) t.join();
}

}  // namespace

std::size_t resolve_jobs(std::size_t jobs) {
  if (jobs > 0) return jobs;
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : hw;
}

void parallel_for(std::size_t count, std::size_t jobs, const std::function<void(std::size_t)>& body) {
  if (count == 0) return;
  std::atomic<std::size_t> next{0};
  FirstError err;
  run_workers(std::min(resolve_jobs(jobs), count), [&] {
    for (;;) {
      const std::size_t k = next.fetch_add(1);
      if (k >= count) return;
      try {
        body(k);
      } catch (...) {
        err.record(k, std::current_exception());
      }
    }
  });
  if (err.error) std::rethrow_exception(err.error);
}

std::optional<std::size_t> parallel_first(std::size_t count, std::size_t jobs,
                                          const std::function<bool(std::size_t)>& pred) {
  if (count == 0) return std::nullopt;
  std::atomic<std::size_t> next{0};
  std::atomic<std::size_t> best{kNone};
  FirstError err;
  run_workers(std::min(resolve_jobs(jobs), count), [&] {
    for (;;) {
      const std::size_t k = next.fetch_add(1);
      if (k >= count || k > best.load()) return;
      try {
        if (pred(k)) {
          std::size_t cur = best.load();
          while (k < cur && !best.compare_exchange_weak(cur, k)) {
          }
        }
      } catch (...) {
        err.record(k, std::current_exception());
      }
    }
  });
  const std::size_t b = best.load();
  if (err.error && err.index < b) std::rethrow_exception(err.error);
  if (b == kNone) return std::nullopt;
  return b;
}

}  // namespace discrepancy
