#include "fwipm/parallel.h"

#include <algorithm>
#include <vector>

#include <tbb/blocked_range.h>
#include <tbb/global_control.h>
#include <tbb/parallel_for.h>
#include <tbb/parallel_reduce.h>
#include <tbb/task_arena.h>

#include "fwipm/error.h"

namespace fwipm {

struct BlockExecutor::Arena {
  // The global_control lets the arena have its full worker count even when
  // the machine reports fewer cores.
  explicit Arena(int threads)
      : control(tbb::global_control::max_allowed_parallelism, threads), arena(threads) {}
  tbb::global_control control;
  tbb::task_arena arena;
};

BlockExecutor::BlockExecutor(int threads, bool deterministic)
    : threads_(threads), deterministic_(deterministic) {
  if (threads < 1) {
    throw Error(ErrorCode::kPreconditionViolated, "thread count must be >= 1");
  }
  if (threads > 1) arena_ = std::make_unique<Arena>(threads);
}

BlockExecutor::~BlockExecutor() = default;

void BlockExecutor::for_each(int count,
                             const std::function<void(int)>& body) const {
  if (!arena_ || count < 2) {
    for (int t = 0; t < count; ++t) body(t);
    return;
  }
  arena_->arena.execute([&] {
    tbb::parallel_for(tbb::blocked_range<int>(0, count),
                      [&](const tbb::blocked_range<int>& r) {
                        for (int t = r.begin(); t != r.end(); ++t) body(t);
                      });
  });
}

double BlockExecutor::sum(int count,
                          const std::function<double(int)>& term) const {
  if (!arena_ || count < 2) {
    double total = 0.0;
    for (int t = 0; t < count; ++t) total += term(t);
    return total;
  }
  if (!deterministic_) {
    double total = 0.0;
    arena_->arena.execute([&] {
      total = tbb::parallel_reduce(
          tbb::blocked_range<int>(0, count), 0.0,
          [&](const tbb::blocked_range<int>& r, double acc) {
            for (int t = r.begin(); t != r.end(); ++t) acc += term(t);
            return acc;
          },
          [](double a, double b) { return a + b; });
    });
    return total;
  }
  std::vector<double> slots(count);
  for_each(count, [&](int t) { slots[t] = term(t); });
  double total = 0.0;
  for (double v : slots) total += v;
  return total;
}

const BlockExecutor& BlockExecutor::serial() {
  static const BlockExecutor executor(1);
  return executor;
}

}  // namespace fwipm
