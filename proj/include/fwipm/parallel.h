#pragma once

#include <functional>
#include <memory>

namespace fwipm {

/// Runs per-block work on a fixed number of workers. With deterministic
/// reductions (the default) partial results are stored per index and summed
/// in index order by the calling thread, so results do not depend on the
/// worker count.
class BlockExecutor {
 public:
  explicit BlockExecutor(int threads = 1, bool deterministic = true);
  ~BlockExecutor();
  BlockExecutor(const BlockExecutor&) = delete;
  BlockExecutor& operator=(const BlockExecutor&) = delete;

  int threads() const { return threads_; }
  bool deterministic() const { return deterministic_; }

  /// Calls body(t) for t in [0, count); calls for distinct t may run
  /// concurrently and must write disjoint outputs.
  void for_each(int count, const std::function<void(int)>& body) const;

  /// Sum of term(t) over [0, count).
  double sum(int count, const std::function<double(int)>& term) const;

  static const BlockExecutor& serial();

 private:
  struct Arena;
  int threads_;
  bool deterministic_;
  std::unique_ptr<Arena> arena_;
};

}  // namespace fwipm
