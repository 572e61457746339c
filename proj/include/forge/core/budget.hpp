#pragma once

#include <cstddef>
#include <cstdlib>
#include <string>

#include "forge/core/error.hpp"

namespace forge {

// Search limits shared by every exhaustive procedure. `max_nodes` caps the
// number of search-tree nodes one call may expand; `max_vertices` caps the
// size of graphs a search accepts or a builder emits; `max_instances` caps
// the size of an enumerated corpus.
struct Budget {
  std::size_t max_nodes = 50'000'000;
  std::size_t max_vertices = 4096;
  std::size_t max_instances = 5'000'000;

  // Reads FORGE_BUDGET (search nodes) from the environment when set.
  static Budget from_env() {
    Budget b;
    if (const char* env = std::getenv("FORGE_BUDGET"); env != nullptr && *env != '\0') {
      char* end = nullptr;
      unsigned long long v = std::strtoull(env, &end, 10);
      if (end != nullptr && *end == '\0' && v > 0) b.max_nodes = static_cast<std::size_t>(v);
    }
    return b;
  }

  void check_vertices(std::size_t n, const char* what) const {
    if (n > max_vertices) {
      throw BudgetExceeded(std::string(what) + ": vertex count over budget", n);
    }
  }

  void check_instances(std::size_t n, const char* what) const {
    if (n > max_instances) {
      throw BudgetExceeded(std::string(what) + ": instance count over budget", n);
    }
  }
};

inline const Budget& default_budget() {
  static const Budget b = Budget::from_env();
  return b;
}

// Counts expanded nodes for one search and throws once the cap is hit.
class NodeCounter {
 public:
  explicit NodeCounter(const Budget& b) : limit_(b.max_nodes) {}

  void tick(const char* what) {
    if (++count_ > limit_) throw BudgetExceeded(std::string(what) + ": search node budget exhausted", count_);
  }

  std::size_t count() const noexcept { return count_; }

 private:
  std::size_t limit_;
  std::size_t count_ = 0;
};

}  // namespace forge
