#include "metachain/pool.hpp"

namespace metachain {
namespace {
std::atomic<std::size_t> configured{0};
}

void set_worker_threads(std::size_t n) { configured = n; }

std::size_t worker_threads() {
  std::size_t n = configured.load();
  if (n != 0) return n;
  n = std::thread::hardware_concurrency();
  return n == 0 ? 1 : n;
}

}  // namespace metachain
