#include "gkdv/parallel.hpp"

#include <atomic>
#include <thread>

namespace gkdv {

namespace {
std::atomic<int> configured{0};
}

int default_threads() {
  const int n = configured.load();
  if (n > 0) return n;
  return std::max(1u, std::thread::hardware_concurrency());
}

void set_default_threads(int n) { configured = n > 0 ? n : 0; }

}  // namespace gkdv
