#include "potflow/parallel.hpp"

#include <algorithm>
#include <cstdlib>
#include <string>

namespace potflow {

unsigned worker_count() {
  unsigned n = std::max(1u, std::thread::hardware_concurrency());
  if (const char* env = std::getenv("POTFLOW_THREADS")) {
    try {
      const long cap = std::stol(env);
      if (cap >= 1) {
        n = std::min<unsigned>(n, static_cast<unsigned>(cap));
      }
    } catch (const std::exception&) {
      // unparsable values leave the default in place
    }
  }
  return n;
}

} // namespace potflow
