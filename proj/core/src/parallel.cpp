#include "nrgate/parallel.hpp"

#include <cstdlib>
#include <string>

namespace nrgate {

std::size_t default_parallelism() {
  if (const char* env = std::getenv("NRGATE_PARALLELISM")) {
    try {
      const long v = std::stol(env);
      if (v > 0) return static_cast<std::size_t>(v);
    } catch (const std::exception&) {
    }
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : hw;
}

}  // namespace nrgate
