#include "parallel.hpp"

#include <cstdlib>
#include <string>

namespace facetrack::detail {

int default_worker_count() {
  if (const char* env = std::getenv("FACETRACK_THREADS")) {
    try {
      const int requested = std::stoi(env);
      if (requested >= 1) return requested;
    } catch (...) {
      // Unparseable values fall through to the hardware default.
    }
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw > 0 ? static_cast<int>(hw) : 1;
}

}  // namespace facetrack::detail
