#include "pcornet/parallel.hpp"

#include <cstdlib>
#include <string>
#include <thread>

namespace pcornet {

int resolve_threads(int requested) {
  if (requested > 0) return requested;
  if (const char* env = std::getenv("PCORNET_THREADS")) {
    try {
      int v = std::stoi(env);
      if (v > 0) return v;
    } catch (...) {
      // fall through to the hardware default
    }
  }
  unsigned hc = std::thread::hardware_concurrency();
  return hc > 0 ? static_cast<int>(hc) : 1;
}

}  // namespace pcornet
