#include "gwleaf/parallel.hpp"

#include <cstdlib>
#include <string>

namespace gwleaf {

unsigned worker_count() {
    if (const char* env = std::getenv("GWLEAF_THREADS")) {
        try {
            const long v = std::stol(env);
            if (v > 0) return static_cast<unsigned>(v);
        } catch (...) {
        }
    }
    return std::max(1u, std::thread::hardware_concurrency());
}

}  // namespace gwleaf
