#include "idsq/parallel.hpp"

#include <cstdlib>

namespace idsq {

Parallelism Parallelism::from_environment() {
    if (const char* env = std::getenv("IDSQ_THREADS"); env != nullptr && *env != '\0') {
        long n = std::strtol(env, nullptr, 10);
        if (n >= 1) return {static_cast<unsigned>(n)};
    }
    return {std::max(1u, std::thread::hardware_concurrency())};
}

}  // namespace idsq
