#include "hyw/parallel.hpp"

#include <cstdlib>
#include <string>

#include "hyw/error.hpp"

namespace hyw {

unsigned default_thread_count() {
    const char* env = std::getenv("HYW_THREADS");
    if (env == nullptr || *env == '\0') {
        return 1;
    }
    std::size_t used = 0;
    long v = 0;
    try {
        v = std::stol(env, &used);
    } catch (const std::exception&) {
        throw ConfigError(std::string("HYW_THREADS is not an integer: ") + env);
    }
    if (used != std::string(env).size() || v < 1 || v > 1024) {
        throw ConfigError(std::string("HYW_THREADS must be an integer in [1, 1024]: ") + env);
    }
    return static_cast<unsigned>(v);
}

}  // namespace hyw
