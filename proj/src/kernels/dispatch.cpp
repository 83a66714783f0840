#include <cstdlib>
#include <stdexcept>
#include <string>

#include "rosd/kernels.hpp"

namespace rosd::kernels {

const Ops* avx2_ops_or_null();  // defined in kernels_avx2.cpp

bool avx2_supported() {
#if defined(__x86_64__) || defined(_M_X64)
    return avx2_ops_or_null() != nullptr && __builtin_cpu_supports("avx2");
#else
    return false;
#endif
}

const Ops& active_ops() {
    static const Ops* selected = [] {
        if (const char* env = std::getenv("ROSD_KERNEL")) {
            std::string want = env;
            if (want == "avx2" && avx2_supported()) return avx2_ops_or_null();
            return &scalar_ops();
        }
        if (avx2_supported()) return avx2_ops_or_null();
        return &scalar_ops();
    }();
    return *selected;
}

const Ops& ops_by_name(const std::string& name) {
    if (name == "scalar") return scalar_ops();
    if (name == "avx2") {
        if (!avx2_supported()) throw std::invalid_argument("avx2 backend not supported here");
        return *avx2_ops_or_null();
    }
    throw std::invalid_argument("unknown kernel backend: " + name);
}

}  // namespace rosd::kernels
