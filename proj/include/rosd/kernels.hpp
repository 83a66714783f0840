#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <string>

namespace rosd::kernels {

// The solver's per-pass work factors into three elementwise maps over the
// review array plus per-segment sequential sums. Only the elementwise maps
// are dispatched; the segment sums run in a fixed canonical order shared by
// every backend. Each SIMD backend must produce bit-identical results to the
// scalar reference (equivalence-tested), so a solve is bitwise reproducible
// no matter which backend the host selects.
struct Ops {
    const char* name;
    // h[i] = clamp_0( 1 - |s[i] - rel[prod[i]]| / max(rel[prod[i]], 1 - rel[prod[i]]) )
    void (*honesty_update)(std::size_t n, const double* s_norm, const std::int32_t* product_of,
                           const double* reliability, double* honesty_out);
    // out[i] = table[idx[i]] * b[i]
    void (*gather_mul)(std::size_t n, const std::int32_t* idx, const double* table,
                       const double* b, double* out);
    // out[i] = a[i] * b[i]
    void (*mul)(std::size_t n, const double* a, const double* b, double* out);
};

/// Scalar semantics of one honesty update, shared by the scalar backend and
/// the standalone formula API.
inline double honesty_point(double s_norm, double reliability) {
    const double w = (reliability > 1.0 - reliability) ? reliability : 1.0 - reliability;
    const double h = 1.0 - std::fabs(s_norm - reliability) / w;
    return (h > 0.0) ? h : 0.0;
}

const Ops& scalar_ops();

bool avx2_supported();

/// Backend the dispatcher would pick: AVX2 when the CPU has it, else scalar.
/// ROSD_KERNEL=scalar|avx2 overrides (unsupported/unknown values fall back
/// to scalar).
const Ops& active_ops();

/// Backend by name ("scalar", "avx2"); throws std::invalid_argument for an
/// unknown or unsupported name. Used by equivalence tests.
const Ops& ops_by_name(const std::string& name);

}  // namespace rosd::kernels
