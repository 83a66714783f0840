#include "rosd/kernels.hpp"

namespace rosd::kernels {

namespace {

void honesty_update_scalar(std::size_t n, const double* s_norm, const std::int32_t* product_of,
                           const double* reliability, double* honesty_out) {
    for (std::size_t i = 0; i < n; ++i)
        honesty_out[i] = honesty_point(s_norm[i], reliability[product_of[i]]);
}

void gather_mul_scalar(std::size_t n, const std::int32_t* idx, const double* table,
                       const double* b, double* out) {
    for (std::size_t i = 0; i < n; ++i) out[i] = table[idx[i]] * b[i];
}

void mul_scalar(std::size_t n, const double* a, const double* b, double* out) {
    for (std::size_t i = 0; i < n; ++i) out[i] = a[i] * b[i];
}

}  // namespace

const Ops& scalar_ops() {
    static const Ops ops{"scalar", honesty_update_scalar, gather_mul_scalar, mul_scalar};
    return ops;
}

}  // namespace rosd::kernels
