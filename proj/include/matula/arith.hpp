#pragma once

#include <cstdint>
#include <limits>
#include <string>

#include "matula/errors.hpp"

namespace matula {

using u64 = std::uint64_t;
using i64 = std::int64_t;

inline u64 checked_mul(u64 a, u64 b) {
    u64 r;
    if (__builtin_mul_overflow(a, b, &r))
        throw overflow_error("64-bit overflow in " + std::to_string(a) + " * " + std::to_string(b));
    return r;
}

inline u64 checked_add(u64 a, u64 b) {
    u64 r;
    if (__builtin_add_overflow(a, b, &r))
        throw overflow_error("64-bit overflow in " + std::to_string(a) + " + " + std::to_string(b));
    return r;
}

} // namespace matula
