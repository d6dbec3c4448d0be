#pragma once

#include <cstdint>
#include <string>

#include "motifsp/error.hpp"

namespace motifsp::detail {

inline std::uint64_t checked_add(std::uint64_t a, std::uint64_t b) {
  std::uint64_t r;
  if (__builtin_add_overflow(a, b, &r)) throw CountOverflow("64-bit count overflow (add)");
  return r;
}

inline std::uint64_t checked_mul(std::uint64_t a, std::uint64_t b) {
  std::uint64_t r;
  if (__builtin_mul_overflow(a, b, &r)) throw CountOverflow("64-bit count overflow (mul)");
  return r;
}

inline std::uint64_t checked_sub(std::uint64_t a, std::uint64_t b, const char* what) {
  if (b > a) throw CountOverflow(std::string("negative induced count while solving for ") + what);
  return a - b;
}

inline std::uint64_t choose2(std::uint64_t n) { return n < 2 ? 0 : checked_mul(n, n - 1) / 2; }

inline std::uint64_t choose3(std::uint64_t n) {
  if (n < 3) return 0;
  // n(n-1) is even; divide early to delay overflow
  std::uint64_t a = n, b = n - 1, c = n - 2;
  if (a % 2 == 0) a /= 2; else b /= 2;
  if (a % 3 == 0) a /= 3; else if (b % 3 == 0) b /= 3; else c /= 3;
  return checked_mul(checked_mul(a, b), c);
}

}  // namespace motifsp::detail
