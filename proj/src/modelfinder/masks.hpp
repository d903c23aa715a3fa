#pragma once

// n x n boolean matrices packed row-major into 64 bits: (i, j) is bit i*n + j.

#include <bit>
#include <cstdint>

namespace hg::masks {

inline std::uint64_t full_mask(int bits) { return bits >= 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << bits) - 1; }

inline std::uint64_t diag_mask(int n) {
  std::uint64_t m = 0;
  for (int i = 0; i < n; ++i) m |= std::uint64_t{1} << (i * n + i);
  return m;
}

inline std::uint64_t row(std::uint64_t m, int i, int n) { return (m >> (i * n)) & full_mask(n); }

inline std::uint64_t compose(std::uint64_t a, std::uint64_t b, int n) {
  std::uint64_t out = 0;
  for (int i = 0; i < n; ++i) {
    std::uint64_t r = row(a, i, n), acc = 0;
    while (r) {
      const int k = std::countr_zero(r);
      acc |= row(b, k, n);
      r &= r - 1;
    }
    out |= acc << (i * n);
  }
  return out;
}

inline std::uint64_t transpose_mask(std::uint64_t a, int n) {
  std::uint64_t out = 0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (a >> (i * n + j) & 1) out |= std::uint64_t{1} << (j * n + i);
  return out;
}

inline std::uint64_t closure_mask(std::uint64_t a, int n) {
  std::uint64_t c = a;
  for (int k = 0; k < n; ++k) {
    const std::uint64_t rk = row(c, k, n);
    for (int i = 0; i < n; ++i)
      if (c >> (i * n + k) & 1) c |= rk << (i * n);
  }
  return c;
}

}  // namespace hg::masks
