#pragma once

// Order-preserving surjections [m] ->> [k] encoded as jump masks: bit j is set
// when sigma(j+1) = sigma(j) + 1. The mask has m bits and popcount k.

#include <bit>
#include <cstdint>
#include <vector>

namespace aqlab::surj {

using Mask = std::uint32_t;

inline constexpr int kMaxLevel = 30;

inline Mask full(int m) { return m <= 0 ? 0u : (m >= 32 ? ~0u : ((1u << m) - 1u)); }
inline int popcount(Mask x) { return std::popcount(x); }
inline bool bit(Mask x, int j) { return ((x >> j) & 1u) != 0; }

/// sigma o s^j: a non-jump inserted at gap j (the degeneracy s_j).
inline Mask insert_gap(Mask x, int j) {
  Mask low = x & full(j);
  return low | ((x >> j) << (j + 1));
}

enum class FaceKind { kSurjective, kMissesTop, kZero };

struct FaceResult {
  FaceKind kind;
  Mask mask;  // the epi part on level m-1 (valid unless kZero)
};

/// sigma o delta^i for sigma: [m] ->> [k]. Reports whether the composite is
/// still onto, misses exactly the top vertex k, or misses some other vertex.
inline FaceResult face(Mask x, int m, int i) {
  if (i == 0) {
    if (bit(x, 0)) return {FaceKind::kZero, 0};
    return {FaceKind::kSurjective, x >> 1};
  }
  if (i == m) {
    Mask rest = x & full(m - 1);
    if (bit(x, m - 1)) return {FaceKind::kMissesTop, rest};
    return {FaceKind::kSurjective, rest};
  }
  const bool a = bit(x, i - 1);
  const bool b = bit(x, i);
  if (a && b) return {FaceKind::kZero, 0};
  Mask merged = (x & full(i - 1)) | (static_cast<Mask>(a || b) << (i - 1)) | ((x >> (i + 1)) << i);
  return {FaceKind::kSurjective, merged};
}

/// Jump mask of tau o sigma, with sigma: [m] ->> [k] and tau: [k] ->> [l]:
/// tau's bits are deposited at the jump positions of sigma.
inline Mask compose(Mask tau, Mask sigma) {
  Mask out = 0;
  int t = 0;
  for (int pos = 0; pos < 32; ++pos) {
    if (bit(sigma, pos)) {
      if (bit(tau, t)) out |= (1u << pos);
      ++t;
    }
  }
  return out;
}

/// All m-bit masks with popcount k, ascending.
inline std::vector<Mask> masks_with_popcount(int m, int k) {
  std::vector<Mask> out;
  if (k < 0 || k > m) return out;
  for (Mask x = 0; x <= full(m); ++x) {
    if (popcount(x) == k) out.push_back(x);
    if (x == full(m)) break;
  }
  return out;
}

}  // namespace aqlab::surj
