#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace fountain::embed {

// Unit-norm, or all zeros for text that carries nothing to embed.
using EmbeddingVector = std::vector<double>;

inline constexpr std::uint64_t kFnvOffset = 14695981039346656037ULL;
inline constexpr std::uint64_t kFnvPrime = 1099511628211ULL;

// 64-bit FNV-1a; `seed` lets callers chain several fields into one hash.
std::uint64_t fnv1a(std::string_view bytes, std::uint64_t seed = kFnvOffset);
// Fixed-width lowercase hex, 16 digits.
std::string hex64(std::uint64_t value);

bool is_zero(const EmbeddingVector& v);
// Scales to unit L2 norm; an all-zero vector is left as is. Throws
// kInvalidArgument on non-finite components.
void normalize_in_place(EmbeddingVector& v);

// Dot product of unit vectors, clamped to [-1, 1]; 0.0 when either side is
// the zero vector. Throws kDimensionMismatch on unequal lengths.
double cosine(const EmbeddingVector& u, const EmbeddingVector& v);

}  // namespace fountain::embed
