#include "fountain/embed/vector.hpp"

#include <algorithm>
#include <cmath>

#include "fountain/error.hpp"

namespace fountain::embed {

std::uint64_t fnv1a(std::string_view bytes, std::uint64_t seed) {
  std::uint64_t h = seed;
  for (const char c : bytes) {
    h ^= static_cast<unsigned char>(c);
    h *= kFnvPrime;
  }
  return h;
}

std::string hex64(std::uint64_t value) {
  static constexpr char kDigits[] = "0123456789abcdef";
  std::string out(16, '0');
  for (int i = 15; i >= 0; --i) {
    out[static_cast<std::size_t>(i)] = kDigits[value & 0xF];
    value >>= 4;
  }
  return out;
}

bool is_zero(const EmbeddingVector& v) {
  return std::all_of(v.begin(), v.end(), [](double x) { return x == 0.0; });
}

void normalize_in_place(EmbeddingVector& v) {
  double sum = 0.0;
  for (const double x : v) {
    if (!std::isfinite(x)) throw Error(ErrorCode::kInvalidArgument, "non-finite vector component");
    sum += x * x;
  }
  if (sum == 0.0) return;
  const double norm = std::sqrt(sum);
  for (double& x : v) x /= norm;
}

double cosine(const EmbeddingVector& u, const EmbeddingVector& v) {
  if (u.size() != v.size()) {
    throw Error(ErrorCode::kDimensionMismatch,
                "cosine of vectors with dimensions " + std::to_string(u.size()) + " and " +
                    std::to_string(v.size()),
                {{"expected", u.size()}, {"actual", v.size()}});
  }
  double dot = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) dot += u[i] * v[i];
  return std::clamp(dot, -1.0, 1.0);
}

}  // namespace fountain::embed
