#pragma once

#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "idsim/rng.hpp"

namespace idsim {

// Fixed-length binary chromosome: three segments of l bits each.
// bits[0..l)   type segment (stochastic, regenerated every generation)
// bits[l..2l)  alpha segment
// bits[2l..3l) beta segment
struct Chromosome {
  std::vector<std::uint8_t> bits;
  int l = 0;

  Chromosome() = default;
  Chromosome(std::vector<std::uint8_t> b, int seg_len)
      : bits(std::move(b)), l(seg_len) {
    if (l < 1 || bits.size() != static_cast<std::size_t>(3 * l))
      throw std::invalid_argument("chromosome must have exactly 3*l bits");
    for (auto bit : bits)
      if (bit > 1) throw std::invalid_argument("chromosome bits must be 0 or 1");
  }

  std::span<const std::uint8_t> type_segment() const { return {bits.data(), static_cast<std::size_t>(l)}; }
  std::span<const std::uint8_t> alpha_segment() const { return {bits.data() + l, static_cast<std::size_t>(l)}; }
  std::span<const std::uint8_t> beta_segment() const { return {bits.data() + 2 * l, static_cast<std::size_t>(l)}; }

  std::span<std::uint8_t> alpha_segment() { return {bits.data() + l, static_cast<std::size_t>(l)}; }
  std::span<std::uint8_t> beta_segment() { return {bits.data() + 2 * l, static_cast<std::size_t>(l)}; }

  bool operator==(const Chromosome&) const = default;
};

struct DecodedGenome {
  double x = 0.0;           // individual type
  double alpha_gene = 0.0;  // first interpreter gene
  double beta_gene = 0.0;   // second interpreter gene
};

enum class InitPolicy { binary_origin, uniform_random };

// Base-two value of a segment; the rightmost bit carries weight 2^0.
inline std::uint64_t decode_segment(std::span<const std::uint8_t> segment) {
  if (segment.empty() || segment.size() > 63)
    throw std::invalid_argument("segment length must be in [1, 63]");
  std::uint64_t m = 0;
  for (auto bit : segment) {
    if (bit > 1) throw std::invalid_argument("segment bits must be 0 or 1");
    m = (m << 1) | bit;
  }
  return m;
}

// m / (2^l - 1); maps the full segment range onto [0, 1].
inline double normalize(std::uint64_t m, int l) {
  if (l < 1 || l > 63) throw std::invalid_argument("segment length must be in [1, 63]");
  const std::uint64_t k_bar = (std::uint64_t{1} << l) - 1;
  if (m > k_bar) throw std::invalid_argument("decoded value exceeds 2^l - 1");
  return static_cast<double>(m) / static_cast<double>(k_bar);
}

inline DecodedGenome decode(const Chromosome& c) {
  return {normalize(decode_segment(c.type_segment()), c.l),
          normalize(decode_segment(c.alpha_segment()), c.l),
          normalize(decode_segment(c.beta_segment()), c.l)};
}

inline std::vector<std::uint8_t> fresh_type_segment(int l, Rng& rng) {
  std::vector<std::uint8_t> seg(static_cast<std::size_t>(l));
  for (auto& bit : seg) bit = rng.coin() ? 1 : 0;
  return seg;
}

inline void randomize_type_segment(Chromosome& c, Rng& rng) {
  for (int k = 0; k < c.l; ++k) c.bits[static_cast<std::size_t>(k)] = rng.coin() ? 1 : 0;
}

inline std::vector<Chromosome> initial_population(int n, int l,
                                                  InitPolicy policy, Rng& rng) {
  if (n < 2 || n % 2 != 0)
    throw std::invalid_argument("population size must be even and >= 2");
  std::vector<Chromosome> pop;
  pop.reserve(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    std::vector<std::uint8_t> bits(static_cast<std::size_t>(3 * l), 0);
    for (int k = 0; k < l; ++k) bits[static_cast<std::size_t>(k)] = rng.coin() ? 1 : 0;
    if (policy == InitPolicy::uniform_random) {
      for (int k = l; k < 3 * l; ++k) bits[static_cast<std::size_t>(k)] = rng.coin() ? 1 : 0;
    }
    pop.emplace_back(std::move(bits), l);
  }
  return pop;
}

// ASCII serialization: type, alpha, beta concatenated left to right.
inline std::string to_string(const Chromosome& c) {
  std::string s;
  s.reserve(c.bits.size());
  for (auto bit : c.bits) s.push_back(bit ? '1' : '0');
  return s;
}

inline Chromosome chromosome_from_string(const std::string& s) {
  if (s.size() % 3 != 0 || s.empty())
    throw std::invalid_argument("chromosome string length must be 3*l");
  std::vector<std::uint8_t> bits;
  bits.reserve(s.size());
  for (char ch : s) {
    if (ch != '0' && ch != '1')
      throw std::invalid_argument("chromosome string must contain only 0/1");
    bits.push_back(static_cast<std::uint8_t>(ch - '0'));
  }
  return Chromosome(std::move(bits), static_cast<int>(s.size() / 3));
}

}  // namespace idsim
