#pragma once

#include <cstddef>
#include <numeric>
#include <stdexcept>
#include <utility>
#include <vector>

#include "idsim/genome.hpp"
#include "idsim/matching.hpp"
#include "idsim/rng.hpp"

namespace idsim {

struct EvolutionParams {
  double p_cross = 0.001;
  double p_mut = 0.001;
  int l = 10;
};

// N binary tournaments with replacement; strictly higher fitness wins,
// ties go to a fair coin.
inline std::vector<Chromosome> tournament_reproduce(
    const std::vector<Chromosome>& chromosomes, const FitnessVector& fitness,
    Rng& rng) {
  const std::size_t n = chromosomes.size();
  if (n == 0) throw std::invalid_argument("population must be non-empty");
  if (fitness.fit.size() != n)
    throw std::invalid_argument("fitness vector must align with population");
  std::vector<Chromosome> next;
  next.reserve(n);
  for (std::size_t t = 0; t < n; ++t) {
    const std::size_t i = rng.bounded(n);
    const std::size_t j = rng.bounded(n);
    std::size_t winner;
    if (fitness.fit[i] > fitness.fit[j]) winner = i;
    else if (fitness.fit[j] > fitness.fit[i]) winner = j;
    else winner = rng.coin() ? i : j;
    next.push_back(chromosomes[winner]);
  }
  return next;
}

// Cut-and-swap at a fixed point r in [1, l-1]: both alpha and beta segments
// of the pair keep their first r bits and exchange the l-r bit tails. Type
// segments never participate.
inline std::pair<Chromosome, Chromosome> crossover_pair_at(Chromosome c1,
                                                           Chromosome c2,
                                                           int r) {
  if (c1.l != c2.l) throw std::invalid_argument("segment lengths must match");
  const int l = c1.l;
  if (r < 1 || r > l - 1) throw std::invalid_argument("cut point must lie in [1, l-1]");
  auto swap_tail = [r, l](std::span<std::uint8_t> s1, std::span<std::uint8_t> s2) {
    for (int k = r; k < l; ++k)
      std::swap(s1[static_cast<std::size_t>(k)], s2[static_cast<std::size_t>(k)]);
  };
  swap_tail(c1.alpha_segment(), c2.alpha_segment());
  swap_tail(c1.beta_segment(), c2.beta_segment());
  return {std::move(c1), std::move(c2)};
}

// Single-point crossover: with probability p_cross one cut point is drawn
// per pair and applied to both segments.
inline std::pair<Chromosome, Chromosome> crossover_pair(
    Chromosome c1, Chromosome c2, const EvolutionParams& params, Rng& rng) {
  if (c1.l != c2.l) throw std::invalid_argument("segment lengths must match");
  if (!rng.bernoulli(params.p_cross)) return {std::move(c1), std::move(c2)};
  if (c1.l < 2) return {std::move(c1), std::move(c2)};
  const int r =
      1 + static_cast<int>(rng.bounded(static_cast<std::uint64_t>(c1.l - 1)));
  return crossover_pair_at(std::move(c1), std::move(c2), r);
}

// Random pairing without replacement; crossover_pair on each of N/2 pairs.
inline std::vector<Chromosome> crossover_population(
    std::vector<Chromosome> chromosomes, const EvolutionParams& params,
    Rng& rng) {
  const std::size_t n = chromosomes.size();
  if (n % 2 != 0) throw std::invalid_argument("population size must be even");
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  for (std::size_t k = n; k > 1; --k)
    std::swap(order[k - 1], order[rng.bounded(k)]);
  for (std::size_t p = 0; p + 1 < n; p += 2) {
    auto [a, b] = crossover_pair(std::move(chromosomes[order[p]]),
                                 std::move(chromosomes[order[p + 1]]), params, rng);
    chromosomes[order[p]] = std::move(a);
    chromosomes[order[p + 1]] = std::move(b);
  }
  return chromosomes;
}

// Bitwise mutation of the alpha and beta segments; the type segment is
// untouched (it is regenerated each generation).
inline Chromosome mutate(Chromosome c, const EvolutionParams& params, Rng& rng) {
  for (int k = c.l; k < 3 * c.l; ++k) {
    if (rng.bernoulli(params.p_mut))
      c.bits[static_cast<std::size_t>(k)] ^= 1u;
  }
  return c;
}

}  // namespace idsim
