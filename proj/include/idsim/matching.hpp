#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numeric>
#include <stdexcept>
#include <utility>
#include <vector>

#include "idsim/interpreter.hpp"
#include "idsim/rng.hpp"

namespace idsim {

struct Population {
  std::vector<IdentityClass> members;

  std::size_t size() const { return members.size(); }
};

struct MatchingResult {
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  std::vector<std::size_t> unmatched;
};

struct FitnessVector {
  std::vector<double> fit;
};

enum class FitnessMode { analytic_binary, monte_carlo };

class ModeMismatchError : public std::invalid_argument {
 public:
  ModeMismatchError()
      : std::invalid_argument(
            "analytic_binary fitness requires an all-binary population") {}
};

// Directed preference. Binary identities hold strict preferences for the
// opposite pole; a nonbinary identity accepts anything within its bin.
inline bool prefers(const IdentityClass& from, const IdentityClass& to,
                    double b) {
  if (b < 0.0) throw std::invalid_argument("bin size must be >= 0");
  switch (from.tag) {
    case IdentityTag::Zero: return to.tag == IdentityTag::One;
    case IdentityTag::One: return to.tag == IdentityTag::Zero;
    default: return std::fabs(to.value() - from.xi) <= b;
  }
}

inline bool mutual(const IdentityClass& i, const IdentityClass& j, double b) {
  return prefers(i, j, b) && prefers(j, i, b);
}

// Uniformly random greedy maximal matching: visit in a random permutation,
// each still-unmatched individual grabs a uniformly random compatible
// unmatched partner.
inline MatchingResult realize_matching(const Population& pop, double b,
                                       Rng& rng) {
  const std::size_t n = pop.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  for (std::size_t k = n; k > 1; --k)
    std::swap(order[k - 1], order[rng.bounded(k)]);

  std::vector<bool> matched(n, false);
  MatchingResult result;
  std::vector<std::size_t> candidates;
  for (std::size_t idx : order) {
    if (matched[idx]) continue;
    candidates.clear();
    for (std::size_t j = 0; j < n; ++j) {
      if (j == idx || matched[j]) continue;
      if (mutual(pop.members[idx], pop.members[j], b)) candidates.push_back(j);
    }
    if (candidates.empty()) continue;
    const std::size_t partner =
        candidates[rng.bounded(candidates.size())];
    matched[idx] = matched[partner] = true;
    result.pairs.emplace_back(std::min(idx, partner), std::max(idx, partner));
  }
  for (std::size_t j = 0; j < n; ++j)
    if (!matched[j]) result.unmatched.push_back(j);
  return result;
}

// Matching probability of one side of a binary population with class
// counts (N_o own class, N_p partner class).
inline double fitness_binary_counts(std::size_t n_o, std::size_t n_p) {
  if (n_o < 1) throw std::invalid_argument("own class count must be >= 1");
  if (n_p == 0) return 0.0;
  if (n_o <= n_p) return 1.0;
  return static_cast<double>(n_p) / static_cast<double>(n_o);
}

inline FitnessVector estimate_fitness(const Population& pop, double b,
                                      FitnessMode mode, int rounds, Rng& rng,
                                      MatchingResult* first_round = nullptr) {
  const std::size_t n = pop.size();
  FitnessVector fitness;
  fitness.fit.assign(n, 0.0);

  if (mode == FitnessMode::analytic_binary) {
    std::size_t n_zero = 0, n_one = 0;
    for (const auto& m : pop.members) {
      if (m.tag == IdentityTag::Zero) ++n_zero;
      else if (m.tag == IdentityTag::One) ++n_one;
      else throw ModeMismatchError();
    }
    for (std::size_t i = 0; i < n; ++i) {
      fitness.fit[i] = pop.members[i].tag == IdentityTag::Zero
                           ? fitness_binary_counts(n_zero, n_one)
                           : fitness_binary_counts(n_one, n_zero);
    }
    if (first_round) *first_round = realize_matching(pop, b, rng);
    return fitness;
  }

  if (rounds < 1) throw std::invalid_argument("monte_carlo requires rounds >= 1");
  std::vector<int> match_count(n, 0);
  for (int r = 0; r < rounds; ++r) {
    MatchingResult m = realize_matching(pop, b, rng);
    for (const auto& [i, j] : m.pairs) {
      ++match_count[i];
      ++match_count[j];
    }
    if (r == 0 && first_round) *first_round = std::move(m);
  }
  for (std::size_t i = 0; i < n; ++i)
    fitness.fit[i] = static_cast<double>(match_count[i]) / rounds;
  return fitness;
}

}  // namespace idsim
