#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <map>
#include <numeric>
#include <set>
#include <vector>

#include "idsim/evolution.hpp"
#include "idsim/genome.hpp"
#include "idsim/rng.hpp"

using namespace idsim;

namespace {

Chromosome from_segments(const std::string& type, const std::string& alpha,
                         const std::string& beta) {
  return chromosome_from_string(type + alpha + beta);
}

std::string segment_str(std::span<const std::uint8_t> seg) {
  std::string s;
  for (auto b : seg) s.push_back(b ? '1' : '0');
  return s;
}

std::multiset<std::uint8_t> segment_bits(std::span<const std::uint8_t> seg) {
  return {seg.begin(), seg.end()};
}

}  // namespace

TEST_CASE("tournament copies the strictly fitter chromosome") {
  const auto c0 = from_segments("0000000000", "0000000000", "0000000000");
  const auto c1 = from_segments("1111111111", "1111111111", "1111111111");
  const std::vector<Chromosome> pool = {c0, c1};
  FitnessVector fit{{1.0, 0.0}};
  Rng rng(3);
  const auto next = tournament_reproduce(pool, fit, rng);
  REQUIRE(next.size() == 2);
  // with fitness (1, 0) any tournament that saw both must return c0; over a
  // few hundred draws c1 survives only via (c1, c1) tournaments
  int c1_copies = 0;
  Rng rng2(4);
  for (int t = 0; t < 100; ++t) {
    const auto out = tournament_reproduce(pool, fit, rng2);
    for (const auto& c : out)
      if (c == c1) ++c1_copies;
  }
  // Pr(copy of c1 per tournament) = Pr(both draws are c1) = 1/4
  CHECK(c1_copies > 20);
  CHECK(c1_copies < 80);
}

TEST_CASE("tournament over identical chromosomes reproduces the input") {
  const auto c = from_segments("0101010101", "0011001100", "1110001110");
  const std::vector<Chromosome> pool(6, c);
  FitnessVector fit{std::vector<double>(6, 0.4)};
  Rng rng(5);
  for (const auto& out : tournament_reproduce(pool, fit, rng))
    REQUIRE(out == c);
}

TEST_CASE("tournament rejects empty or misaligned input") {
  Rng rng(6);
  CHECK_THROWS_AS(tournament_reproduce({}, FitnessVector{}, rng),
                  std::invalid_argument);
  const std::vector<Chromosome> pool = {
      from_segments("0000000000", "0000000000", "0000000000")};
  CHECK_THROWS_AS(tournament_reproduce(pool, FitnessVector{{0.1, 0.2}}, rng),
                  std::invalid_argument);
}

TEST_CASE("selection pressure: mean fitness never drops without variation") {
  int successes = 0;
  for (int seed = 0; seed < 20; ++seed) {
    Rng rng(static_cast<std::uint64_t>(seed) + 1000);
    auto pool = initial_population(40, 10, InitPolicy::uniform_random, rng);
    FitnessVector fit;
    for (std::size_t i = 0; i < pool.size(); ++i)
      fit.fit.push_back(rng.uniform01());
    std::map<std::string, double> fitness_of;
    for (std::size_t i = 0; i < pool.size(); ++i)
      fitness_of[to_string(pool[i])] = fit.fit[i];

    const double parent_mean =
        std::accumulate(fit.fit.begin(), fit.fit.end(), 0.0) / fit.fit.size();
    const auto next = tournament_reproduce(pool, fit, rng);
    double child_mean = 0.0;
    for (const auto& c : next) child_mean += fitness_of.at(to_string(c));
    child_mean /= next.size();
    if (child_mean >= parent_mean) ++successes;
  }
  CHECK(successes >= 18);
}

TEST_CASE("crossover cut-and-swap at a forced point") {
  // r = 6: first 6 bits kept, 4-bit tails swapped, on both segments
  auto c1 = from_segments("0000000000", "0100100001", "1101101110");
  auto c2 = from_segments("1111111111", "0111101110", "0001100010");
  auto [a, b] = crossover_pair_at(c1, c2, 6);
  CHECK(segment_str(a.alpha_segment()) == "0100101110");
  CHECK(segment_str(b.alpha_segment()) == "0111100001");
  CHECK(segment_str(a.beta_segment()) == "1101100010");
  CHECK(segment_str(b.beta_segment()) == "0001101110");
  // type segments never exchanged
  CHECK(segment_str(a.type_segment()) == "0000000000");
  CHECK(segment_str(b.type_segment()) == "1111111111");
  CHECK_THROWS_AS(crossover_pair_at(c1, c2, 0), std::invalid_argument);
  CHECK_THROWS_AS(crossover_pair_at(c1, c2, 10), std::invalid_argument);
}

TEST_CASE("crossover probability gates the exchange") {
  Rng rng(7);
  const auto c1 = from_segments("0000000000", "0100100001", "1101101110");
  const auto c2 = from_segments("1111111111", "0111101110", "0001100010");

  EvolutionParams off{0.0, 0.0, 10};
  auto [a, b] = crossover_pair(c1, c2, off, rng);
  CHECK(a == c1);
  CHECK(b == c2);

  EvolutionParams on{1.0, 0.0, 10};
  auto [c, d] = crossover_pair(c1, c2, on, rng);
  CHECK(c != c1);  // some tail swapped for every admissible r
  // identical parents are fixed points regardless of r
  auto [e, f] = crossover_pair(c1, c1, on, rng);
  CHECK(e == c1);
  CHECK(f == c1);
}

TEST_CASE("crossover conserves the per-pair bit multisets") {
  Rng rng(11);
  EvolutionParams on{1.0, 0.0, 10};
  for (int trial = 0; trial < 100; ++trial) {
    auto pop = initial_population(2, 10, InitPolicy::uniform_random, rng);
    auto alpha_before = segment_bits(pop[0].alpha_segment());
    alpha_before.merge(segment_bits(pop[1].alpha_segment()));
    auto beta_before = segment_bits(pop[0].beta_segment());
    beta_before.merge(segment_bits(pop[1].beta_segment()));

    auto [a, b] = crossover_pair(pop[0], pop[1], on, rng);
    auto alpha_after = segment_bits(a.alpha_segment());
    alpha_after.merge(segment_bits(b.alpha_segment()));
    auto beta_after = segment_bits(a.beta_segment());
    beta_after.merge(segment_bits(b.beta_segment()));
    REQUIRE(alpha_before == alpha_after);
    REQUIRE(beta_before == beta_after);
  }
}

TEST_CASE("crossover_population pairs everyone and rejects odd sizes") {
  Rng rng(13);
  EvolutionParams params{0.0, 0.0, 10};
  auto pop = initial_population(8, 10, InitPolicy::uniform_random, rng);
  auto sorted_strings = [](const std::vector<Chromosome>& v) {
    std::vector<std::string> s;
    for (const auto& c : v) s.push_back(to_string(c));
    std::sort(s.begin(), s.end());
    return s;
  };
  const auto before = sorted_strings(pop);
  const auto after = sorted_strings(crossover_population(pop, params, rng));
  CHECK(before == after);  // p_cross = 0: unchanged up to order

  pop.pop_back();
  CHECK_THROWS_AS(crossover_population(pop, params, rng), std::invalid_argument);
}

TEST_CASE("mutation flips only alpha/beta bits at the configured rate") {
  Rng rng(17);
  const auto c = from_segments("0101010101", "0011001100", "1110001110");

  EvolutionParams off{0.0, 0.0, 10};
  CHECK(mutate(c, off, rng) == c);

  EvolutionParams all{0.0, 1.0, 10};
  const auto flipped = mutate(c, all, rng);
  CHECK(segment_str(flipped.type_segment()) == "0101010101");
  CHECK(segment_str(flipped.alpha_segment()) == "1100110011");
  CHECK(segment_str(flipped.beta_segment()) == "0001110001");

  EvolutionParams rare{0.0, 0.001, 10};
  long flips = 0;
  const long chromosomes = 50000;  // 20 evolvable bits each -> 1e6 bits
  for (long i = 0; i < chromosomes; ++i) {
    const auto m = mutate(c, rare, rng);
    for (int k = 10; k < 30; ++k)
      if (m.bits[static_cast<std::size_t>(k)] != c.bits[static_cast<std::size_t>(k)]) ++flips;
  }
  const double rate = static_cast<double>(flips) / (20.0 * chromosomes);
  CHECK(rate > 0.0007);
  CHECK(rate < 0.0013);
}

TEST_CASE("mutation flips at disjoint positions are uncorrelated") {
  Rng rng(19);
  const auto c = from_segments("0000000000", "0000000000", "0000000000");
  EvolutionParams params{0.0, 0.2, 10};
  const int trials = 20000;
  // 2x2 contingency for flips at two fixed alpha positions
  long table[2][2] = {{0, 0}, {0, 0}};
  for (int t = 0; t < trials; ++t) {
    const auto m = mutate(c, params, rng);
    const int f1 = m.bits[12] != 0;
    const int f2 = m.bits[25] != 0;
    ++table[f1][f2];
  }
  double chi2 = 0.0;
  const double n = trials;
  const double row0 = table[0][0] + table[0][1], row1 = table[1][0] + table[1][1];
  const double col0 = table[0][0] + table[1][0], col1 = table[0][1] + table[1][1];
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) {
      const double expect = (i ? row1 : row0) * (j ? col1 : col0) / n;
      const double diff = table[i][j] - expect;
      chi2 += diff * diff / expect;
    }
  CHECK(chi2 < 10.83);  // df=1 critical value at significance 1e-3
}
