#pragma once

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <mutex>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "idsim/evolution.hpp"
#include "idsim/genome.hpp"
#include "idsim/interpreter.hpp"
#include "idsim/matching.hpp"
#include "idsim/rng.hpp"

namespace idsim {

struct SimConfig {
  int agents = 100;
  int segment_length = 10;
  int periods = 600;
  int replications = 30;
  double p_mut = 0.001;
  double p_cross = 0.001;
  double bin_size = 0.1;
  double eps_class = kDefaultEpsClass;
  int rounds = 32;  // Monte Carlo matching rounds per generation
  InitPolicy init_policy = InitPolicy::binary_origin;
  FitnessMode fitness_mode = FitnessMode::monte_carlo;
  std::uint64_t master_seed = 0;
  int threads = 1;

  void validate() const {
    if (agents < 2 || agents % 2 != 0)
      throw std::invalid_argument("agents must be even and >= 2 (got " +
                                  std::to_string(agents) + ")");
    if (segment_length < 1 || segment_length > 63)
      throw std::invalid_argument("segment_length must lie in [1, 63]");
    if (periods < 0) throw std::invalid_argument("periods must be >= 0");
    if (replications < 1) throw std::invalid_argument("replications must be >= 1");
    if (p_mut < 0.0 || p_mut > 1.0) throw std::invalid_argument("pmut must lie in [0, 1]");
    if (p_cross < 0.0 || p_cross > 1.0) throw std::invalid_argument("pcross must lie in [0, 1]");
    if (bin_size < 0.0) throw std::invalid_argument("bin_size must be >= 0");
    if (!(eps_class > 0.0 && eps_class < 0.5))
      throw std::invalid_argument("eps_class must lie in (0, 0.5)");
    if (rounds < 1) throw std::invalid_argument("rounds must be >= 1");
    if (threads < 1) throw std::invalid_argument("threads must be >= 1");
  }
};

struct GenerationMetrics {
  int gen = 0;
  double prop_zero = 0.0;
  double prop_one = 0.0;
  double prop_nonbinary = 0.0;
  double match_prob = 0.0;
  double unmatched = 0.0;  // integral in raw series, possibly x.5 in medians
  double mean_fitness = 0.0;
};

class SimulationError : public std::runtime_error {
 public:
  SimulationError(int replication, int gen, const std::string& what)
      : std::runtime_error("replication " + std::to_string(replication) +
                           ", generation " + std::to_string(gen) + ": " + what),
        replication(replication),
        gen(gen) {}
  int replication;
  int gen;
};

// One generation step: decode -> translate -> classify -> match -> fitness,
// metrics taken from that pre-evolution state, then reproduction ->
// crossover -> mutation and a fresh draw of every type segment.
inline GenerationMetrics run_generation(std::vector<Chromosome>& chromosomes,
                                        const SimConfig& config, int gen,
                                        Rng& rng) {
  const std::size_t n = chromosomes.size();
  Population pop;
  pop.members.reserve(n);
  for (const auto& c : chromosomes)
    pop.members.push_back(classify(translate_identity(decode(c)), config.eps_class));

  MatchingResult first_round;
  const FitnessVector fitness =
      estimate_fitness(pop, config.bin_size, config.fitness_mode, config.rounds,
                       rng, &first_round);

  GenerationMetrics metrics;
  metrics.gen = gen;
  for (const auto& m : pop.members) {
    if (m.tag == IdentityTag::Zero) metrics.prop_zero += 1.0;
    else if (m.tag == IdentityTag::One) metrics.prop_one += 1.0;
    else metrics.prop_nonbinary += 1.0;
  }
  metrics.prop_zero /= static_cast<double>(n);
  metrics.prop_one /= static_cast<double>(n);
  metrics.prop_nonbinary /= static_cast<double>(n);
  metrics.unmatched = static_cast<double>(first_round.unmatched.size());
  double fit_sum = 0.0;
  for (double f : fitness.fit) fit_sum += f;
  metrics.mean_fitness = fit_sum / static_cast<double>(n);
  metrics.match_prob = metrics.mean_fitness;

  const EvolutionParams params{config.p_cross, config.p_mut, config.segment_length};
  chromosomes = tournament_reproduce(chromosomes, fitness, rng);
  chromosomes = crossover_population(std::move(chromosomes), params, rng);
  for (auto& c : chromosomes) {
    c = mutate(std::move(c), params, rng);
    randomize_type_segment(c, rng);
  }
  return metrics;
}

// One replication, deterministic given (master_seed, replication_index).
inline std::vector<GenerationMetrics> run_simulation(const SimConfig& config,
                                                     int replication_index) {
  config.validate();
  Rng rng(replication_stream_seed(config.master_seed,
                                  static_cast<std::uint64_t>(replication_index)));
  std::vector<Chromosome> chromosomes = initial_population(
      config.agents, config.segment_length, config.init_policy, rng);
  std::vector<GenerationMetrics> series;
  series.reserve(static_cast<std::size_t>(config.periods));
  for (int gen = 0; gen < config.periods; ++gen) {
    try {
      series.push_back(run_generation(chromosomes, config, gen, rng));
    } catch (const BetaInverseError& e) {
      throw SimulationError(replication_index, gen, e.what());
    }
  }
  return series;
}

struct ReplicationSet {
  std::vector<std::vector<GenerationMetrics>> raw;  // indexed by replication
  std::vector<GenerationMetrics> median;            // per-generation medians
};

namespace detail {

inline double median_of(std::vector<double>& v) {
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  if (n % 2 == 1) return v[n / 2];
  return 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

}  // namespace detail

// Runs all replications (optionally across threads) and aggregates
// per-generation medians of every metric. Output is identical regardless of
// thread count: each replication owns its derived stream and results are
// stored by index.
inline ReplicationSet run_replications(const SimConfig& config) {
  config.validate();
  ReplicationSet out;
  out.raw.resize(static_cast<std::size_t>(config.replications));

  const int workers = std::min(config.threads, config.replications);
  std::atomic<int> next{0};
  std::atomic<bool> failed{false};
  std::exception_ptr first_error;
  std::mutex error_mutex;
  auto work = [&] {
    for (;;) {
      const int r = next.fetch_add(1);
      if (r >= config.replications || failed.load()) break;
      try {
        out.raw[static_cast<std::size_t>(r)] = run_simulation(config, r);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!first_error) first_error = std::current_exception();
        failed.store(true);
      }
    }
  };
  if (workers <= 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(workers));
    for (int w = 0; w < workers; ++w) pool.emplace_back(work);
    for (auto& t : pool) t.join();
  }
  if (first_error) std::rethrow_exception(first_error);

  out.median.reserve(static_cast<std::size_t>(config.periods));
  std::vector<double> scratch(static_cast<std::size_t>(config.replications));
  for (int gen = 0; gen < config.periods; ++gen) {
    GenerationMetrics m;
    m.gen = gen;
    auto collect = [&](auto getter) {
      for (int r = 0; r < config.replications; ++r)
        scratch[static_cast<std::size_t>(r)] =
            getter(out.raw[static_cast<std::size_t>(r)][static_cast<std::size_t>(gen)]);
      return detail::median_of(scratch);
    };
    m.prop_zero = collect([](const GenerationMetrics& g) { return g.prop_zero; });
    m.prop_one = collect([](const GenerationMetrics& g) { return g.prop_one; });
    m.prop_nonbinary = collect([](const GenerationMetrics& g) { return g.prop_nonbinary; });
    m.match_prob = collect([](const GenerationMetrics& g) { return g.match_prob; });
    m.unmatched = collect([](const GenerationMetrics& g) { return g.unmatched; });
    m.mean_fitness = collect([](const GenerationMetrics& g) { return g.mean_fitness; });
    out.median.push_back(m);
  }
  return out;
}

}  // namespace idsim
