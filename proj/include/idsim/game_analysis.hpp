#pragma once

#include <array>
#include <cmath>
#include <stdexcept>
#include <utility>
#include <vector>

#include "idsim/rng.hpp"

namespace idsim {

enum class Action { binary, nonbinary };

using Profile = std::pair<Action, Action>;

// The 2x2 coordination game over identity regimes. Coordinating on binary
// pays (0.5, 0.5); coordinating on nonbinary pays (phi, phi); miscoordination
// pays (0, 0).
struct StageGame {
  double phi = 0.0;

  // Row player's payoff; the game is symmetric.
  double payoff(Action row, Action col) const {
    if (row != col) return 0.0;
    return row == Action::binary ? 0.5 : phi;
  }
};

struct MixedStrategy {
  double p_binary = 1.0;

  double p_nonbinary() const { return 1.0 - p_binary; }
};

inline StageGame build_game(double phi) {
  if (!(phi >= 0.0 && phi <= 1.0))
    throw std::invalid_argument("phi must lie in [0, 1]");
  return {phi};
}

inline constexpr std::array<Action, 2> kActions = {Action::binary,
                                                   Action::nonbinary};

// All pure strategy profiles with no strictly improving unilateral deviation.
inline std::vector<Profile> pure_nash(const StageGame& game) {
  std::vector<Profile> result;
  for (Action row : kActions) {
    for (Action col : kActions) {
      bool stable = true;
      for (Action dev : kActions) {
        if (game.payoff(dev, col) > game.payoff(row, col)) stable = false;
        if (game.payoff(dev, row) > game.payoff(col, row)) stable = false;
      }
      if (stable) result.emplace_back(row, col);
    }
  }
  return result;
}

inline bool is_pure_nash(const StageGame& game, const Profile& profile) {
  for (const auto& eq : pure_nash(game))
    if (eq == profile) return true;
  return false;
}

namespace detail {

// Weak dominance of `action` by the other action, from the row perspective
// (symmetric game, so this covers both players).
inline bool weakly_dominated(const StageGame& game, Action action) {
  const Action other =
      action == Action::binary ? Action::nonbinary : Action::binary;
  bool never_worse = true;
  bool sometimes_better = false;
  for (Action col : kActions) {
    const double p_other = game.payoff(other, col);
    const double p_action = game.payoff(action, col);
    if (p_other < p_action) never_worse = false;
    if (p_other > p_action) sometimes_better = true;
  }
  return never_worse && sometimes_better;
}

}  // namespace detail

// Two-player THPE criterion: an equilibrium is trembling-hand perfect iff
// no player uses a weakly dominated action.
inline bool is_thpe(const StageGame& game, const Profile& profile) {
  if (!is_pure_nash(game, profile))
    throw std::invalid_argument("is_thpe requires a pure Nash equilibrium");
  return !detail::weakly_dominated(game, profile.first) &&
         !detail::weakly_dominated(game, profile.second);
}

// Constructive THPE check against the tremble family assigning probability
// 1/(k+3) to the off-profile action. A finite prefix of the family may be
// discarded (reindexing preserves convergence), so the check asks that the
// profile action be a best response on a tail of k values ending at k_max.
inline bool thpe_tremble_check(const StageGame& game, const Profile& profile,
                               int k_max) {
  if (!is_pure_nash(game, profile))
    throw std::invalid_argument("thpe_tremble_check requires a pure Nash equilibrium");
  if (k_max < 1) throw std::invalid_argument("k_max must be >= 1");
  auto best_response_at = [&](Action own, int k) {
    const double tremble = 1.0 / (k + 3.0);
    const Action off = own == Action::binary ? Action::nonbinary : Action::binary;
    const double own_payoff =
        (1.0 - tremble) * game.payoff(own, own) + tremble * game.payoff(own, off);
    const double dev_payoff =
        (1.0 - tremble) * game.payoff(off, own) + tremble * game.payoff(off, off);
    return own_payoff >= dev_payoff;
  };
  // Symmetric profile actions: by construction both Nash profiles are
  // diagonal, so checking the row player's action suffices.
  int tail_start = k_max + 1;
  for (int k = k_max; k >= 1; --k) {
    if (!best_response_at(profile.first, k)) break;
    tail_start = k;
  }
  return tail_start <= k_max;
}

// One-stage deviation test for path prescriptions built from stage-game
// profiles: the sequence is subgame perfect iff every profile is a stage
// Nash equilibrium.
inline bool verify_spe_sequence(const std::vector<Profile>& seq, double phi) {
  if (seq.empty()) throw std::invalid_argument("profile sequence must be non-empty");
  const StageGame game = build_game(phi);
  for (const auto& profile : seq)
    if (!is_pure_nash(game, profile)) return false;
  return true;
}

// Monte Carlo estimate of the nonbinary coordination payoff: the
// probability that two independent uniform identities fall within bin b of
// each other.
inline double compute_phi(double b, long samples, Rng& rng) {
  if (!(b >= 0.0 && b <= 1.0)) throw std::invalid_argument("b must lie in [0, 1]");
  if (samples < 1) throw std::invalid_argument("samples must be >= 1");
  long hits = 0;
  for (long s = 0; s < samples; ++s) {
    const double u = rng.uniform01();
    const double v = rng.uniform01();
    if (std::fabs(u - v) <= b) ++hits;
  }
  return static_cast<double>(hits) / static_cast<double>(samples);
}

}  // namespace idsim
