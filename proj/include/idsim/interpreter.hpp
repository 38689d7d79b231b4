#pragma once

#include <stdexcept>

#include "idsim/beta_numerics.hpp"
#include "idsim/genome.hpp"

namespace idsim {

inline constexpr double kDefaultEpsClass = 1e-3;

struct Identity {
  double xi = 0.0;
};

enum class IdentityTag { Zero, One, Nonbinary };

struct IdentityClass {
  IdentityTag tag = IdentityTag::Zero;
  double xi = 0.0;  // meaningful when tag == Nonbinary

  // Identity value on the [0,1] spectrum; Zero and One sit at the endpoints.
  double value() const {
    switch (tag) {
      case IdentityTag::Zero: return 0.0;
      case IdentityTag::One: return 1.0;
      default: return xi;
    }
  }

  bool operator==(const IdentityClass&) const = default;
};

// The normalized gene is itself the Beta shape: gene 0 gives the Bernoulli
// spike limit, gene 1 the uniform distribution.
inline ShapePair shapes_from_genes(double alpha_gene, double beta_gene) {
  return ShapePair::make(alpha_gene, beta_gene);
}

inline double shape_from_gene(double g) {
  if (g < 0.0 || g > 1.0)
    throw std::invalid_argument("gene must lie in [0, 1]");
  return g;
}

// Biological interpreter: identity is the Beta quantile of the type,
// with degenerate shapes resolved by their distributional limits.
// Both shapes degenerate -> Bernoulli(1/2); one degenerate -> point mass
// at 0 (first shape) or 1 (second shape).
inline Identity translate_identity(const DecodedGenome& g) {
  const ShapePair shapes = shapes_from_genes(g.alpha_gene, g.beta_gene);
  if (shapes.degenerate_a && shapes.degenerate_b)
    return {g.x <= 0.5 ? 0.0 : 1.0};
  if (shapes.degenerate_a) return {0.0};
  if (shapes.degenerate_b) return {1.0};
  if (g.x == 0.0) return {0.0};
  if (g.x == 1.0) return {1.0};
  return {inv_reg_inc_beta(g.x, shapes)};
}

inline IdentityClass classify(Identity id, double eps_class = kDefaultEpsClass) {
  if (!(eps_class > 0.0 && eps_class < 0.5))
    throw std::invalid_argument("eps_class must lie in (0, 0.5)");
  if (id.xi <= eps_class) return {IdentityTag::Zero, 0.0};
  if (id.xi >= 1.0 - eps_class) return {IdentityTag::One, 0.0};
  return {IdentityTag::Nonbinary, id.xi};
}

}  // namespace idsim
