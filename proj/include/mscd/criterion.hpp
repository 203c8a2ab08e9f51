#pragma once

#include <string_view>

namespace mscd {

/// The six scale-parameterised quality criteria.
///
/// RB: modularity with a resolution factor on the null term (gamma).
/// AFG: modularity of A + rI (r).
/// RN: constant-Potts model rewarding internal links and penalising missing ones (gamma).
/// SO: Markov stability, modularity of the walk-t network (t).
/// LFK: local fitness k_in / (k_in + k_out)^alpha (alpha).
/// HLSLW: structural-similarity tightness (alpha).
enum class Criterion { RB, AFG, RN, SO, LFK, HLSLW };

constexpr bool is_global(Criterion c) noexcept {
  return c == Criterion::RB || c == Criterion::AFG || c == Criterion::RN || c == Criterion::SO;
}
constexpr bool is_local(Criterion c) noexcept { return !is_global(c); }

/// SO coarsens as t grows; every other criterion coarsens as its parameter shrinks.
constexpr bool coarsens_with_larger_parameter(Criterion c) noexcept { return c == Criterion::SO; }

std::string_view to_string(Criterion c) noexcept;
/// Accepts the lowercase names (rb, afg, rn, so, lfk, hlslw); throws ArgumentError otherwise.
Criterion parse_criterion(std::string_view name);

}  // namespace mscd

#include <span>

namespace mscd {

/// Throws ArgumentError unless params is non-empty and ordered from fine to
/// coarse for the criterion (ties allowed).
void require_increasing_scale(Criterion c, std::span<const double> params);

}  // namespace mscd
