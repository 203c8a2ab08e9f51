#include "mscd/criterion.hpp"

#include <string>

#include "mscd/errors.hpp"

namespace mscd {

std::string_view to_string(Criterion c) noexcept {
  switch (c) {
    case Criterion::RB: return "rb";
    case Criterion::AFG: return "afg";
    case Criterion::RN: return "rn";
    case Criterion::SO: return "so";
    case Criterion::LFK: return "lfk";
    case Criterion::HLSLW: return "hlslw";
  }
  return "?";
}

Criterion parse_criterion(std::string_view name) {
  for (Criterion c : {Criterion::RB, Criterion::AFG, Criterion::RN, Criterion::SO, Criterion::LFK,
                      Criterion::HLSLW}) {
    if (to_string(c) == name) return c;
  }
  throw ArgumentError("unknown criterion '" + std::string(name) + "' (expected rb, afg, rn, so, lfk or hlslw)");
}

}  // namespace mscd

namespace mscd {

void require_increasing_scale(Criterion c, std::span<const double> params) {
  if (params.empty()) throw ArgumentError("scale parameter list is empty");
  const bool ascending = coarsens_with_larger_parameter(c);
  for (std::size_t i = 1; i < params.size(); ++i) {
    const bool ok = ascending ? params[i] >= params[i - 1] : params[i] <= params[i - 1];
    if (!ok) {
      throw ArgumentError(std::string("scale parameters for ") + std::string(to_string(c)) + " must be " +
                          (ascending ? "non-decreasing" : "non-increasing") + " (position " + std::to_string(i) +
                          ")");
    }
  }
}

}  // namespace mscd
