#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "mscd/graph.hpp"

namespace mscd {

/// Sparse overlap counts n_kl = |C_k & D_l| between two partitions.
struct ContingencyTable {
  struct Cell {
    std::uint32_t row;
    std::uint32_t col;
    std::size_t count;
  };
  std::size_t n = 0;
  std::vector<std::size_t> row_sums;  ///< sizes of the C_k
  std::vector<std::size_t> col_sums;  ///< sizes of the D_l
  std::vector<Cell> cells;            ///< non-zero entries only, ordered by (row, col)
};

ContingencyTable contingency(const Partition& a, const Partition& b);

/// 2 I(A;B) / (H(A) + H(B)), natural logs. 1 when both entropies vanish.
double nmi_crisp(const Partition& a, const Partition& b);

/// Overlapping NMI over binary membership variables.
///
/// Community X_k of the first cover is compared with every Y_l of the second
/// through the four joint probabilities of (x in X_k, x in Y_l). A Y_l counts
/// as a match only if h(P11) + h(P00) > h(P01) + h(P10); the conditional
/// entropy H(X_k | Y) is the smallest H(X_k | Y_l) over matches, or H(X_k)
/// when nothing matches. Each term is divided by H(X_k) (terms with
/// H(X_k) = 0 contribute 0) and averaged over k. The result is
/// 1 - (H(X|Y)_norm + H(Y|X)_norm) / 2.
double nmi_overlapping(const Cover& a, const Cover& b);

/// Crisp NMI when both covers are partitions, overlapping NMI otherwise.
double nmi(const Cover& a, const Cover& b);

/// Position 0 holds 1; position i holds nmi(sets[i-1], sets[i]).
std::vector<double> consecutive_nmi(std::span<const Cover> sets);

/// Mean of the consecutive NMI values inside the window of p sets ending at
/// each position. Windows are truncated at the start; a window without any
/// pair (position 0) yields 1. `consecutive` is laid out as consecutive_nmi returns it.
std::vector<double> windowed_nmi(std::span<const double> consecutive, std::size_t p);
std::vector<double> windowed_nmi(std::span<const Cover> sets, std::size_t p);

}  // namespace mscd
