#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace bellforge {

/// Exact rank over the rationals of an integer matrix given by rows.
///
/// Rows are reduced one at a time against an echelon basis by fraction-free
/// elimination with content removal. Arithmetic starts in int64 and moves
/// to arbitrary precision if any intermediate would overflow.
std::size_t exact_rank(std::span<const std::vector<std::int64_t>> rows);

/// Dimension of the affine hull of a point set (-1 for the empty set).
int exact_affine_rank(std::span<const std::vector<std::int64_t>> points);

}  // namespace bellforge
