#include "bellforge/exact_rank.hpp"

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdlib>
#include <numeric>

#include "bellforge/errors.hpp"

namespace bellforge {

namespace {

struct Overflow {};

std::int64_t checked_mul(std::int64_t a, std::int64_t b) {
  std::int64_t r;
  if (__builtin_mul_overflow(a, b, &r)) throw Overflow{};
  return r;
}

std::int64_t checked_sub(std::int64_t a, std::int64_t b) {
  std::int64_t r;
  if (__builtin_sub_overflow(a, b, &r)) throw Overflow{};
  return r;
}

std::int64_t gcd_of(std::int64_t a, std::int64_t b) { return std::gcd(a, b); }

boost::multiprecision::cpp_int gcd_of(const boost::multiprecision::cpp_int& a,
                                      const boost::multiprecision::cpp_int& b) {
  return boost::multiprecision::gcd(a, b);
}

template <class Int>
Int mul(const Int& a, const Int& b) {
  if constexpr (std::is_same_v<Int, std::int64_t>) {
    return checked_mul(a, b);
  } else {
    return a * b;
  }
}

template <class Int>
Int sub(const Int& a, const Int& b) {
  if constexpr (std::is_same_v<Int, std::int64_t>) {
    return checked_sub(a, b);
  } else {
    return a - b;
  }
}

template <class Int>
std::size_t rank_impl(std::span<const std::vector<std::int64_t>> rows) {
  if (rows.empty()) return 0;
  const std::size_t cols = rows.front().size();
  struct BasisRow {
    std::vector<Int> v;
    std::size_t pivot;
  };
  std::vector<BasisRow> basis;
  for (const auto& src : rows) {
    if (src.size() != cols) throw InvalidArgument("exact_rank: ragged rows");
    std::vector<Int> r(src.begin(), src.end());
    for (const auto& b : basis) {
      if (r[b.pivot] == 0) continue;
      const Int scale_r = b.v[b.pivot];
      const Int scale_b = r[b.pivot];
      Int content = 0;
      for (std::size_t c = 0; c < cols; ++c) {
        r[c] = sub<Int>(mul<Int>(r[c], scale_r), mul<Int>(b.v[c], scale_b));
        content = gcd_of(content, r[c]);
      }
      if (content > 1) {
        for (auto& x : r) x /= content;
      }
    }
    std::size_t pivot = cols;
    for (std::size_t c = 0; c < cols; ++c) {
      if (r[c] != 0) {
        pivot = c;
        break;
      }
    }
    if (pivot == cols) continue;
    basis.push_back({std::move(r), pivot});
    if (basis.size() == cols) break;
  }
  return basis.size();
}

}  // namespace

std::size_t exact_rank(std::span<const std::vector<std::int64_t>> rows) {
  try {
    return rank_impl<std::int64_t>(rows);
  } catch (const Overflow&) {
    return rank_impl<boost::multiprecision::cpp_int>(rows);
  }
}

int exact_affine_rank(std::span<const std::vector<std::int64_t>> points) {
  if (points.empty()) return -1;
  std::vector<std::vector<std::int64_t>> diffs;
  diffs.reserve(points.size() - 1);
  for (std::size_t i = 1; i < points.size(); ++i) {
    std::vector<std::int64_t> d(points[i].size());
    for (std::size_t c = 0; c < d.size(); ++c) d[c] = points[i][c] - points[0][c];
    diffs.push_back(std::move(d));
  }
  return static_cast<int>(exact_rank(diffs));
}

}  // namespace bellforge
