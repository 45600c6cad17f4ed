#pragma once

// Built-in Bell functions: CHSH, the X+Y+Z-XYZ composition, the MABK/WWZB
// recursion and its identity variant, the I1/I2 pair, and the new two- and
// three-setting inequalities I42, I'42 and I33.

#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "bellforge/bellpoly.hpp"
#include "bellforge/lhvlab.hpp"

namespace bellforge::catalog {

BellPolynomial chsh();

/// (X + Y + Z - XYZ) / 2. Requires X^2 = Y^2 = Z^2 = 1 in the extended algebra.
ExtendedPolynomial compose_xyz(const ExtendedPolynomial& x, const ExtendedPolynomial& y,
                               const ExtendedPolynomial& z);

/// B_N = (B_{N-1} (X_{N,1} + X_{N,2}) + B'_{N-1} (X_{N,1} - X_{N,2})) / 2 for
/// two-setting inputs over N-1 parties.
BellPolynomial recursive_extend(const BellPolynomial& prev, const BellPolynomial& prev_swapped);

/// MABK Bell function for 2..5 parties, unrolled from the seed B_1 = X_{1,1}.
BellPolynomial mabk(int parties);

/// One recursion step from MABK_{N-1} with B' replaced by the identity.
BellPolynomial chen_family(int parties);

/// Candidate readings of the printed four-qubit two-setting table. The
/// printed text repeats Q1102 with opposite signs and omits Q1021.
enum class I42Variant {
  canonical,        ///< whichever candidate passes every certificate
  printed,          ///< literal transcription (the two Q1102 cancel)
  swap_first,       ///< Q1102 in the negative bracket read as Q1021
  swap_second,      ///< Q1102 in the positive bracket read as Q1021
  symmetric_orbit,  ///< whole two-1/one-2/one-0 orbit at coefficient -1
};

std::vector<I42Variant> i42_candidates();
std::string to_string(I42Variant v);
I42Variant parse_i42_variant(std::string_view name);

BellPolynomial i42(I42Variant variant = I42Variant::canonical);
BellPolynomial i42prime();
BellPolynomial i33();
/// I1 and I2; both contain the non-computable A1 A2 B1 B2.
std::pair<ExtendedPolynomial, ExtendedPolynomial> i1_i2();

struct VariantCertificate {
  I42Variant variant;
  lhv::SnClass shifted_class;  // class of 7/16 + 9/16 I
  Rational lhv_max;
  lhv::TightnessReport tightness;

  /// S_3 membership of the shifted form and a classical maximum of exactly 1.
  bool theorem_certified() const;
  /// theorem_certified() and a facet of the correlation polytope.
  bool passes() const;
};

std::vector<VariantCertificate> certify_i42_variants();
/// The unique candidate passing every certificate. When none is a facet,
/// falls back to the unique theorem-certified candidate; throws Error if
/// that is not unique either.
I42Variant resolve_i42_canonical();

/// Affine map B = offset + scale * I taking the inequality to its
/// S_n-classified Bell function.
struct Shift {
  Rational offset = 0;
  Rational scale = 1;
};

struct CatalogEntry {
  std::string name;
  ExtendedPolynomial polynomial;
  Shift shift;
  Rational claimed_bound;
  lhv::SnClass claimed_class;
  std::string note;

  bool computable() const { return polynomial.is_computable(); }
  BellPolynomial bell() const { return to_bell(polynomial); }
  ExtendedPolynomial shifted() const;
};

/// Immutable registry; built once and self-checked on first use.
const std::vector<CatalogEntry>& entries();
/// Looks up an entry; `variant` only affects "i42".
CatalogEntry find(std::string_view name, I42Variant variant = I42Variant::canonical);

struct SelfCheck {
  std::string name;
  lhv::SnClass derived_class = lhv::SnClass::unclassified();
  Rational derived_max;
  bool class_ok = false;
  bool bound_ok = false;
};

SelfCheck self_check(const CatalogEntry& entry);

}  // namespace bellforge::catalog
