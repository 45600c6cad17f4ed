#include "bellforge/catalog.hpp"

#include <algorithm>
#include <mutex>
#include <sstream>

namespace bellforge::catalog {

namespace {

// Adds coeff * Q for every space-separated multi-index in `labels`
// (e.g. "1120 1210"). Each label digit is one party's setting.
template <bool C>
void add_group(Polynomial<C>& p, const Rational& coeff, std::string_view labels) {
  std::istringstream in{std::string(labels)};
  std::string label;
  while (in >> label) {
    std::vector<int> idx;
    for (char ch : label) idx.push_back(ch - '0');
    p.add(Monomial::from_index(idx), coeff);
  }
}

ExtendedPolynomial ext_observable(const Scenario& s, int party, int setting) {
  return ExtendedPolynomial::observable(s, party, setting);
}

// Re-expresses p (over N-1 parties) over N parties, the last one idle.
BellPolynomial embed_with_extra_party(const BellPolynomial& p) {
  const Scenario& s = p.scenario();
  const Scenario wider(s.parties() + 1, s.settings());
  BellPolynomial out(wider);
  for (const auto& [m, c] : p.terms()) {
    auto masks = m.masks();
    masks.push_back(0u);
    out.add(Monomial(std::move(masks)), c);
  }
  return out;
}

bool squares_to_one(const ExtendedPolynomial& x) {
  return multiply(x, x) == ExtendedPolynomial::constant(x.scenario(), 1);
}

}  // namespace

BellPolynomial chsh() {
  BellPolynomial p(Scenario(2, 2));
  p.add({1, 1}, Rational(1, 2));
  p.add({1, 2}, Rational(1, 2));
  p.add({2, 1}, Rational(1, 2));
  p.add({2, 2}, Rational(-1, 2));
  return p;
}

ExtendedPolynomial compose_xyz(const ExtendedPolynomial& x, const ExtendedPolynomial& y,
                               const ExtendedPolynomial& z) {
  require_same_scenario(x.scenario(), y.scenario());
  require_same_scenario(x.scenario(), z.scenario());
  if (!squares_to_one(x) || !squares_to_one(y) || !squares_to_one(z)) {
    throw InvalidArgument("compose_xyz needs X^2 = Y^2 = Z^2 = 1");
  }
  const ExtendedPolynomial xyz = multiply(multiply(x, y), z);
  return linear_combine({Rational(1, 2), Rational(1, 2), Rational(1, 2), Rational(-1, 2)}, {x, y, z, xyz});
}

BellPolynomial recursive_extend(const BellPolynomial& prev, const BellPolynomial& prev_swapped) {
  require_same_scenario(prev.scenario(), prev_swapped.scenario());
  if (prev.scenario().settings() != 2) throw InvalidArgument("recursive_extend is defined for two settings");
  const ExtendedPolynomial b = to_extended(embed_with_extra_party(prev));
  const ExtendedPolynomial b_swapped = to_extended(embed_with_extra_party(prev_swapped));
  const Scenario& s = b.scenario();
  const int last = s.parties() - 1;
  const ExtendedPolynomial x1 = ext_observable(s, last, 1);
  const ExtendedPolynomial x2 = ext_observable(s, last, 2);
  const ExtendedPolynomial out =
      Rational(1, 2) * (multiply(b, x1 + x2) + multiply(b_swapped, x1 - x2));
  return to_bell(out);
}

BellPolynomial mabk(int parties) {
  if (parties < 2 || parties > 5) throw InvalidArgument("mabk is provided for 2..5 parties");
  BellPolynomial b = BellPolynomial::observable(Scenario(1, 2), 0, 1);
  for (int n = 2; n <= parties; ++n) b = recursive_extend(b, swap_settings(b));
  return b;
}

BellPolynomial chen_family(int parties) {
  if (parties < 2 || parties > 5) throw InvalidArgument("chen_family is provided for 2..5 parties");
  const BellPolynomial prev =
      parties == 2 ? BellPolynomial::observable(Scenario(1, 2), 0, 1) : mabk(parties - 1);
  return recursive_extend(prev, BellPolynomial::constant(prev.scenario(), 1));
}

// ------------------------------------------------------------------ I42

std::vector<I42Variant> i42_candidates() {
  return {I42Variant::printed, I42Variant::swap_first, I42Variant::swap_second, I42Variant::symmetric_orbit};
}

std::string to_string(I42Variant v) {
  switch (v) {
    case I42Variant::canonical: return "canonical";
    case I42Variant::printed: return "printed";
    case I42Variant::swap_first: return "swap-first";
    case I42Variant::swap_second: return "swap-second";
    case I42Variant::symmetric_orbit: return "symmetric-orbit";
  }
  return "unknown";
}

I42Variant parse_i42_variant(std::string_view name) {
  for (auto v : {I42Variant::canonical, I42Variant::printed, I42Variant::swap_first, I42Variant::swap_second,
                 I42Variant::symmetric_orbit}) {
    if (to_string(v) == name) return v;
  }
  throw InvalidArgument("unknown I42 variant: " + std::string(name));
}

namespace {

BellPolynomial i42_reading(I42Variant v) {
  std::string negative_bracket = "1120 1210 2110 1102";
  std::string positive_bracket = "1201 2101 1012 1102 2011 0112 0121 0211";
  Rational positive_sign = 1;
  switch (v) {
    case I42Variant::printed: break;
    case I42Variant::swap_first: negative_bracket = "1120 1210 2110 1021"; break;
    case I42Variant::swap_second: positive_bracket = "1201 2101 1012 1021 2011 0112 0121 0211"; break;
    case I42Variant::symmetric_orbit:
      negative_bracket = "1120 1210 2110 1021";
      positive_bracket = "1201 2101 1012 1102 2011 0112 0121 0211";
      positive_sign = -1;
      break;
    case I42Variant::canonical: throw InvalidArgument("canonical is resolved, not read");
  }
  BellPolynomial p(Scenario(4, 2));
  add_group(p, -5, "1111");
  add_group(p, -2, "2222");
  add_group(p, -1, negative_bracket);
  add_group(p, -1, "2200 2020 2002 0220 0202 0022");
  add_group(p, 1, "2000 0200 0020 0002");
  add_group(p, 2, "1000 0100 0010 0001");
  add_group(p, 1, "1110 1101 1011 0111");
  add_group(p, positive_sign, positive_bracket);
  add_group(p, 2, "1112 1121 1211 2111");
  add_group(p, -1, "1220 2120 2210 1202 2102 2201 1022 2021 2012 0122 0221 0212");
  add_group(p, 1, "1122 1212 1221 2211 2121 2112");
  return Rational(1, 9) * p;
}

const Shift kI42Shift{Rational(7, 16), Rational(9, 16)};
const Shift kI42PrimeShift{Rational(6, 16), Rational(10, 16)};

BellPolynomial shifted_bell(const BellPolynomial& p, const Shift& s) {
  return BellPolynomial::constant(p.scenario(), s.offset) + s.scale * p;
}

}  // namespace

bool VariantCertificate::theorem_certified() const {
  return shifted_class == lhv::SnClass::of(3) && lhv_max == Rational(1);
}

bool VariantCertificate::passes() const {
  return theorem_certified() && tightness.is_facet && tightness.polytope_dim == 80;
}

std::vector<VariantCertificate> certify_i42_variants() {
  std::vector<VariantCertificate> out;
  for (auto v : i42_candidates()) {
    const BellPolynomial p = i42_reading(v);
    VariantCertificate cert{v, lhv::classify(shifted_bell(p, kI42Shift)), lhv::lhv_bound(p).max,
                            lhv::is_tight(p, 1)};
    out.push_back(std::move(cert));
  }
  return out;
}

I42Variant resolve_i42_canonical() {
  static std::once_flag once;
  static I42Variant resolved = I42Variant::canonical;
  static std::string failure;
  std::call_once(once, [] {
    std::vector<I42Variant> passing;
    std::vector<I42Variant> certified;
    for (const auto& c : certify_i42_variants()) {
      if (c.passes()) passing.push_back(c.variant);
      if (c.theorem_certified()) certified.push_back(c.variant);
    }
    if (passing.size() == 1) {
      resolved = passing.front();
    } else if (passing.empty() && certified.size() == 1) {
      resolved = certified.front();
    } else {
      failure = "I42 canonical variant is not unique: " + std::to_string(passing.size()) + " pass, " +
                std::to_string(certified.size()) + " theorem-certified";
    }
  });
  if (!failure.empty()) throw Error(failure);
  return resolved;
}

BellPolynomial i42(I42Variant variant) {
  if (variant == I42Variant::canonical) variant = resolve_i42_canonical();
  return i42_reading(variant);
}

BellPolynomial i42prime() {
  BellPolynomial p(Scenario(4, 2));
  add_group(p, -1, "1200 2100 1020 2010 1002 2001 0120 0210 0102 0201 0012 0021");
  add_group(p, -1, "2222");
  add_group(p, 1, "1112 1121 1211 2111");
  add_group(p, 3, "1000 0100 0010 0001");
  add_group(p, 1, "2000 0200 0020 0002");
  add_group(p, -1, "1220 2120 2210 1202 2102 2201 1022 2021 2012 0122 0221 0212");
  add_group(p, 1, "1122 1212 1221 2211 2121 2112");
  add_group(p, -1, "2220 2202 2022 0222");
  add_group(p, -3, "1111");
  return Rational(1, 10) * p;
}

BellPolynomial i33() {
  BellPolynomial p(Scenario(3, 3));
  add_group(p, 1, "223 232 322");
  add_group(p, -2, "211 121 112");
  add_group(p, 1, "221 122 212");
  add_group(p, -1, "331 313 133");
  add_group(p, 1, "321 312 213 231 123 132");
  add_group(p, 2, "111");
  add_group(p, 4, "222");
  add_group(p, -1, "333");
  return Rational(1, 8) * p;
}

std::pair<ExtendedPolynomial, ExtendedPolynomial> i1_i2() {
  const Scenario s(2, 2);
  // Party 0 carries A1, A2 and party 1 carries B1, B2.
  ExtendedPolynomial a1b1a2b2(s);
  a1b1a2b2.add(Monomial({0b11u, 0b11u}), 1);
  ExtendedPolynomial i1(s);
  i1.add({0, 0}, Rational(1, 2));
  i1.add({1, 1}, Rational(1, 2));
  i1.add({2, 2}, Rational(-1, 2));
  i1 += Rational(1, 2) * a1b1a2b2;
  ExtendedPolynomial i2(s);
  i2.add({0, 0}, Rational(1, 2));
  i2.add({1, 2}, Rational(1, 2));
  i2.add({2, 1}, Rational(1, 2));
  i2 -= Rational(1, 2) * a1b1a2b2;
  return {i1, i2};
}

// ------------------------------------------------------------- registry

ExtendedPolynomial CatalogEntry::shifted() const {
  return ExtendedPolynomial::constant(polynomial.scenario(), shift.offset) + shift.scale * polynomial;
}

SelfCheck self_check(const CatalogEntry& entry) {
  SelfCheck c;
  c.name = entry.name;
  c.derived_class = lhv::classify(entry.shifted());
  c.derived_max = lhv::lhv_bound(entry.polynomial).max;
  c.class_ok = c.derived_class == entry.claimed_class;
  c.bound_ok = c.derived_max == entry.claimed_bound;
  return c;
}

namespace {

CatalogEntry make_entry(std::string name, ExtendedPolynomial p, Shift shift, int n, std::string note) {
  return CatalogEntry{std::move(name), std::move(p), shift, Rational(1), lhv::SnClass::of(n), std::move(note)};
}

std::vector<CatalogEntry> build_registry() {
  std::vector<CatalogEntry> out;
  out.push_back(make_entry("chsh", to_extended(chsh()), {}, 2, "CHSH, halved normalization"));
  for (int n = 3; n <= 5; ++n) {
    out.push_back(make_entry("mabk" + std::to_string(n), to_extended(mabk(n)), {}, 2,
                             "MABK/WWZB recursion unrolled from B1 = X1,1"));
  }
  for (int n = 3; n <= 4; ++n) {
    out.push_back(make_entry("chen" + std::to_string(n), to_extended(chen_family(n)), {}, 2,
                             "recursion step from MABK with B' replaced by the identity"));
  }
  out.push_back(make_entry("i42", to_extended(i42()), kI42Shift, 3,
                           "four-qubit two-setting; variant " + to_string(resolve_i42_canonical())));
  out.push_back(make_entry("i42p", to_extended(i42prime()), kI42PrimeShift, 3, "second four-qubit two-setting"));
  out.push_back(make_entry("i33", to_extended(i33()), {}, 3, "three-qubit three-setting"));
  auto [i1, i2] = i1_i2();
  out.push_back(make_entry("i1", i1, {}, 2, "contains non-computable A1 A2 B1 B2"));
  out.push_back(make_entry("i2", i2, {}, 2, "contains non-computable A1 A2 B1 B2"));
  for (const auto& e : out) {
    const SelfCheck c = self_check(e);
    if (!c.class_ok || !c.bound_ok) {
      throw Error("catalog self-check failed for " + e.name + ": derived " + c.derived_class.label() +
                  ", max " + c.derived_max.str());
    }
  }
  return out;
}

}  // namespace

const std::vector<CatalogEntry>& entries() {
  static const std::vector<CatalogEntry> registry = build_registry();
  return registry;
}

CatalogEntry find(std::string_view name, I42Variant variant) {
  if (name == "i42" && variant != I42Variant::canonical) {
    CatalogEntry e = make_entry("i42", to_extended(i42(variant)), kI42Shift, 3,
                                "four-qubit two-setting; variant " + to_string(variant));
    return e;
  }
  const auto& all = entries();
  auto it = std::find_if(all.begin(), all.end(), [&](const CatalogEntry& e) { return e.name == name; });
  if (it == all.end()) throw InvalidArgument("unknown catalog entry: " + std::string(name));
  return *it;
}

}  // namespace bellforge::catalog
