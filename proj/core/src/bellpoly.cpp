#include "bellforge/bellpoly.hpp"

#include <algorithm>
#include <bit>
#include <numeric>
#include <sstream>

namespace bellforge {

// ---------------------------------------------------------------- Scenario

Scenario::Scenario(int parties, int settings) : parties_(parties), settings_(settings) {
  if (parties < 1 || parties > kMaxParties) {
    throw InvalidArgument("party count out of range: " + std::to_string(parties));
  }
  if (settings < 1 || settings > kMaxSettings) {
    throw InvalidArgument("setting count out of range: " + std::to_string(settings));
  }
}

std::size_t Scenario::correlation_dimension() const {
  std::size_t d = 1;
  for (int j = 0; j < parties_; ++j) d *= static_cast<std::size_t>(settings_ + 1);
  return d - 1;
}

void require_same_scenario(const Scenario& a, const Scenario& b) {
  if (a != b) {
    throw ScenarioMismatch("scenario mismatch: (" + std::to_string(a.parties()) + "," +
                           std::to_string(a.settings()) + ") vs (" + std::to_string(b.parties()) +
                           "," + std::to_string(b.settings()) + ")");
  }
}

// -------------------------------------------------------------- Assignment

Assignment::Assignment(const Scenario& scenario)
    : scenario_(scenario), minus_(scenario.parties(), 0u) {}

Assignment Assignment::from_bits(const Scenario& scenario, std::uint64_t bits) {
  Assignment a(scenario);
  const int m = scenario.settings();
  const std::uint32_t full = (m >= 32) ? ~0u : ((1u << m) - 1u);
  for (int j = 0; j < scenario.parties(); ++j) {
    a.minus_[j] = static_cast<std::uint32_t>(bits >> (j * m)) & full;
  }
  return a;
}

int Assignment::value(int party, int setting) const {
  if (party < 0 || party >= scenario_.parties() || setting < 0 || setting > scenario_.settings()) {
    throw InvalidArgument("observable outside scenario");
  }
  if (setting == 0) return 1;
  return (minus_[party] >> (setting - 1)) & 1u ? -1 : 1;
}

void Assignment::set(int party, int setting, int value) {
  if (party < 0 || party >= scenario_.parties() || setting < 1 || setting > scenario_.settings()) {
    throw InvalidArgument("observable outside scenario");
  }
  if (value != 1 && value != -1) throw InvalidArgument("assignment values must be +1 or -1");
  const std::uint32_t bit = 1u << (setting - 1);
  minus_[party] = value < 0 ? (minus_[party] | bit) : (minus_[party] & ~bit);
}

std::uint64_t Assignment::bits() const {
  std::uint64_t b = 0;
  const int m = scenario_.settings();
  for (int j = 0; j < scenario_.parties(); ++j) b |= std::uint64_t(minus_[j]) << (j * m);
  return b;
}

// ---------------------------------------------------------------- Monomial

Monomial Monomial::from_index(std::span<const int> index) {
  std::vector<std::uint32_t> masks(index.size(), 0u);
  for (std::size_t j = 0; j < index.size(); ++j) {
    if (index[j] < 0 || index[j] > Scenario::kMaxSettings) {
      throw InvalidArgument("setting index out of range: " + std::to_string(index[j]));
    }
    masks[j] = index[j] == 0 ? 0u : (1u << (index[j] - 1));
  }
  return Monomial(std::move(masks));
}

Monomial Monomial::observable(int parties, int party, int setting) {
  if (party < 0 || party >= parties || setting < 1 || setting > Scenario::kMaxSettings) {
    throw InvalidArgument("observable outside scenario");
  }
  Monomial m(parties);
  m.masks_[party] = 1u << (setting - 1);
  return m;
}

bool Monomial::is_identity() const {
  return std::all_of(masks_.begin(), masks_.end(), [](std::uint32_t m) { return m == 0; });
}

bool Monomial::is_computable() const {
  return std::all_of(masks_.begin(), masks_.end(), [](std::uint32_t m) { return std::popcount(m) <= 1; });
}

int Monomial::degree() const {
  int d = 0;
  for (auto m : masks_) d += std::popcount(m);
  return d;
}

std::vector<int> Monomial::index() const {
  std::vector<int> idx(masks_.size(), 0);
  for (std::size_t j = 0; j < masks_.size(); ++j) {
    const auto m = masks_[j];
    if (std::popcount(m) > 1) throw NonComputable("monomial " + str() + " is not computable");
    idx[j] = m == 0 ? 0 : std::countr_zero(m) + 1;
  }
  return idx;
}

int Monomial::sign(const Assignment& a) const {
  int parity = 0;
  for (std::size_t j = 0; j < masks_.size(); ++j) {
    parity ^= std::popcount(masks_[j] & a.minus_mask(static_cast<int>(j))) & 1;
  }
  return parity ? -1 : 1;
}

Monomial operator*(const Monomial& a, const Monomial& b) {
  if (a.parties() != b.parties()) throw ScenarioMismatch("monomials over different party counts");
  Monomial r(a.parties());
  for (std::size_t j = 0; j < a.masks_.size(); ++j) r.masks_[j] = a.masks_[j] ^ b.masks_[j];
  return r;
}

std::string Monomial::str() const {
  std::ostringstream os;
  bool first = true;
  for (std::size_t j = 0; j < masks_.size(); ++j) {
    for (int k = 0; k < 32; ++k) {
      if (!((masks_[j] >> k) & 1u)) continue;
      if (!first) os << ' ';
      os << 'X' << (j + 1) << ',' << (k + 1);
      first = false;
    }
  }
  return first ? "1" : os.str();
}

std::string Monomial::correlation_label() const {
  std::string s = "Q";
  const auto idx = index();
  const bool wide = std::any_of(idx.begin(), idx.end(), [](int k) { return k > 9; });
  for (std::size_t j = 0; j < idx.size(); ++j) {
    if (wide && j > 0) s += ',';
    s += std::to_string(idx[j]);
  }
  return s;
}

// -------------------------------------------------------------- Polynomial

namespace {

template <bool C>
void check_monomial(const Scenario& s, const Monomial& m) {
  if (m.parties() != s.parties()) throw ScenarioMismatch("monomial has wrong party count");
  const std::uint32_t full = (s.settings() >= 32) ? ~0u : ((1u << s.settings()) - 1u);
  for (int j = 0; j < s.parties(); ++j) {
    if (m.mask(j) & ~full) throw InvalidArgument("monomial uses a setting outside the scenario");
  }
  if constexpr (C) {
    if (!m.is_computable()) {
      throw NonComputable("non-computable monomial " + m.str() + " in a Bell polynomial");
    }
  }
}

}  // namespace

template <bool C>
Polynomial<C>::Polynomial(Scenario scenario, const TermMap& terms) : scenario_(scenario) {
  for (const auto& [m, c] : terms) add(m, c);
}

template <bool C>
Polynomial<C> Polynomial<C>::constant(Scenario scenario, const Rational& value) {
  Polynomial p(scenario);
  p.add(Monomial(scenario.parties()), value);
  return p;
}

template <bool C>
Polynomial<C> Polynomial<C>::observable(Scenario scenario, int party, int setting) {
  if (setting > scenario.settings()) throw InvalidArgument("observable outside scenario");
  Polynomial p(scenario);
  p.add(Monomial::observable(scenario.parties(), party, setting), 1);
  return p;
}

template <bool C>
Polynomial<C> Polynomial<C>::monomial(Scenario scenario, const Monomial& m, const Rational& coefficient) {
  Polynomial p(scenario);
  p.add(m, coefficient);
  return p;
}

template <bool C>
Polynomial<C>& Polynomial<C>::add(const Monomial& m, const Rational& coefficient) {
  check_monomial<C>(scenario_, m);
  if (coefficient.is_zero()) return *this;
  auto [it, inserted] = terms_.try_emplace(m, coefficient);
  if (!inserted) {
    it->second += coefficient;
    if (it->second.is_zero()) terms_.erase(it);
  }
  return *this;
}

template <bool C>
Rational Polynomial<C>::coefficient(const Monomial& m) const {
  auto it = terms_.find(m);
  return it == terms_.end() ? Rational(0) : it->second;
}

template <bool C>
bool Polynomial<C>::is_computable() const {
  return std::all_of(terms_.begin(), terms_.end(), [](const auto& t) { return t.first.is_computable(); });
}

template <bool C>
Rational Polynomial<C>::evaluate(const Assignment& a) const {
  require_same_scenario(scenario_, a.scenario());
  Rational sum;
  for (const auto& [m, c] : terms_) {
    if (m.sign(a) > 0) {
      sum += c;
    } else {
      sum -= c;
    }
  }
  return sum;
}

template <bool C>
Polynomial<C> Polynomial<C>::operator-() const {
  Polynomial r(scenario_);
  for (const auto& [m, c] : terms_) r.terms_.emplace(m, -c);
  return r;
}

template <bool C>
Polynomial<C>& Polynomial<C>::operator+=(const Polynomial& o) {
  require_same_scenario(scenario_, o.scenario_);
  for (const auto& [m, c] : o.terms_) add(m, c);
  return *this;
}

template <bool C>
Polynomial<C>& Polynomial<C>::operator-=(const Polynomial& o) {
  require_same_scenario(scenario_, o.scenario_);
  for (const auto& [m, c] : o.terms_) add(m, -c);
  return *this;
}

template <bool C>
Polynomial<C>& Polynomial<C>::operator*=(const Rational& s) {
  if (s.is_zero()) {
    terms_.clear();
    return *this;
  }
  for (auto& [m, c] : terms_) c *= s;
  return *this;
}

template <bool C>
std::string Polynomial<C>::str() const {
  if (terms_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& [m, c] : terms_) {
    Rational mag = c.abs();
    if (first) {
      if (c.sign() < 0) os << "-";
    } else {
      os << (c.sign() < 0 ? " - " : " + ");
    }
    if (m.is_identity()) {
      os << mag;
    } else {
      if (mag != Rational(1)) os << mag << ' ';
      os << m.str();
    }
    first = false;
  }
  return os.str();
}

template class Polynomial<true>;
template class Polynomial<false>;

ExtendedPolynomial to_extended(const BellPolynomial& p) {
  ExtendedPolynomial r(p.scenario());
  for (const auto& [m, c] : p.terms()) r.add(m, c);
  return r;
}

BellPolynomial to_bell(const ExtendedPolynomial& p) {
  BellPolynomial r(p.scenario());
  for (const auto& [m, c] : p.terms()) r.add(m, c);
  return r;
}

template <bool C>
Polynomial<C> linear_combine(std::span<const Rational> coeffs, std::span<const Polynomial<C>> polys) {
  if (coeffs.size() != polys.size() || polys.empty()) {
    throw InvalidArgument("linear_combine needs equally long, non-empty lists");
  }
  Polynomial<C> r(polys.front().scenario());
  for (std::size_t i = 0; i < polys.size(); ++i) {
    require_same_scenario(r.scenario(), polys[i].scenario());
    for (const auto& [m, c] : polys[i].terms()) r.add(m, coeffs[i] * c);
  }
  return r;
}

template BellPolynomial linear_combine<true>(std::span<const Rational>, std::span<const BellPolynomial>);
template ExtendedPolynomial linear_combine<false>(std::span<const Rational>,
                                                  std::span<const ExtendedPolynomial>);

BellPolynomial linear_combine(std::initializer_list<Rational> coeffs,
                              std::initializer_list<BellPolynomial> polys) {
  return linear_combine<true>(std::span<const Rational>(coeffs.begin(), coeffs.size()),
                              std::span<const BellPolynomial>(polys.begin(), polys.size()));
}

ExtendedPolynomial linear_combine(std::initializer_list<Rational> coeffs,
                                  std::initializer_list<ExtendedPolynomial> polys) {
  return linear_combine<false>(std::span<const Rational>(coeffs.begin(), coeffs.size()),
                               std::span<const ExtendedPolynomial>(polys.begin(), polys.size()));
}

ExtendedPolynomial multiply(const ExtendedPolynomial& p, const ExtendedPolynomial& q) {
  require_same_scenario(p.scenario(), q.scenario());
  ExtendedPolynomial r(p.scenario());
  for (const auto& [mp, cp] : p.terms()) {
    for (const auto& [mq, cq] : q.terms()) r.add(mp * mq, cp * cq);
  }
  return r;
}

// ------------------------------------------------------------ substitution

SubstitutionResult substitute(const BellPolynomial& p, const std::map<Observable, int>& bindings,
                              bool drop_unused) {
  const Scenario& s = p.scenario();
  const int n = s.parties();
  const int m = s.settings();
  std::vector<std::uint32_t> bound(n, 0u), minus(n, 0u);
  for (const auto& [obs, value] : bindings) {
    if (obs.party < 0 || obs.party >= n || obs.setting < 1 || obs.setting > m) {
      throw InvalidArgument("binding refers to unknown observable X" + std::to_string(obs.party + 1) +
                            "," + std::to_string(obs.setting));
    }
    if (value != 1 && value != -1) throw InvalidArgument("bindings must be +1 or -1");
    bound[obs.party] |= 1u << (obs.setting - 1);
    if (value < 0) minus[obs.party] |= 1u << (obs.setting - 1);
  }

  // Substitute within the original scenario first.
  std::map<Monomial, Rational> reduced;
  for (const auto& [mono, c] : p.terms()) {
    std::vector<std::uint32_t> masks(n);
    int parity = 0;
    for (int j = 0; j < n; ++j) {
      parity ^= std::popcount(mono.mask(j) & minus[j]) & 1;
      masks[j] = mono.mask(j) & ~bound[j];
    }
    Rational& slot = reduced[Monomial(std::move(masks))];
    slot += parity ? -c : c;
  }
  std::erase_if(reduced, [](const auto& t) { return t.second.is_zero(); });

  const std::uint32_t full = (m >= 32) ? ~0u : ((1u << m) - 1u);
  std::vector<std::uint32_t> used(n, 0u);
  for (const auto& [mono, c] : reduced) {
    for (int j = 0; j < n; ++j) used[j] |= mono.mask(j);
  }

  SubstitutionResult out{BellPolynomial(Scenario(1, 1)), {}, {}};
  for (int j = 0; j < n; ++j) {
    if ((bound[j] & full) == full) continue;
    std::vector<int> kept;
    for (int k = 1; k <= m; ++k) {
      const std::uint32_t bit = 1u << (k - 1);
      if (bound[j] & bit) continue;
      if (drop_unused && !(used[j] & bit)) continue;
      kept.push_back(k);
    }
    out.party_origin.push_back(j);
    out.setting_origin.push_back(std::move(kept));
  }
  if (out.party_origin.empty()) {
    // Everything was fixed: the result is a constant over a one-party stub.
    out.party_origin.push_back(0);
    out.setting_origin.push_back({});
  }
  int new_m = 1;
  for (const auto& kept : out.setting_origin) new_m = std::max<int>(new_m, static_cast<int>(kept.size()));
  const Scenario reduced_scenario(static_cast<int>(out.party_origin.size()), new_m);

  BellPolynomial result(reduced_scenario);
  for (const auto& [mono, c] : reduced) {
    std::vector<int> idx(out.party_origin.size(), 0);
    for (std::size_t i = 0; i < out.party_origin.size(); ++i) {
      const int j = out.party_origin[i];
      if (j >= n || mono.mask(j) == 0) continue;
      const int old_setting = std::countr_zero(mono.mask(j)) + 1;
      const auto& kept = out.setting_origin[i];
      auto it = std::find(kept.begin(), kept.end(), old_setting);
      idx[i] = static_cast<int>(it - kept.begin()) + 1;
    }
    result.add(Monomial::from_index(idx), c);
  }
  out.polynomial = std::move(result);
  return out;
}

BellPolynomial swap_settings(const BellPolynomial& p, int a, int b) {
  const Scenario& s = p.scenario();
  if (a < 1 || b < 1 || a > s.settings() || b > s.settings()) {
    throw InvalidArgument("swap_settings: setting outside scenario");
  }
  Relabeling r = Relabeling::identity(s);
  for (int j = 0; j < s.parties(); ++j) std::swap(r.setting_to[j][a - 1], r.setting_to[j][b - 1]);
  return apply_relabeling(p, r);
}

// -------------------------------------------------------------- relabeling

Relabeling Relabeling::identity(const Scenario& s) {
  Relabeling r;
  r.party_to.resize(s.parties());
  std::iota(r.party_to.begin(), r.party_to.end(), 0);
  r.setting_to.assign(s.parties(), std::vector<int>(s.settings()));
  r.sign.assign(s.parties(), std::vector<int>(s.settings(), 1));
  for (auto& row : r.setting_to) std::iota(row.begin(), row.end(), 1);
  return r;
}

std::string Relabeling::str() const {
  std::ostringstream os;
  bool first = true;
  for (std::size_t j = 0; j < party_to.size(); ++j) {
    for (std::size_t k = 0; k < setting_to[j].size(); ++k) {
      if (!first) os << ", ";
      os << "X" << j + 1 << "," << k + 1 << "->" << (sign[j][k] < 0 ? "-" : "") << "X"
         << party_to[j] + 1 << "," << setting_to[j][k];
      first = false;
    }
  }
  return os.str();
}

template <bool C>
Polynomial<C> apply_relabeling(const Polynomial<C>& p, const Relabeling& r) {
  const Scenario& s = p.scenario();
  const int n = s.parties();
  if (static_cast<int>(r.party_to.size()) != n) throw InvalidArgument("relabeling has wrong party count");
  Polynomial<C> out(s);
  for (const auto& [mono, c] : p.terms()) {
    std::vector<std::uint32_t> masks(n, 0u);
    int sgn = 1;
    for (int j = 0; j < n; ++j) {
      std::uint32_t mj = mono.mask(j);
      while (mj) {
        const int k = std::countr_zero(mj);
        mj &= mj - 1;
        masks[r.party_to[j]] ^= 1u << (r.setting_to[j][k] - 1);
        sgn *= r.sign[j][k];
      }
    }
    out.add(Monomial(std::move(masks)), sgn > 0 ? c : -c);
  }
  return out;
}

template BellPolynomial apply_relabeling<true>(const BellPolynomial&, const Relabeling&);
template ExtendedPolynomial apply_relabeling<false>(const ExtendedPolynomial&, const Relabeling&);

namespace {

// Solves the GF(2) system "product of flips over each term = required sign"
// and enumerates every solution.
bool enumerate_flip_solutions(const Scenario& s, const std::vector<std::pair<Monomial, bool>>& rows,
                              const std::function<bool(const std::vector<std::vector<int>>&)>& visit) {
  const int n = s.parties();
  const int m = s.settings();
  const int vars = n * m;
  std::vector<std::pair<std::uint64_t, bool>> eqs;
  for (const auto& [mono, negate] : rows) {
    std::uint64_t bits = 0;
    for (int j = 0; j < n; ++j) bits |= std::uint64_t(mono.mask(j)) << (j * m);
    eqs.emplace_back(bits, negate);
  }
  std::vector<int> pivot_col;
  std::size_t rank = 0;
  for (int col = 0; col < vars && rank < eqs.size(); ++col) {
    std::size_t piv = rank;
    while (piv < eqs.size() && !((eqs[piv].first >> col) & 1u)) ++piv;
    if (piv == eqs.size()) continue;
    std::swap(eqs[piv], eqs[rank]);
    for (std::size_t i = 0; i < eqs.size(); ++i) {
      if (i != rank && ((eqs[i].first >> col) & 1u)) {
        eqs[i].first ^= eqs[rank].first;
        eqs[i].second ^= eqs[rank].second;
      }
    }
    pivot_col.push_back(col);
    ++rank;
  }
  for (std::size_t i = rank; i < eqs.size(); ++i) {
    if (eqs[i].second) return true;  // inconsistent: no flips work, keep searching
  }
  std::vector<int> free_cols;
  for (int col = 0; col < vars; ++col) {
    if (std::find(pivot_col.begin(), pivot_col.end(), col) == pivot_col.end()) free_cols.push_back(col);
  }
  if (free_cols.size() > 24) throw TooLarge("too many free sign flips to enumerate");
  const std::uint64_t combos = std::uint64_t(1) << free_cols.size();
  for (std::uint64_t f = 0; f < combos; ++f) {
    std::uint64_t x = 0;
    for (std::size_t i = 0; i < free_cols.size(); ++i) {
      if ((f >> i) & 1u) x |= std::uint64_t(1) << free_cols[i];
    }
    for (std::size_t i = 0; i < rank; ++i) {
      const bool rest = std::popcount(eqs[i].first & x & ~(std::uint64_t(1) << pivot_col[i])) & 1;
      if (rest != eqs[i].second) x |= std::uint64_t(1) << pivot_col[i];
    }
    std::vector<std::vector<int>> sign(n, std::vector<int>(m, 1));
    for (int j = 0; j < n; ++j) {
      for (int k = 0; k < m; ++k) {
        if ((x >> (j * m + k)) & 1u) sign[j][k] = -1;
      }
    }
    if (!visit(sign)) return false;
  }
  return true;
}

}  // namespace

void for_each_relabeling(const BellPolynomial& p, const BellPolynomial& q, bool with_flips,
                         const std::function<bool(const Relabeling&)>& visit) {
  require_same_scenario(p.scenario(), q.scenario());
  const Scenario& s = p.scenario();
  const int n = s.parties();
  const int m = s.settings();
  if (p.size() != q.size()) return;

  double combos = 1;
  for (int j = 2; j <= n; ++j) combos *= j;
  double per_party = 1;
  for (int k = 2; k <= m; ++k) per_party *= k;
  for (int j = 0; j < n; ++j) combos *= per_party;
  if (combos > 5e7) throw TooLarge("relabeling search space too large");

  std::vector<int> party_to(n);
  std::iota(party_to.begin(), party_to.end(), 0);
  std::vector<int> base(m);
  std::iota(base.begin(), base.end(), 1);
  do {
    std::vector<std::vector<int>> setting_to(n, base);
    bool more = true;
    while (more) {
      Relabeling r{party_to, setting_to, std::vector<std::vector<int>>(n, std::vector<int>(m, 1))};
      const BellPolynomial image = apply_relabeling(p, r);
      bool same_support = image.size() == q.size();
      std::vector<std::pair<Monomial, bool>> rows;
      if (same_support) {
        auto it = q.terms().begin();
        for (const auto& [mono, c] : image.terms()) {
          if (!(mono == it->first) || c.abs() != it->second.abs()) {
            same_support = false;
            break;
          }
          rows.emplace_back(mono, c != it->second);
          ++it;
        }
      }
      if (same_support) {
        if (with_flips) {
          // The flips are indexed by the original (party, setting).
          bool keep_going = enumerate_flip_solutions(s, rows, [&](const std::vector<std::vector<int>>& target_sign) {
            Relabeling full = r;
            for (int j = 0; j < n; ++j) {
              for (int k = 0; k < m; ++k) full.sign[j][k] = target_sign[r.party_to[j]][r.setting_to[j][k] - 1];
            }
            return visit(full);
          });
          if (!keep_going) return;
        } else {
          const bool all_equal = std::none_of(rows.begin(), rows.end(), [](const auto& row) { return row.second; });
          if (all_equal && !visit(r)) return;
        }
      }
      // Odometer over the per-party setting permutations.
      more = false;
      for (int j = 0; j < n; ++j) {
        if (std::next_permutation(setting_to[j].begin(), setting_to[j].end())) {
          more = true;
          break;
        }
      }
    }
  } while (std::next_permutation(party_to.begin(), party_to.end()));
}

std::optional<Relabeling> find_relabeling(const BellPolynomial& p, const BellPolynomial& q, bool with_flips) {
  std::optional<Relabeling> found;
  for_each_relabeling(p, q, with_flips, [&](const Relabeling& r) {
    found = r;
    return false;
  });
  return found;
}

}  // namespace bellforge
