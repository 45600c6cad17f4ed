#include "bellforge/polynomial_io.hpp"

#include <fstream>
#include <set>
#include <sstream>

namespace bellforge::io {

namespace {

const Json& field(const Json& j, const char* key) {
  if (!j.is_object()) throw ParseError(std::string("expected an object holding \"") + key + "\"");
  auto it = j.find(key);
  if (it == j.end()) throw ParseError(std::string("missing field \"") + key + "\"");
  return *it;
}

int int_field(const Json& j, const char* key) {
  const Json& v = field(j, key);
  if (!v.is_number_integer()) throw ParseError(std::string("field \"") + key + "\" must be an integer");
  return v.get<int>();
}

double number(const Json& j) {
  if (!j.is_number()) throw ParseError("expected a number");
  return j.get<double>();
}

std::string integer_text(const Json& j) {
  if (j.is_number_integer()) return j.dump();
  if (j.is_string()) return j.get<std::string>();
  throw ParseError("numerator and denominator must be integers or integer strings");
}

Monomial monomial_from_json(const Json& t, const Scenario& s) {
  const bool has_idx = t.contains("idx");
  const bool has_sets = t.contains("sets");
  if (has_idx == has_sets) throw ParseError("a term needs exactly one of \"idx\" or \"sets\"");
  std::vector<std::uint32_t> masks;
  if (has_idx) {
    const Json& idx = t["idx"];
    if (!idx.is_array() || idx.size() != static_cast<std::size_t>(s.parties())) {
      throw ParseError("\"idx\" must list one setting per party");
    }
    for (const auto& k : idx) {
      if (!k.is_number_integer()) throw ParseError("\"idx\" entries must be integers");
      const int v = k.get<int>();
      if (v < 0 || v > s.settings()) throw ParseError("\"idx\" entry " + std::to_string(v) + " outside 0..M");
      masks.push_back(v == 0 ? 0u : 1u << (v - 1));
    }
  } else {
    const Json& sets = t["sets"];
    if (!sets.is_array() || sets.size() != static_cast<std::size_t>(s.parties())) {
      throw ParseError("\"sets\" must list one setting set per party");
    }
    for (const auto& set : sets) {
      if (!set.is_array()) throw ParseError("\"sets\" entries must be arrays");
      std::uint32_t mask = 0;
      for (const auto& k : set) {
        if (!k.is_number_integer()) throw ParseError("setting numbers must be integers");
        const int v = k.get<int>();
        if (v < 1 || v > s.settings()) throw ParseError("setting " + std::to_string(v) + " outside 1..M");
        if (mask & (1u << (v - 1))) throw ParseError("repeated setting in a set");
        mask |= 1u << (v - 1);
      }
      masks.push_back(mask);
    }
  }
  return Monomial(std::move(masks));
}

Json monomial_to_json(const Monomial& m, Json& term) {
  if (m.is_computable()) {
    term["idx"] = m.index();
  } else {
    Json sets = Json::array();
    for (int j = 0; j < m.parties(); ++j) {
      Json set = Json::array();
      for (int k = 0; k < 32; ++k) {
        if (m.mask(j) >> k & 1u) set.push_back(k + 1);
      }
      sets.push_back(std::move(set));
    }
    term["sets"] = std::move(sets);
  }
  return term;
}

template <bool C>
Json polynomial_to_json(const Polynomial<C>& p) {
  Json terms = Json::array();
  for (const auto& [m, c] : p.terms()) {
    Json t = Json::object();
    monomial_to_json(m, t);
    const Json r = to_json(c);
    t["num"] = r["num"];
    t["den"] = r["den"];
    terms.push_back(std::move(t));
  }
  Json out = Json::object();
  out["scenario"] = to_json(p.scenario());
  out["terms"] = std::move(terms);
  return out;
}

Json integer_json(const std::string& text, const std::optional<std::int64_t>& small) {
  if (small) return *small;
  return text;
}

}  // namespace

Json to_json(const Rational& r) {
  Json out = Json::object();
  out["num"] = integer_json(r.numerator_string(), r.small_numerator());
  out["den"] = integer_json(r.denominator_string(), r.small_denominator());
  return out;
}

Rational rational_from_json(const Json& num, const Json& den) {
  try {
    return Rational::parse(integer_text(num) + "/" + integer_text(den));
  } catch (const ParseError&) {
    throw;
  } catch (const Error& e) {
    throw ParseError(e.what());
  }
}

Json to_json(const Scenario& s) {
  Json out = Json::object();
  out["parties"] = s.parties();
  out["settings"] = s.settings();
  return out;
}

Scenario scenario_from_json(const Json& j) {
  try {
    return Scenario(int_field(j, "parties"), int_field(j, "settings"));
  } catch (const ParseError&) {
    throw;
  } catch (const Error& e) {
    throw ParseError(e.what());
  }
}

Json to_json(const ExtendedPolynomial& p) { return polynomial_to_json(p); }
Json to_json(const BellPolynomial& p) { return polynomial_to_json(p); }

ExtendedPolynomial polynomial_from_json(const Json& j) {
  const Scenario s = scenario_from_json(field(j, "scenario"));
  const Json& terms = field(j, "terms");
  if (!terms.is_array()) throw ParseError("\"terms\" must be an array");
  ExtendedPolynomial p(s);
  std::set<Monomial> seen;
  for (const auto& t : terms) {
    if (!t.is_object()) throw ParseError("each term must be an object");
    Monomial m = monomial_from_json(t, s);
    if (!seen.insert(m).second) throw ParseError("duplicate monomial " + m.str());
    p.add(m, rational_from_json(field(t, "num"), field(t, "den")));
  }
  return p;
}

BellPolynomial bell_from_json(const Json& j) {
  try {
    return to_bell(polynomial_from_json(j));
  } catch (const NonComputable& e) {
    throw ParseError(std::string("expected a Bell polynomial: ") + e.what());
  }
}

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

Json parse(const std::string& text) {
  try {
    return Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw ParseError(e.what());
  }
}

Json read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse(buf.str());
}

Json to_json(const lhv::RootSpectrum& s) {
  Json entries = Json::array();
  for (const auto& [r, n] : s.entries) {
    Json e = to_json(r);
    e["count"] = n;
    entries.push_back(std::move(e));
  }
  Json out = Json::object();
  out["total"] = s.total;
  out["roots"] = std::move(entries);
  return out;
}

lhv::RootSpectrum spectrum_from_json(const Json& j) {
  lhv::RootSpectrum s;
  const Json& total = field(j, "total");
  if (!total.is_number_unsigned()) throw ParseError("\"total\" must be a nonnegative integer");
  s.total = total.get<std::uint64_t>();
  std::uint64_t sum = 0;
  for (const auto& e : field(j, "roots")) {
    const Json& count = field(e, "count");
    if (!count.is_number_unsigned()) throw ParseError("\"count\" must be a nonnegative integer");
    const Rational r = rational_from_json(field(e, "num"), field(e, "den"));
    if (!s.entries.emplace(r, count.get<std::uint64_t>()).second) throw ParseError("duplicate root " + r.str());
    sum += count.get<std::uint64_t>();
  }
  if (sum != s.total) throw ParseError("root multiplicities do not sum to the total");
  return s;
}

Json to_json(const lhv::SnClass& c) {
  Json out = Json::object();
  out["label"] = c.label();
  out["n"] = c.classified() ? Json(c.n()) : Json(nullptr);
  return out;
}

Json to_json(const lhv::TightnessReport& r) {
  Json out = Json::object();
  out["valid"] = r.valid;
  out["bound"] = to_json(r.bound);
  out["lhv_max"] = to_json(r.lhv_max);
  out["saturating_count"] = r.saturating_count;
  out["affine_rank"] = r.affine_rank;
  out["independent_saturating"] = r.independent_saturating();
  out["polytope_dim"] = r.polytope_dim;
  out["is_facet"] = r.is_facet;
  return out;
}

Json to_json(const quantum::MeasurementConfig& c) {
  Json angles = Json::array();
  for (int j = 0; j < c.scenario().parties(); ++j) {
    for (int k = 1; k <= c.scenario().settings(); ++k) {
      const auto& a = c.angles(j, k);
      angles.push_back({{"party", j + 1}, {"setting", k}, {"theta", a.theta}, {"phi", a.phi}});
    }
  }
  Json out = Json::object();
  out["scenario"] = to_json(c.scenario());
  out["angles"] = std::move(angles);
  return out;
}

quantum::MeasurementConfig config_from_json(const Json& j) {
  quantum::MeasurementConfig c(scenario_from_json(field(j, "scenario")));
  for (const auto& a : field(j, "angles")) {
    try {
      c.set_angles(int_field(a, "party") - 1, int_field(a, "setting"),
                   {number(field(a, "theta")), number(field(a, "phi"))});
    } catch (const ParseError&) {
      throw;
    } catch (const Error& e) {
      throw ParseError(e.what());
    }
  }
  return c;
}

Json to_json(const quantum::PureState& psi) {
  Json amps = Json::array();
  for (const auto& a : psi.amplitudes()) amps.push_back({a.real(), a.imag()});
  Json out = Json::object();
  out["parties"] = psi.parties();
  out["amplitudes"] = std::move(amps);
  return out;
}

quantum::PureState state_from_json(const Json& j) {
  const Json& amps = field(j, "amplitudes");
  if (!amps.is_array()) throw ParseError("\"amplitudes\" must be an array");
  quantum::Vector v(static_cast<Eigen::Index>(amps.size()));
  for (std::size_t i = 0; i < amps.size(); ++i) {
    const Json& a = amps[i];
    if (!a.is_array() || a.size() != 2) throw ParseError("each amplitude is [re, im]");
    v[static_cast<Eigen::Index>(i)] = quantum::Complex(number(a[0]), number(a[1]));
  }
  try {
    return quantum::PureState(std::move(v));
  } catch (const Error& e) {
    throw ParseError(e.what());
  }
}

Json to_json(const quantum::OptimizationResult& r) {
  Json out = Json::object();
  out["value"] = r.value;
  out["seed"] = r.seed;
  out["restarts_used"] = r.restarts_used;
  out["converged"] = r.converged;
  out["spread"] = r.spread;
  out["sweeps"] = r.sweeps;
  out["config"] = to_json(r.config);
  if (r.state) out["state"] = to_json(*r.state);
  return out;
}

Json to_json(const derive::ConstraintSystem& cs) {
  Json eqs = Json::array();
  for (const auto& e : cs.equations) {
    Json terms = Json::array();
    for (const auto& [ij, c] : e.form.terms) {
      Json t = to_json(c);
      t["symbols"] = {cs.symbols[ij.first], cs.symbols[ij.second]};
      terms.push_back(std::move(t));
    }
    Json eq = Json::object();
    eq["product"] = e.product;
    eq["monomial"] = e.monomial.str();
    eq["form"] = e.form.str(cs.symbols);
    eq["terms"] = std::move(terms);
    eqs.push_back(std::move(eq));
  }
  Json out = Json::object();
  out["scenario"] = to_json(cs.scenario);
  out["symbols"] = cs.symbols;
  out["equations"] = std::move(eqs);
  return out;
}

Json to_json(const derive::ResidualReport& r) {
  Json res = Json::array();
  for (const auto& v : r.residuals) res.push_back(to_json(v));
  Json out = Json::object();
  out["pass"] = r.pass();
  out["residuals"] = std::move(res);
  return out;
}

Json to_json(const derive::SymbolValues& v) {
  Json out = Json::object();
  for (const auto& [k, x] : v) out[k] = x.str();
  return out;
}

derive::SymbolValues symbol_values_from_json(const Json& j) {
  if (!j.is_object()) throw ParseError("symbol values must be an object");
  derive::SymbolValues out;
  for (const auto& [k, v] : j.items()) {
    try {
      if (v.is_number_integer()) {
        out[k] = Rational(v.get<std::int64_t>());
      } else if (v.is_string()) {
        out[k] = Rational::parse(v.get<std::string>());
      } else {
        throw ParseError("symbol " + k + " must be an integer or a \"p/q\" string");
      }
    } catch (const ParseError&) {
      throw;
    } catch (const Error& e) {
      throw ParseError(e.what());
    }
  }
  return out;
}

namespace {

std::vector<derive::SymbolClass> classes_from_json(const Json& j, const Scenario& s) {
  if (!j.is_array()) throw ParseError("classes must be an array");
  std::vector<derive::SymbolClass> out;
  for (const auto& c : j) {
    const Json& name = field(c, "name");
    if (!name.is_string()) throw ParseError("class name must be a string");
    derive::SymbolClass sc{name.get<std::string>(), {}};
    for (const auto& t : field(c, "members")) {
      Rational mult(1);
      if (t.contains("num") || t.contains("den")) mult = rational_from_json(field(t, "num"), field(t, "den"));
      sc.members.emplace_back(monomial_from_json(t, s), mult);
    }
    out.push_back(std::move(sc));
  }
  return out;
}

Json classes_to_json(const std::vector<derive::SymbolClass>& classes) {
  Json out = Json::array();
  for (const auto& c : classes) {
    Json members = Json::array();
    for (const auto& [m, mult] : c.members) {
      Json t = Json::object();
      monomial_to_json(m, t);
      if (mult != Rational(1)) {
        const Json r = to_json(mult);
        t["num"] = r["num"];
        t["den"] = r["den"];
      }
      members.push_back(std::move(t));
    }
    out.push_back({{"name", c.name}, {"members", std::move(members)}});
  }
  return out;
}

}  // namespace

derive::Ansatz ansatz_from_json(const Json& j) {
  const Scenario s = scenario_from_json(field(j, "scenario"));
  derive::Ansatz a{s, {}, {}};
  if (j.contains("classes")) {
    if (j.contains("f_classes") || j.contains("g_classes")) {
      throw ParseError("use either \"classes\" or \"f_classes\"/\"g_classes\"");
    }
    a.f_classes = classes_from_json(j["classes"], s);
    a.g_classes = a.f_classes;
  } else {
    a.f_classes = classes_from_json(field(j, "f_classes"), s);
    a.g_classes = classes_from_json(field(j, "g_classes"), s);
  }
  try {
    a.validate();
  } catch (const Error& e) {
    throw ParseError(e.what());
  }
  return a;
}

Json to_json(const derive::Ansatz& a) {
  Json out = Json::object();
  out["scenario"] = to_json(a.scenario);
  out["f_classes"] = classes_to_json(a.f_classes);
  out["g_classes"] = classes_to_json(a.g_classes);
  return out;
}

}  // namespace bellforge::io
