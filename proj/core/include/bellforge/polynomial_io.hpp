#pragma once

// Textual (JSON) format shared by inequality files, reports and results:
//
//   {"scenario": {"parties": N, "settings": M},
//    "terms": [{"idx": [k1, ..., kN], "num": p, "den": q}, ...]}
//
// idx entries are 0..M with 0 the identity. Non-computable monomials use
// "sets": [[settings of party 1], ...] instead of "idx". Numerators and
// denominators outside int64 are written as decimal strings.

#include <string>

#if __has_include(<nlohmann/json.hpp>)
#include <nlohmann/json.hpp>
#elif __has_include(<bellforge/detail/json.hpp>)
#include <bellforge/detail/json.hpp>
#else
#include <json.hpp>
#endif

#include "bellforge/bellpoly.hpp"
#include "bellforge/csderive.hpp"
#include "bellforge/lhvlab.hpp"
#include "bellforge/qviolation.hpp"

namespace bellforge::io {

using Json = nlohmann::ordered_json;

Json to_json(const Rational& r);
Rational rational_from_json(const Json& num, const Json& den);

Json to_json(const Scenario& s);
Scenario scenario_from_json(const Json& j);

Json to_json(const ExtendedPolynomial& p);
Json to_json(const BellPolynomial& p);
/// Throws ParseError on malformed input, including duplicate monomials.
ExtendedPolynomial polynomial_from_json(const Json& j);
BellPolynomial bell_from_json(const Json& j);

std::string dump(const Json& j);
/// Throws ParseError with the parser's message.
Json parse(const std::string& text);
Json read_file(const std::string& path);

Json to_json(const lhv::RootSpectrum& s);
lhv::RootSpectrum spectrum_from_json(const Json& j);
Json to_json(const lhv::SnClass& c);
Json to_json(const lhv::TightnessReport& r);

Json to_json(const quantum::MeasurementConfig& c);
quantum::MeasurementConfig config_from_json(const Json& j);
Json to_json(const quantum::PureState& psi);
quantum::PureState state_from_json(const Json& j);
Json to_json(const quantum::OptimizationResult& r);

Json to_json(const derive::ConstraintSystem& cs);
Json to_json(const derive::ResidualReport& r);
Json to_json(const derive::SymbolValues& v);
derive::SymbolValues symbol_values_from_json(const Json& j);

/// {"scenario": ..., "classes": [...]} (shared by f and g) or separate
/// "f_classes" / "g_classes"; each class is {"name", "members": [term...]}.
derive::Ansatz ansatz_from_json(const Json& j);
Json to_json(const derive::Ansatz& a);

}  // namespace bellforge::io
