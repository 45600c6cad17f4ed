#pragma once

// Random generators and property measurements shared by the unit tests and
// the acceptance runner.

#include <cstdint>
#include <vector>

#include "bellforge/bellpoly.hpp"
#include "bellforge/csderive.hpp"
#include "bellforge/lhvlab.hpp"
#include "bellforge/qviolation.hpp"
#include "bellforge/random.hpp"

namespace bellforge::testkit {

/// Two-party two-setting ansatz with classes {00}, {10,01}, {20,02}, {11},
/// {12,21}, {22} shared by f and g.
derive::Ansatz chsh_ansatz();
/// C = (1, 0, 0, 1/2, 1/2, -1/2), D = (1, 0, 0, -1/2, -1/2, 1/2).
derive::SymbolValues chsh_solution();
/// C1 = C2 = 0, C3 = C4 = -C5 (D likewise) and not identically zero.
bool in_chsh_family(const derive::SymbolValues& v);

/// Random small-integer combination of computable monomials (identity included).
ExtendedPolynomial random_polynomial(const Scenario& s, Rng& rng);
/// One to four deterministic strategies with rational weights summing to 1.
std::vector<lhv::WeightedAssignment> random_mixture(const Scenario& s, Rng& rng);
quantum::PureState random_product_state(int parties, Rng& rng);

/// Number of (f, g, mixture) triples violating <fg>^2 <= <f^2><g^2>.
int cauchy_schwarz_failures(const Scenario& s, int count, std::uint64_t seed);

/// Largest decrease between consecutive objective values reported by a
/// single-restart see-saw (0 when the sequence never decreases).
double seesaw_max_decrease(const BellPolynomial& p, const quantum::PureState& psi, std::uint64_t seed);
double global_seesaw_max_decrease(const BellPolynomial& p, std::uint64_t seed);

/// Largest |n - v/|v|| over settings with a nonzero partial-expectation vector.
double stationarity_error(const BellPolynomial& p, const quantum::PureState& psi,
                          const quantum::MeasurementConfig& c);

/// Largest gap between the analytic angle derivatives and central differences.
double gradient_error(const BellPolynomial& p, const quantum::PureState& psi, const quantum::MeasurementConfig& c);

/// Largest expectation minus the exact LHV maximum over random settings and
/// random mixtures of product states.
double separable_excess(const BellPolynomial& p, int configs, std::uint64_t seed);

/// Largest |<m>| at the maximally mixed state over every non-identity
/// computable monomial, each with random settings.
double noise_max(const Scenario& s, std::uint64_t seed);

}  // namespace bellforge::testkit
