#include "support.hpp"

#include <algorithm>
#include <cmath>

#include "bellforge/csderive.hpp"

namespace bellforge::testkit {

namespace {

int uniform_int(Rng& rng, int lo, int hi) {
  return lo + static_cast<int>(std::floor(rng.uniform() * (hi - lo + 1)));
}

Assignment random_assignment(const Scenario& s, Rng& rng) {
  Assignment a(s);
  for (int j = 0; j < s.parties(); ++j) {
    for (int k = 1; k <= s.settings(); ++k) a.set(j, k, rng.uniform() < 0.5 ? 1 : -1);
  }
  return a;
}

Eigen::Vector3d random_direction(Rng& rng) {
  Eigen::Vector3d v(rng.normal(), rng.normal(), rng.normal());
  return v / v.norm();
}

}  // namespace

derive::Ansatz chsh_ansatz() {
  const Scenario s(2, 2);
  auto m = [](int a, int b) { return Monomial::from_index({a, b}); };
  const std::vector<derive::SymbolClass> classes{
      {"0", {{m(0, 0), 1}}},           {"1", {{m(1, 0), 1}, {m(0, 1), 1}}}, {"2", {{m(2, 0), 1}, {m(0, 2), 1}}},
      {"3", {{m(1, 1), 1}}},           {"4", {{m(1, 2), 1}, {m(2, 1), 1}}}, {"5", {{m(2, 2), 1}}},
  };
  return {s, classes, classes};
}

derive::SymbolValues chsh_solution() {
  const Rational h(1, 2);
  return {{"C0", 1}, {"C1", 0}, {"C2", 0}, {"C3", h}, {"C4", h}, {"C5", -h},
          {"D0", 1}, {"D1", 0}, {"D2", 0}, {"D3", -h}, {"D4", -h}, {"D5", h}};
}

bool in_chsh_family(const derive::SymbolValues& v) {
  for (const char* x : {"C", "D"}) {
    const std::string p(x);
    if (!v.at(p + "1").is_zero() || !v.at(p + "2").is_zero()) return false;
    if (v.at(p + "3") != v.at(p + "4") || v.at(p + "3") != -v.at(p + "5")) return false;
  }
  return !v.at("C3").is_zero() || !v.at("D3").is_zero();
}

ExtendedPolynomial random_polynomial(const Scenario& s, Rng& rng) {
  ExtendedPolynomial p(s);
  p.add(Monomial(s.parties()), uniform_int(rng, -3, 3));
  for (const auto& m : lhv::correlation_basis(s)) {
    if (rng.uniform() < 0.5) p.add(m, uniform_int(rng, -3, 3));
  }
  return p;
}

std::vector<lhv::WeightedAssignment> random_mixture(const Scenario& s, Rng& rng) {
  const int k = uniform_int(rng, 1, 4);
  std::vector<int> w(k);
  int total = 0;
  for (auto& x : w) total += x = uniform_int(rng, 1, 5);
  std::vector<lhv::WeightedAssignment> out;
  for (int i = 0; i < k; ++i) out.push_back({Rational(w[i], total), random_assignment(s, rng)});
  return out;
}

quantum::PureState random_product_state(int parties, Rng& rng) {
  quantum::Vector v = quantum::Vector::Ones(1);
  for (int j = 0; j < parties; ++j) {
    quantum::Vector q(2);
    q << quantum::Complex(rng.normal(), rng.normal()), quantum::Complex(rng.normal(), rng.normal());
    q /= q.norm();
    quantum::Vector next(v.size() * 2);
    for (Eigen::Index i = 0; i < v.size(); ++i) next.segment(2 * i, 2) = v[i] * q;
    v = next;
  }
  return quantum::PureState::normalized(v);
}

int cauchy_schwarz_failures(const Scenario& s, int count, std::uint64_t seed) {
  Rng rng(seed);
  int failures = 0;
  for (int i = 0; i < count; ++i) {
    const auto f = random_polynomial(s, rng);
    const auto g = random_polynomial(s, rng);
    const auto mixture = random_mixture(s, rng);
    if (!derive::cauchy_schwarz_property(f, g, mixture)) ++failures;
  }
  return failures;
}

namespace {

double max_decrease(const std::vector<double>& values) {
  double worst = 0.0;
  for (std::size_t i = 1; i < values.size(); ++i) worst = std::max(worst, values[i - 1] - values[i]);
  return worst;
}

}  // namespace

double seesaw_max_decrease(const BellPolynomial& p, const quantum::PureState& psi, std::uint64_t seed) {
  std::vector<double> values;
  quantum::SeesawOptions o;
  o.seed = seed;
  o.restarts = 1;
  o.on_update = [&](double v) { values.push_back(v); };
  quantum::seesaw_settings(p, psi, o);
  return max_decrease(values);
}

double global_seesaw_max_decrease(const BellPolynomial& p, std::uint64_t seed) {
  std::vector<double> values;
  quantum::SeesawOptions o;
  o.seed = seed;
  o.restarts = 1;
  o.on_update = [&](double v) { values.push_back(v); };
  quantum::seesaw_global(p, o);
  return max_decrease(values);
}

double stationarity_error(const BellPolynomial& p, const quantum::PureState& psi,
                          const quantum::MeasurementConfig& c) {
  double worst = 0.0;
  for (int j = 0; j < p.scenario().parties(); ++j) {
    for (int k = 1; k <= p.scenario().settings(); ++k) {
      const Eigen::Vector3d v = quantum::partial_expectation_vector(p, psi, c, j, k);
      if (v.norm() < 1e-9) continue;
      worst = std::max(worst, (c.direction(j, k) - v / v.norm()).norm());
    }
  }
  return worst;
}

double gradient_error(const BellPolynomial& p, const quantum::PureState& psi, const quantum::MeasurementConfig& c) {
  constexpr double h = 1e-5;
  double worst = 0.0;
  for (int j = 0; j < p.scenario().parties(); ++j) {
    for (int k = 1; k <= p.scenario().settings(); ++k) {
      const quantum::BlochAngles a = c.angles(j, k);
      const Eigen::Vector3d v = quantum::partial_expectation_vector(p, psi, c, j, k);
      const double st = std::sin(a.theta), ct = std::cos(a.theta);
      const double sp = std::sin(a.phi), cp = std::cos(a.phi);
      const double d_theta = v.dot(Eigen::Vector3d(ct * cp, ct * sp, -st));
      const double d_phi = v.dot(Eigen::Vector3d(-st * sp, st * cp, 0.0));

      auto at = [&](double theta, double phi) {
        quantum::MeasurementConfig moved = c;
        moved.set_angles(j, k, {theta, phi});
        return quantum::expectation(p, psi, moved);
      };
      const double fd_theta = (at(a.theta + h, a.phi) - at(a.theta - h, a.phi)) / (2 * h);
      const double fd_phi = (at(a.theta, a.phi + h) - at(a.theta, a.phi - h)) / (2 * h);
      worst = std::max({worst, std::abs(d_theta - fd_theta), std::abs(d_phi - fd_phi)});
    }
  }
  return worst;
}

double separable_excess(const BellPolynomial& p, int configs, std::uint64_t seed) {
  const Scenario& s = p.scenario();
  const double lhv_max = lhv::lhv_bound(p).max.to_double();
  Rng rng(seed);
  double worst = -std::numeric_limits<double>::infinity();
  for (int i = 0; i < configs; ++i) {
    quantum::MeasurementConfig c(s);
    for (int j = 0; j < s.parties(); ++j) {
      for (int k = 1; k <= s.settings(); ++k) c.set_direction(j, k, random_direction(rng));
    }
    const int terms = 1 + static_cast<int>(rng.uniform() * 3);
    const auto dim = static_cast<Eigen::Index>(1) << s.parties();
    quantum::Matrix rho = quantum::Matrix::Zero(dim, dim);
    double total = 0.0;
    std::vector<double> w(terms);
    for (auto& x : w) total += x = 0.1 + rng.uniform();
    for (int t = 0; t < terms; ++t) {
      const auto psi = random_product_state(s.parties(), rng);
      rho += (w[t] / total) * psi.amplitudes() * psi.amplitudes().adjoint();
    }
    rho = 0.5 * (rho + rho.adjoint().eval());
    worst = std::max(worst, quantum::expectation(p, quantum::DensityMatrix(rho), c) - lhv_max);
  }
  return worst;
}

double noise_max(const Scenario& s, std::uint64_t seed) {
  const auto rho = quantum::DensityMatrix::maximally_mixed(s.parties());
  const auto c = quantum::MeasurementConfig::random(s, seed);
  double worst = 0.0;
  for (const auto& m : lhv::correlation_basis(s)) {
    const auto p = BellPolynomial::monomial(s, m);
    worst = std::max(worst, std::abs(quantum::expectation(p, rho, c)));
  }
  return worst;
}

}  // namespace bellforge::testkit
