#include "bellforge/qviolation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "bellforge/random.hpp"

namespace bellforge::quantum {

namespace {

constexpr double kNormTol = 1e-12;
constexpr double kDegenerate = 1e-14;
constexpr double kDirectionTol = 1e-9;
constexpr int kStallSweeps = 50;

int parties_for_dimension(Eigen::Index dim) {
  int n = 0;
  while ((Eigen::Index(1) << n) < dim) ++n;
  if ((Eigen::Index(1) << n) != dim || n < 1 || n > kMaxParties) {
    throw InvalidArgument("state dimension must be 2^N with 1 <= N <= " + std::to_string(kMaxParties));
  }
  return n;
}

void require_supported(const Scenario& s) {
  if (s.parties() > kMaxParties) {
    throw TooLarge("quantum evaluation supports at most " + std::to_string(kMaxParties) + " parties");
  }
}

Matrix kron(const Matrix& a, const Matrix& b) {
  Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

struct Term {
  double coefficient;
  std::vector<int> index;
};

std::vector<Term> numeric_terms(const BellPolynomial& p) {
  std::vector<Term> out;
  out.reserve(p.size());
  for (const auto& [m, c] : p.terms()) out.push_back({c.to_double(), m.index()});
  return out;
}

// Applies a single-qubit operator to `party` in place.
void apply_local(Vector& psi, int parties, int party, const Eigen::Matrix2cd& u) {
  const Eigen::Index bit = Eigen::Index(1) << (parties - 1 - party);
  for (Eigen::Index i = 0; i < psi.size(); ++i) {
    if (i & bit) continue;
    const Complex a0 = psi[i];
    const Complex a1 = psi[i | bit];
    psi[i] = u(0, 0) * a0 + u(0, 1) * a1;
    psi[i | bit] = u(1, 0) * a0 + u(1, 1) * a1;
  }
}

class Evaluator {
 public:
  Evaluator(const BellPolynomial& p, const Vector& psi)
      : parties_(p.scenario().parties()), terms_(numeric_terms(p)), psi_(psi) {}

  double value(const MeasurementConfig& c) const {
    double total = 0.0;
    Vector phi(psi_.size());
    for (const auto& t : terms_) {
      phi = psi_;
      for (int j = 0; j < parties_; ++j) {
        if (t.index[j] != 0) apply_local(phi, parties_, j, c.observable(j, t.index[j]));
      }
      total += t.coefficient * psi_.dot(phi).real();
    }
    return total;
  }

  Eigen::Vector3d partial(const MeasurementConfig& c, int party, int setting) const {
    Eigen::Vector3d v = Eigen::Vector3d::Zero();
    const Eigen::Index bit = Eigen::Index(1) << (parties_ - 1 - party);
    Vector phi(psi_.size());
    for (const auto& t : terms_) {
      if (t.index[party] != setting) continue;
      phi = psi_;
      for (int j = 0; j < parties_; ++j) {
        if (j != party && t.index[j] != 0) apply_local(phi, parties_, j, c.observable(j, t.index[j]));
      }
      Complex sx = 0.0, sy = 0.0, sz = 0.0;
      for (Eigen::Index i = 0; i < psi_.size(); ++i) {
        if (i & bit) continue;
        const Eigen::Index i1 = i | bit;
        const Complex b0 = std::conj(psi_[i]);
        const Complex b1 = std::conj(psi_[i1]);
        sx += b0 * phi[i1] + b1 * phi[i];
        sy += b0 * Complex(0, -1) * phi[i1] + b1 * Complex(0, 1) * phi[i];
        sz += b0 * phi[i] - b1 * phi[i1];
      }
      v += t.coefficient * Eigen::Vector3d(sx.real(), sy.real(), sz.real());
    }
    return v;
  }

  void set_state(const Vector& psi) { psi_ = psi; }

 private:
  int parties_;
  std::vector<Term> terms_;
  Vector psi_;
};

std::vector<std::pair<int, int>> used_settings(const BellPolynomial& p) {
  const Scenario& s = p.scenario();
  std::vector<std::pair<int, int>> out;
  for (int j = 0; j < s.parties(); ++j) {
    for (int k = 1; k <= s.settings(); ++k) {
      const bool used = std::any_of(p.terms().begin(), p.terms().end(),
                                    [&](const auto& t) { return t.first.mask(j) == (1u << (k - 1)); });
      if (used) out.emplace_back(j, k);
    }
  }
  return out;
}

// One pass of closed-form updates; returns the objective afterwards.
double sweep(const Evaluator& eval, const std::vector<std::pair<int, int>>& slots, MeasurementConfig& c,
             double current, double& max_step, const std::function<void(double)>& on_update) {
  max_step = 0.0;
  for (const auto& [j, k] : slots) {
    const Eigen::Vector3d v = eval.partial(c, j, k);
    const double norm = v.norm();
    if (norm < kDegenerate) continue;
    const Eigen::Vector3d old = c.direction(j, k);
    const Eigen::Vector3d next = v / norm;
    const double rest = current - v.dot(old);
    current = rest + norm;
    max_step = std::max(max_step, (next - old).norm());
    c.set_direction(j, k, next);
    if (on_update) on_update(current);
  }
  return eval.value(c);
}

struct RestartOutcome {
  double value;
  MeasurementConfig config;
  std::optional<PureState> state;
  bool converged;
  int sweeps;
};

template <typename Step>
RestartOutcome ascend(double start, int max_sweeps, double tol, Step step) {
  double value = start;
  int stall = 0;
  for (int s = 1; s <= max_sweeps; ++s) {
    double max_step = 0.0;
    const double next = step(max_step);
    const double improvement = next - value;
    value = std::max(value, next);
    if (improvement < tol) {
      if (max_step < kDirectionTol || ++stall >= kStallSweeps) {
        return {value, MeasurementConfig(Scenario(1, 1)), std::nullopt, true, s};
      }
    } else {
      stall = 0;
    }
  }
  return {value, MeasurementConfig(Scenario(1, 1)), std::nullopt, false, max_sweeps};
}

OptimizationResult merge(std::vector<RestartOutcome>& outcomes, const SeesawOptions& options) {
  std::size_t best = 0;
  double worst = outcomes.front().value;
  for (std::size_t i = 0; i < outcomes.size(); ++i) {
    if (outcomes[i].value > outcomes[best].value) best = i;
    worst = std::min(worst, outcomes[i].value);
  }
  OptimizationResult r{outcomes[best].value, outcomes[best].config, outcomes[best].state,
                       static_cast<int>(outcomes.size()), outcomes[best].converged, options.seed,
                       outcomes[best].value - worst, outcomes[best].sweeps};
  return r;
}

void require_restarts(const SeesawOptions& o) {
  if (o.restarts < 1) throw InvalidArgument("restarts must be positive");
  if (o.max_sweeps < 1) throw InvalidArgument("max_sweeps must be positive");
}

}  // namespace

Eigen::Matrix2cd bloch_observable(double theta, double phi) {
  return bloch_observable(BlochAngles{theta, phi}.direction());
}

Eigen::Matrix2cd bloch_observable(const Eigen::Vector3d& n) {
  if (!std::isfinite(n.norm()) || std::abs(n.norm() - 1.0) > 1e-9) throw InvalidArgument("direction must be a unit vector");
  Eigen::Matrix2cd m;
  m << Complex(n.z(), 0), Complex(n.x(), -n.y()), Complex(n.x(), n.y()), Complex(-n.z(), 0);
  return m;
}

Eigen::Vector3d BlochAngles::direction() const {
  return {std::sin(theta) * std::cos(phi), std::sin(theta) * std::sin(phi), std::cos(theta)};
}

BlochAngles BlochAngles::from_direction(const Eigen::Vector3d& n) {
  const double r = n.norm();
  if (!(r > 0.0) || !std::isfinite(r)) throw InvalidArgument("direction must be a finite nonzero vector");
  const double theta = std::acos(std::clamp(n.z() / r, -1.0, 1.0));
  double phi = std::atan2(n.y(), n.x());
  if (phi < 0.0) phi += 2.0 * std::numbers::pi;
  return {theta, phi};
}

MeasurementConfig::MeasurementConfig(const Scenario& scenario)
    : scenario_(scenario), angles_(static_cast<std::size_t>(scenario.observables())) {}

MeasurementConfig MeasurementConfig::random(const Scenario& scenario, std::uint64_t seed) {
  MeasurementConfig c(scenario);
  Rng rng(seed);
  for (int j = 0; j < scenario.parties(); ++j) {
    for (int k = 1; k <= scenario.settings(); ++k) {
      Eigen::Vector3d n;
      do {
        n = {rng.normal(), rng.normal(), rng.normal()};
      } while (n.norm() < 1e-8);
      c.set_direction(j, k, n);
    }
  }
  return c;
}

std::size_t MeasurementConfig::slot(int party, int setting) const {
  if (party < 0 || party >= scenario_.parties() || setting < 1 || setting > scenario_.settings()) {
    throw InvalidArgument("observable (" + std::to_string(party + 1) + "," + std::to_string(setting) +
                          ") outside the scenario");
  }
  return static_cast<std::size_t>(party * scenario_.settings() + setting - 1);
}

const BlochAngles& MeasurementConfig::angles(int party, int setting) const { return angles_[slot(party, setting)]; }

void MeasurementConfig::set_angles(int party, int setting, BlochAngles a) {
  if (!std::isfinite(a.theta) || !std::isfinite(a.phi)) throw InvalidArgument("angles must be finite");
  angles_[slot(party, setting)] = a;
}

Eigen::Vector3d MeasurementConfig::direction(int party, int setting) const {
  return angles(party, setting).direction();
}

void MeasurementConfig::set_direction(int party, int setting, const Eigen::Vector3d& n) {
  angles_[slot(party, setting)] = BlochAngles::from_direction(n);
}

Eigen::Matrix2cd MeasurementConfig::observable(int party, int setting) const {
  return bloch_observable(direction(party, setting));
}

PureState::PureState(Vector amplitudes) : amplitudes_(std::move(amplitudes)) {
  parties_ = parties_for_dimension(amplitudes_.size());
  if (std::abs(amplitudes_.norm() - 1.0) > kNormTol) throw InvalidArgument("state is not normalized");
}

PureState PureState::normalized(const Vector& v) {
  const double n = v.norm();
  if (!(n > 0.0) || !std::isfinite(n)) throw InvalidArgument("cannot normalize a zero or non-finite vector");
  return PureState(v / n);
}

PureState PureState::basis(int parties, std::uint64_t bits) {
  if (parties < 1 || parties > kMaxParties) throw InvalidArgument("unsupported party count");
  if (bits >= (std::uint64_t(1) << parties)) throw InvalidArgument("basis index out of range");
  Vector v = Vector::Zero(Eigen::Index(1) << parties);
  v[static_cast<Eigen::Index>(bits)] = 1.0;
  return PureState(std::move(v));
}

DensityMatrix::DensityMatrix(Matrix rho) : rho_(std::move(rho)) {
  if (rho_.rows() != rho_.cols()) throw InvalidArgument("density matrix must be square");
  parties_ = parties_for_dimension(rho_.rows());
  if ((rho_ - rho_.adjoint()).cwiseAbs().maxCoeff() > kNormTol) throw InvalidArgument("density matrix is not Hermitian");
  if (std::abs(rho_.trace() - Complex(1.0)) > kNormTol) throw InvalidArgument("density matrix trace is not 1");
  Eigen::SelfAdjointEigenSolver<Matrix> es(rho_, Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success) throw NumericalError("eigenvalue check failed");
  if (es.eigenvalues().minCoeff() < -1e-10) throw InvalidArgument("density matrix is not positive semidefinite");
}

DensityMatrix DensityMatrix::from_pure(const PureState& psi) {
  return DensityMatrix(psi.amplitudes() * psi.amplitudes().adjoint());
}

DensityMatrix DensityMatrix::maximally_mixed(int parties) {
  if (parties < 1 || parties > kMaxParties) throw InvalidArgument("unsupported party count");
  const Eigen::Index d = Eigen::Index(1) << parties;
  return DensityMatrix(Matrix::Identity(d, d) / static_cast<double>(d));
}

PureState ghz(int parties, double xi) {
  if (!(xi >= 0.0 && xi <= std::numbers::pi / 2)) throw InvalidArgument("xi must lie in [0, pi/2]");
  if (parties < 1 || parties > kMaxParties) throw InvalidArgument("unsupported party count");
  Vector v = Vector::Zero(Eigen::Index(1) << parties);
  v[0] = std::cos(xi);
  v[v.size() - 1] += std::sin(xi);
  return PureState::normalized(v);
}

DensityMatrix werner(const PureState& psi, double visibility) {
  if (!(visibility >= 0.0 && visibility <= 1.0)) throw InvalidArgument("visibility must lie in [0, 1]");
  const Eigen::Index d = psi.amplitudes().size();
  Matrix rho = visibility * (psi.amplitudes() * psi.amplitudes().adjoint()) +
               (1.0 - visibility) / static_cast<double>(d) * Matrix::Identity(d, d);
  rho = 0.5 * (rho + rho.adjoint()).eval();
  return DensityMatrix(std::move(rho));
}

Matrix bell_operator(const BellPolynomial& p, const MeasurementConfig& c) {
  const Scenario& s = p.scenario();
  require_supported(s);
  require_same_scenario(s, c.scenario());
  const Eigen::Index d = Eigen::Index(1) << s.parties();
  Matrix out = Matrix::Zero(d, d);
  for (const auto& t : numeric_terms(p)) {
    Matrix prod = Matrix::Identity(1, 1);
    for (int j = 0; j < s.parties(); ++j) {
      const Matrix local = t.index[j] == 0 ? Matrix(Matrix::Identity(2, 2)) : Matrix(c.observable(j, t.index[j]));
      prod = kron(prod, local);
    }
    out += t.coefficient * prod;
  }
  return out;
}

double expectation(const BellPolynomial& p, const PureState& psi, const MeasurementConfig& c) {
  require_supported(p.scenario());
  require_same_scenario(p.scenario(), c.scenario());
  if (psi.parties() != p.scenario().parties()) throw ScenarioMismatch("state and polynomial party counts differ");
  return Evaluator(p, psi.amplitudes()).value(c);
}

double expectation(const BellPolynomial& p, const DensityMatrix& rho, const MeasurementConfig& c) {
  if (rho.parties() != p.scenario().parties()) throw ScenarioMismatch("state and polynomial party counts differ");
  const Complex v = (rho.matrix() * bell_operator(p, c)).trace();
  if (std::abs(v.imag()) > 1e-10) throw NumericalError("expectation has a non-negligible imaginary part");
  return v.real();
}

Eigen::Vector3d partial_expectation_vector(const BellPolynomial& p, const PureState& psi,
                                           const MeasurementConfig& c, int party, int setting) {
  require_supported(p.scenario());
  require_same_scenario(p.scenario(), c.scenario());
  if (psi.parties() != p.scenario().parties()) throw ScenarioMismatch("state and polynomial party counts differ");
  c.angles(party, setting);  // range check
  return Evaluator(p, psi.amplitudes()).partial(c, party, setting);
}

Eigenpair max_eigenpair(const Matrix& h, double tol) {
  if (h.rows() != h.cols() || h.rows() == 0 || h.rows() > 64) {
    throw InvalidArgument("max_eigenpair needs a square matrix of dimension 1..64");
  }
  if ((h - h.adjoint()).norm() > 1e-12 * std::max(h.norm(), 1.0)) throw InvalidArgument("matrix is not Hermitian");
  Eigen::SelfAdjointEigenSolver<Matrix> es(h);
  if (es.info() != Eigen::Success) throw NumericalError("eigensolver did not converge");
  const Eigen::Index top = h.rows() - 1;
  Eigenpair e{es.eigenvalues()[top], es.eigenvectors().col(top), 0.0};
  e.residual = (h * e.vector - e.value * e.vector).norm();
  const double scale = std::max(h.norm(), std::numeric_limits<double>::min());
  if (e.residual > tol * scale && e.residual > 1e-14) {
    throw NumericalError("eigenpair residual " + std::to_string(e.residual) + " exceeds tolerance");
  }
  return e;
}

OptimizationResult seesaw_settings(const BellPolynomial& p, const PureState& psi, const SeesawOptions& options) {
  require_supported(p.scenario());
  require_restarts(options);
  if (psi.parties() != p.scenario().parties()) throw ScenarioMismatch("state and polynomial party counts differ");
  const Evaluator eval(p, psi.amplitudes());
  const auto slots = used_settings(p);
  std::vector<RestartOutcome> outcomes;
  outcomes.reserve(static_cast<std::size_t>(options.restarts));
  for (int r = 0; r < options.restarts; ++r) {
    MeasurementConfig c = (r == 0 && options.warm_start)
                              ? *options.warm_start
                              : MeasurementConfig::random(p.scenario(), derive_seed(options.seed, r));
    require_same_scenario(c.scenario(), p.scenario());
    const double start = eval.value(c);
    if (options.on_update) options.on_update(start);
    double current = start;
    RestartOutcome o = ascend(start, options.max_sweeps, options.tolerance, [&](double& max_step) {
      current = sweep(eval, slots, c, current, max_step, options.on_update);
      return current;
    });
    o.config = c;
    o.value = eval.value(c);
    o.state = psi;
    outcomes.push_back(std::move(o));
  }
  return merge(outcomes, options);
}

OptimizationResult seesaw_global(const BellPolynomial& p, const SeesawOptions& options) {
  require_supported(p.scenario());
  require_restarts(options);
  const auto slots = used_settings(p);
  std::vector<RestartOutcome> outcomes;
  for (int r = 0; r < options.restarts; ++r) {
    MeasurementConfig c = (r == 0 && options.warm_start)
                              ? *options.warm_start
                              : MeasurementConfig::random(p.scenario(), derive_seed(options.seed, r));
    require_same_scenario(c.scenario(), p.scenario());
    Eigenpair top;
    try {
      top = max_eigenpair(bell_operator(p, c));
    } catch (const NumericalError&) {
      continue;
    }
    Evaluator eval(p, top.vector);
    double current = top.value;
    if (options.on_update) options.on_update(current);
    bool failed = false;
    RestartOutcome o = ascend(current, options.max_sweeps, options.tolerance, [&](double& max_step) {
      current = sweep(eval, slots, c, current, max_step, options.on_update);
      try {
        top = max_eigenpair(bell_operator(p, c));
      } catch (const NumericalError&) {
        failed = true;
        return current;
      }
      current = std::max(current, top.value);
      eval.set_state(top.vector);
      if (options.on_update) options.on_update(current);
      return current;
    });
    if (failed) continue;
    const PureState state = PureState::normalized(top.vector);
    o.config = c;
    o.value = Evaluator(p, state.amplitudes()).value(c);
    o.state = state;
    outcomes.push_back(std::move(o));
  }
  if (outcomes.empty()) throw NumericalError("every see-saw restart failed in the eigensolver");
  return merge(outcomes, options);
}

VisibilityResult visibility_threshold(const BellPolynomial& p, const PureState& psi, const SeesawOptions& options,
                                      double bound) {
  const double identity = p.constant_term().to_double();
  VisibilityResult out{0.0, 0.0, 0.0, seesaw_settings(p, psi, options)};
  // Noise nullity: the maximally mixed state sees only the identity term.
  const Eigen::Index d = psi.amplitudes().size();
  const double noise = bell_operator(p, out.optimization.config).trace().real() / static_cast<double>(d);
  double scale = 0.0;
  for (const auto& [m, c] : p.terms()) scale += std::abs(c.to_double());
  if (std::abs(noise - identity) > 1e-12 * std::max(1.0, scale)) {
    throw NumericalError("noise expectation differs from the identity coefficient");
  }
  out.noise_value = identity;
  out.quantum_value = out.optimization.value;
  if (out.quantum_value <= bound + 1e-12) {
    throw NumericalError("no violation: optimized value " + std::to_string(out.quantum_value) +
                         " does not exceed the bound");
  }
  if (identity >= bound) throw NumericalError("the noise term alone reaches the bound");
  out.visibility = std::min(1.0, (bound - identity) / (out.quantum_value - identity));
  return out;
}

std::vector<double> linspace(double lo, double hi, int n) {
  if (n < 1) throw InvalidArgument("grid needs at least one point");
  std::vector<double> out(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) out[i] = n == 1 ? lo : lo + (hi - lo) * i / (n - 1);
  return out;
}

std::vector<ScanRow> scan_ghz(const BellPolynomial& p, const std::vector<double>& xi_grid,
                              const SeesawOptions& options) {
  const int n = p.scenario().parties();
  std::vector<ScanRow> rows;
  std::vector<MeasurementConfig> configs;
  rows.reserve(xi_grid.size());
  SeesawOptions local = options;
  for (std::size_t i = 0; i < xi_grid.size(); ++i) {
    local.seed = derive_seed(options.seed, i);
    const OptimizationResult r = seesaw_settings(p, ghz(n, xi_grid[i]), local);
    rows.push_back({xi_grid[i], r.value, r.restarts_used, r.converged});
    configs.push_back(r.config);
    local.warm_start = r.config;
  }
  // Backward pass: a single run warm-started from the right neighbour.
  SeesawOptions back = options;
  back.restarts = 1;
  for (std::size_t i = xi_grid.size(); i-- > 1;) {
    back.warm_start = configs[i];
    const OptimizationResult r = seesaw_settings(p, ghz(n, xi_grid[i - 1]), back);
    ScanRow& row = rows[i - 1];
    row.restarts_used += 1;
    if (r.value > row.value) {
      row.value = r.value;
      row.converged = r.converged;
      configs[i - 1] = r.config;
    }
  }
  return rows;
}

PureState haar_random_state(int parties, std::uint64_t seed) {
  if (parties < 1 || parties > kMaxParties) throw InvalidArgument("unsupported party count");
  Rng rng(seed);
  Vector v(Eigen::Index(1) << parties);
  for (auto& a : v) {
    const double re = rng.normal();
    a = Complex(re, rng.normal());
  }
  return PureState::normalized(v);
}

std::vector<SampleRow> sample_random_pure_states(const BellPolynomial& p, int count, const SeesawOptions& options) {
  if (count < 0) throw InvalidArgument("count must be nonnegative");
  const int n = p.scenario().parties();
  std::uint64_t alternating = 0;
  std::string product_id = "product_";
  for (int j = 0; j < n; ++j) {
    alternating = (alternating << 1) | std::uint64_t(j % 2);
    product_id += char('0' + j % 2);
  }
  std::vector<std::pair<std::string, PureState>> states;
  states.emplace_back("ghz", ghz(n, std::numbers::pi / 4));
  states.emplace_back(product_id, PureState::basis(n, alternating));
  for (int i = 0; i < count; ++i) {
    states.emplace_back("haar_" + std::to_string(i), haar_random_state(n, derive_seed(options.seed ^ 0x5eedULL, i)));
  }
  std::vector<SampleRow> rows;
  SeesawOptions local = options;
  for (std::size_t i = 0; i < states.size(); ++i) {
    local.seed = derive_seed(options.seed, i);
    const OptimizationResult r = seesaw_settings(p, states[i].second, local);
    rows.push_back({states[i].first, r.value, r.restarts_used, r.converged});
  }
  return rows;
}

}  // namespace bellforge::quantum
