#pragma once

// Quantum side: qubit observables from Bloch angles, Bell operators on
// 2^N dimensions, see-saw maximization, GHZ scans and Werner visibility.
//
// Party 0 is the most significant qubit, so X_1 (x) X_2 (x) ... acts on
// |q_1 q_2 ...> in the usual Kronecker order.

#include <Eigen/Dense>
#include <complex>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "bellforge/bellpoly.hpp"

namespace bellforge::quantum {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

inline constexpr int kMaxParties = 6;

Eigen::Matrix2cd bloch_observable(double theta, double phi);
Eigen::Matrix2cd bloch_observable(const Eigen::Vector3d& direction);

struct BlochAngles {
  double theta = 0.0;
  double phi = 0.0;

  Eigen::Vector3d direction() const;
  static BlochAngles from_direction(const Eigen::Vector3d& n);
};

/// Measurement direction for every (party, setting); setting 0 is the
/// identity and is never stored.
class MeasurementConfig {
 public:
  explicit MeasurementConfig(const Scenario& scenario);

  static MeasurementConfig random(const Scenario& scenario, std::uint64_t seed);

  const Scenario& scenario() const { return scenario_; }
  const BlochAngles& angles(int party, int setting) const;
  void set_angles(int party, int setting, BlochAngles a);
  Eigen::Vector3d direction(int party, int setting) const;
  void set_direction(int party, int setting, const Eigen::Vector3d& n);
  Eigen::Matrix2cd observable(int party, int setting) const;

 private:
  std::size_t slot(int party, int setting) const;

  Scenario scenario_;
  std::vector<BlochAngles> angles_;
};

class PureState {
 public:
  /// Requires length 2^N (N <= kMaxParties) and unit norm within 1e-12.
  explicit PureState(Vector amplitudes);
  /// Normalizes a nonzero vector first.
  static PureState normalized(const Vector& v);
  /// Computational basis state; bit N-1-j of `bits` is party j's qubit.
  static PureState basis(int parties, std::uint64_t bits);

  int parties() const { return parties_; }
  const Vector& amplitudes() const { return amplitudes_; }

 private:
  Vector amplitudes_;
  int parties_;
};

class DensityMatrix {
 public:
  /// Requires Hermitian and unit trace within 1e-12 and eigenvalues >= -1e-10.
  explicit DensityMatrix(Matrix rho);
  static DensityMatrix from_pure(const PureState& psi);
  static DensityMatrix maximally_mixed(int parties);

  int parties() const { return parties_; }
  const Matrix& matrix() const { return rho_; }

 private:
  Matrix rho_;
  int parties_;
};

PureState ghz(int parties, double xi);
DensityMatrix werner(const PureState& psi, double visibility);

/// Sum over terms of coefficient times the tensor product of observables.
Matrix bell_operator(const BellPolynomial& p, const MeasurementConfig& c);

double expectation(const BellPolynomial& p, const PureState& psi, const MeasurementConfig& c);
double expectation(const BellPolynomial& p, const DensityMatrix& rho, const MeasurementConfig& c);

/// v such that the expectation equals (terms without X_{party,setting}) + v . n,
/// where n is that observable's Bloch direction.
Eigen::Vector3d partial_expectation_vector(const BellPolynomial& p, const PureState& psi,
                                           const MeasurementConfig& c, int party, int setting);

struct Eigenpair {
  double value;
  Vector vector;
  double residual;  // ||H v - lambda v||
};

/// Largest eigenvalue of a Hermitian matrix; residual <= tol * ||H|| is enforced.
Eigenpair max_eigenpair(const Matrix& h, double tol = 1e-10);

struct SeesawOptions {
  std::uint64_t seed = 1;
  int restarts = 50;
  double tolerance = 1e-12;
  int max_sweeps = 10000;
  /// Used as the first restart's starting point when set.
  std::optional<MeasurementConfig> warm_start;
  /// Called with the objective after every single-setting update.
  std::function<void(double)> on_update;
};

struct OptimizationResult {
  double value = 0.0;
  MeasurementConfig config{Scenario(1, 1)};
  std::optional<PureState> state;
  int restarts_used = 0;
  bool converged = false;
  std::uint64_t seed = 0;
  /// Best minus worst restart value.
  double spread = 0.0;
  int sweeps = 0;
};

/// Block-coordinate ascent over measurement directions for a fixed state.
OptimizationResult seesaw_settings(const BellPolynomial& p, const PureState& psi, const SeesawOptions& options);

/// Alternates direction sweeps with a move to the top eigenvector of the
/// current Bell operator.
OptimizationResult seesaw_global(const BellPolynomial& p, const SeesawOptions& options);

struct VisibilityResult {
  double visibility = 0.0;
  double quantum_value = 0.0;
  double noise_value = 0.0;
  OptimizationResult optimization;
};

/// V* from linearity in V: noise contributes only the identity coefficient.
/// Throws NumericalError when the optimized value does not exceed `bound`.
VisibilityResult visibility_threshold(const BellPolynomial& p, const PureState& psi, const SeesawOptions& options,
                                      double bound = 1.0);

struct ScanRow {
  double xi;
  double value;
  int restarts_used;
  bool converged;
};

/// Optimizes settings for cos(xi)|0..0> + sin(xi)|1..1> at each grid point,
/// warm-started from the previous point, then sweeps back once warm-started
/// from the next point and keeps the better value.
std::vector<ScanRow> scan_ghz(const BellPolynomial& p, const std::vector<double>& xi_grid,
                              const SeesawOptions& options);

/// n evenly spaced points on [lo, hi].
std::vector<double> linspace(double lo, double hi, int n);

struct SampleRow {
  std::string state_id;
  double value;
  int restarts_used;
  bool converged;
};

/// GHZ and |0101..> sentinels followed by `count` Haar-random pure states.
std::vector<SampleRow> sample_random_pure_states(const BellPolynomial& p, int count, const SeesawOptions& options);

PureState haar_random_state(int parties, std::uint64_t seed);

}  // namespace bellforge::quantum
