#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <vector>

#include "gravinv/forward.hpp"
#include "gravinv/regparam.hpp"
#include "gravinv/weights.hpp"

namespace gravinv {

enum class ParamMethod { lcurve, gcv };

/// How the minimum-support weights are refreshed at k > 1: from the two
/// previous iterates, or from the previous iterate and a fixed a-priori model.
enum class WeVariant { paper_eq_wk, fixed_apr };

enum class Termination { running, sufficient_decrease, model_change, max_iter };

const char* to_string(ParamMethod method);
const char* to_string(StabilizerKind kind);
const char* to_string(WeVariant variant);
const char* to_string(Termination termination);

struct Bounds {
  double min = 0.0;
  double max = 1.0;
};

struct InversionConfig {
  double epsilon = 0.02;
  double beta = 0.6;
  double zeta = 0.1;
  Bounds bounds{};
  double tau = 0.01;
  double cooling = 0.4;
  std::size_t max_iter = 20;
  ParamMethod param_method = ParamMethod::lcurve;
  StabilizerKind stabilizer = StabilizerKind::minimum_support;
  std::size_t alpha_count = 200;
  double alpha_floor = 1e-2;
  double gcv_flat_tolerance = 1e-3;
  GammaMean gamma_mean = GammaMean::nonzero;
  WeVariant we_variant = WeVariant::paper_eq_wk;
  /// A-priori model (contrast); also the starting model when given.
  std::optional<Vector> m_apr;
  /// Cells whose a-priori value is known; they start hard-constrained.
  std::vector<std::size_t> constrained_cells;

  /// Throws ConfigError on an invalid combination for n cells.
  void validate(std::size_t n) const;
};

struct IterationRecord {
  std::size_t k = 0;
  double alpha = 0.0;
  /// Value proposed by the parameter-choice rule before cooling.
  double alpha_star = 0.0;
  /// phi(d) = ||Wd (G m - d_obs)||^2.
  double fidelity = 0.0;
  /// ||D (m^(k) - m^(k-1))||^2, the stabilizer of the accepted increment.
  double stabilizer_value = 0.0;
  /// ||D (m^(k) - m_apr)||^2 with m_apr the starting model.
  double stabilizer_cumulative = 0.0;
  /// fidelity + alpha^2 * stabilizer_value.
  double objective = 0.0;
  double model_change = 0.0;
  double model_norm = 0.0;
  std::size_t clamped = 0;
  ParamStatus param_status = ParamStatus::ok;
  std::vector<CurvePoint> curve;
};

struct InversionResult {
  Vector model;
  std::vector<IterationRecord> records;
  Termination termination = Termination::running;
  double final_alpha = 0.0;
  Vector whard;

  bool converged() const {
    return termination == Termination::sufficient_decrease ||
           termination == Termination::model_change;
  }
};

using ProgressCallback = std::function<void(const IterationRecord&)>;

/// Focusing inversion by iteratively reweighted Tikhonov regularization.
///
/// Each iteration refreshes the stabilizer, factorizes (Wd G, D), picks
/// alpha on the grid (L-curve or GCV) subject to cooling, adds the filtered
/// increment, projects onto the bounds and hard-constrains clamped cells.
/// Throws NumericalError if the factorization fails or an objective is not
/// finite.
InversionResult invert(const SensitivityMatrix& g, const Vector& d_obs, const Vector& sigmas,
                       const InversionConfig& config, const ProgressCallback& progress = {});

struct Projection {
  Vector model;
  Vector whard;
  std::size_t clamped = 0;
};

/// Clamps out-of-range entries to the violated bound and sets their hard
/// weight to 100; in-range entries and their weights are untouched.
Projection project_bounds(Vector model, const Bounds& bounds, Vector whard);

/// Criterion (i) P^(k-1) - P^(k) < tau (1 + P^(k)) is tested first, then
/// (ii) ||m^(k-1) - m^(k)|| < sqrt(tau) (1 + ||m^(k)||), then the iteration
/// cap. (i) needs at least two records.
Termination check_termination(const std::vector<IterationRecord>& records, double tau,
                              std::size_t max_iter);

struct ObjectiveTerms {
  double fidelity = 0.0;
  double stabilizer_value = 0.0;
  double objective = 0.0;
};

ObjectiveTerms objective_terms(const Matrix& g, const Vector& d_obs, const Vector& sigmas,
                               const StabilizerOperator& d, const Vector& model,
                               const Vector& m_ref, double alpha);

/// Count of cells whose value exceeds `fraction` of the largest value.
std::size_t support_count(const Vector& model, double fraction = 0.5);

}  // namespace gravinv
