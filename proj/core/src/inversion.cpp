#include "gravinv/inversion.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <string>

#include "gravinv/errors.hpp"
#include "gravinv/gsvd.hpp"

namespace gravinv {

const char* to_string(ParamMethod method) {
  return method == ParamMethod::lcurve ? "lcurve" : "gcv";
}

const char* to_string(StabilizerKind kind) {
  return kind == StabilizerKind::minimum_support ? "minimum-support" : "smoothness";
}

const char* to_string(WeVariant variant) {
  return variant == WeVariant::paper_eq_wk ? "paper-eq-Wk" : "fixed-apr";
}

const char* to_string(Termination termination) {
  switch (termination) {
    case Termination::running: return "running";
    case Termination::sufficient_decrease: return "converged-i";
    case Termination::model_change: return "converged-ii";
    case Termination::max_iter: return "max-iter";
  }
  return "unknown";
}

void InversionConfig::validate(std::size_t n) const {
  if (!(epsilon > 0.0)) throw ConfigError("epsilon must be > 0");
  if (!(beta >= 0.0)) throw ConfigError("beta must be >= 0");
  if (!(zeta > 0.0)) throw ConfigError("zeta must be > 0");
  if (!(bounds.min < bounds.max)) throw ConfigError("bounds require m_min < m_max");
  if (!(tau > 0.0)) throw ConfigError("tau must be > 0");
  validate_cooling(cooling);
  if (max_iter == 0) throw ConfigError("max_iter must be >= 1");
  if (alpha_count < 3) throw ConfigError("alpha grid needs at least 3 points");
  if (!(alpha_floor > 0.0)) throw ConfigError("alpha floor must be > 0");
  if (m_apr && static_cast<std::size_t>(m_apr->size()) != n) {
    throw ConfigError("a-priori model length does not match the grid");
  }
  for (std::size_t j : constrained_cells) {
    if (j >= n) throw ConfigError("constrained cell " + std::to_string(j) + " out of range");
  }
}

Projection project_bounds(Vector model, const Bounds& bounds, Vector whard) {
  if (model.size() != whard.size()) throw DimensionError("model and weight lengths differ");
  std::size_t clamped = 0;
  for (Eigen::Index j = 0; j < model.size(); ++j) {
    if (model[j] < bounds.min) {
      model[j] = bounds.min;
    } else if (model[j] > bounds.max) {
      model[j] = bounds.max;
    } else {
      continue;
    }
    whard[j] = kHardConstraintWeight;
    ++clamped;
  }
  return {std::move(model), std::move(whard), clamped};
}

Termination check_termination(const std::vector<IterationRecord>& records, double tau,
                              std::size_t max_iter) {
  if (records.empty()) return Termination::running;
  const IterationRecord& cur = records.back();
  if (records.size() >= 2) {
    const IterationRecord& prev = records[records.size() - 2];
    if (prev.objective - cur.objective < tau * (1.0 + cur.objective)) {
      return Termination::sufficient_decrease;
    }
  }
  if (cur.model_change < std::sqrt(tau) * (1.0 + cur.model_norm)) {
    return Termination::model_change;
  }
  if (cur.k >= max_iter) return Termination::max_iter;
  return Termination::running;
}

ObjectiveTerms objective_terms(const Matrix& g, const Vector& d_obs, const Vector& sigmas,
                               const StabilizerOperator& d, const Vector& model,
                               const Vector& m_ref, double alpha) {
  if (g.rows() != d_obs.size() || g.rows() != sigmas.size() || g.cols() != model.size() ||
      model.size() != m_ref.size() || d.size() != model.size()) {
    throw DimensionError("objective terms: operand sizes disagree");
  }
  const Vector misfit = ((g * model - d_obs).array() / sigmas.array()).matrix();
  ObjectiveTerms t;
  t.fidelity = misfit.squaredNorm();
  t.stabilizer_value = d.apply(model - m_ref).squaredNorm();
  t.objective = t.fidelity + alpha * alpha * t.stabilizer_value;
  return t;
}

std::size_t support_count(const Vector& model, double fraction) {
  if (model.size() == 0) return 0;
  const double peak = model.maxCoeff();
  if (!(peak > 0.0)) return 0;
  return static_cast<std::size_t>((model.array() > fraction * peak).count());
}

InversionResult invert(const SensitivityMatrix& g, const Vector& d_obs, const Vector& sigmas,
                       const InversionConfig& config, const ProgressCallback& progress) {
  const Matrix& gmat = g.matrix();
  const auto m = gmat.rows();
  const auto n = gmat.cols();
  if (d_obs.size() != m || sigmas.size() != m) {
    throw DimensionError("data and sigma lengths must equal the station count");
  }
  config.validate(static_cast<std::size_t>(n));

  const Vector wd = data_weights(sigmas);
  const Matrix gt = wd.asDiagonal() * gmat;
  const Vector wdepth = depth_weights(g.grid(), config.beta, config.zeta);
  Vector whard = Vector::Ones(n);
  for (std::size_t j : config.constrained_cells) whard = hard_constrain(std::move(whard), j);

  const Vector m_start = config.m_apr ? *config.m_apr : Vector::Zero(n);
  Vector m_prev = m_start;
  Vector m_prev2 = m_start;
  double alpha_prev = 0.0;

  InversionResult result;
  for (std::size_t k = 1; k <= config.max_iter; ++k) {
    Vector we = ms_weights_initial(static_cast<std::size_t>(n));
    if (k > 1) {
      we = config.we_variant == WeVariant::paper_eq_wk
               ? ms_weights(m_prev, m_prev2, config.epsilon)
               : ms_weights(m_prev, m_start, config.epsilon);
    }
    const StabilizerOperator dop = config.stabilizer == StabilizerKind::minimum_support
                                       ? compose_D(we, whard, wdepth)
                                       : smoothness_operator(g.grid(), whard, wdepth);

    GsvdFactors factors;
    try {
      factors = gsvd_factorize(gt, dop, {.compute_v = false});
    } catch (const Error& e) {
      throw NumericalError("iteration " + std::to_string(k) + ": factorization failed: " +
                           e.what());
    }

    const Vector r_tilde = (wd.array() * (d_obs - gmat * m_prev).array()).matrix();
    const AlphaGrid grid =
        AlphaGrid::for_spectrum(factors.gamma, config.alpha_count, config.alpha_floor);
    const double alpha_init = initial_alpha(factors.gamma, config.gamma_mean);

    ParamChoiceResult choice;
    if (r_tilde.squaredNorm() == 0.0) {
      choice.status = ParamStatus::degenerate;
      choice.alpha_star = k == 1 ? alpha_init : alpha_prev;
    } else if (config.param_method == ParamMethod::lcurve) {
      choice = lcurve_corner(factors, r_tilde, grid);
    } else {
      choice = gcv_minimize(factors, r_tilde, grid,
                            k == 1 ? std::nullopt : std::optional<double>(alpha_prev),
                            config.gcv_flat_tolerance);
    }
    const double alpha =
        k == 1 ? alpha_init : cooled_alpha(alpha_prev, choice.alpha_star, config.cooling);

    const Vector increment = solve_filtered(factors, r_tilde, alpha);
    Projection proj = project_bounds(m_prev + increment, config.bounds, std::move(whard));
    whard = std::move(proj.whard);
    const Vector& m_new = proj.model;

    const ObjectiveTerms terms =
        objective_terms(gmat, d_obs, sigmas, dop, m_new, m_prev, alpha);

    IterationRecord rec;
    rec.k = k;
    rec.alpha = alpha;
    rec.alpha_star = choice.alpha_star;
    rec.fidelity = terms.fidelity;
    rec.stabilizer_value = terms.stabilizer_value;
    rec.stabilizer_cumulative = dop.apply(m_new - m_start).squaredNorm();
    rec.objective = terms.objective;
    rec.model_change = (m_prev - m_new).norm();
    rec.model_norm = m_new.norm();
    rec.clamped = proj.clamped;
    rec.param_status = choice.status;
    rec.curve = std::move(choice.curve);

    if (!std::isfinite(rec.objective) || !std::isfinite(rec.fidelity) || !m_new.allFinite()) {
      std::ostringstream msg;
      msg << "non-finite objective at iteration " << k << " (alpha=" << alpha
          << ", fidelity=" << rec.fidelity << ", stabilizer=" << rec.stabilizer_value << ")";
      throw NumericalError(msg.str());
    }

    result.records.push_back(std::move(rec));
    if (progress) progress(result.records.back());

    m_prev2 = std::move(m_prev);
    m_prev = m_new;
    alpha_prev = alpha;

    result.termination = check_termination(result.records, config.tau, config.max_iter);
    if (result.termination != Termination::running) break;
  }
  result.model = std::move(m_prev);
  result.final_alpha = alpha_prev;
  result.whard = std::move(whard);
  return result;
}

}  // namespace gravinv
