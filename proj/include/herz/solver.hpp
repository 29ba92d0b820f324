#pragma once

#include <string>
#include <vector>

#include "herz/exponents.hpp"
#include "herz/heat.hpp"
#include "herz/norms.hpp"

namespace herz {

enum class PicardOutcome { Converged, NonContractive, MaxIterations };

std::string to_string(PicardOutcome o);

struct SolverOptions {
  int time_points = 16;          // geometric grid T 2^{-(m-1)}, ..., T/2, T
  double time_ratio = 2.0;
  double grading = 0.0;          // Duhamel grading; <= 0 means use delta (clamped to (0, 1])
  Window window{-40, 20};        // annuli used for the convergence norm
  bool keep_iterates = true;
};

struct PicardRun {
  ProblemParams params;
  double horizon = 0.0;
  std::vector<double> time_grid;
  std::vector<SpaceTimeFunction> iterates;                // slices at 0 and every grid time
  std::vector<std::vector<NormValue>> herz_history;      // [iterate][time]
  std::vector<double> differences;                         // sup_t ||u^{k+1}(t) - u^k(t)||
  std::vector<double> contraction_ratios;
  PicardOutcome outcome = PicardOutcome::MaxIterations;
  bool converged = false;
  int iterations = 0;
  double grading = 1.0;
  std::string note;
};

/// Zeroth iterate: t -> e^{t Lap} u0 (plus an optional time-constant shift).
/// u^{k+1}(t) = e^{t Lap} u0 + int_0^t e^{(t-tau) Lap} N(u^k(tau)) dtau with u^k
/// interpolated linearly in time between its slices.
PicardRun picard_solve(const RadialFunction& u0, const ProblemParams& params, double T, const QuadratureSpec& quad,
                       int max_iter, double tol, const SolverOptions& opt = {},
                       const RadialFunction& zeroth_shift = {});

/// The Duhamel correction of the first step, N applied to the heat flow of u0,
/// on the same grid as picard_solve.
std::vector<Sampled> first_correction(const RadialFunction& u0, const ProblemParams& params, double T,
                                      const QuadratureSpec& quad, const SolverOptions& opt = {});

/// ||u - (e^{t Lap} u0 + Duhamel(N(u)))|| at every grid time for the last iterate.
std::vector<double> fixed_point_residual(const PicardRun& run, const RadialFunction& u0, const QuadratureSpec& quad,
                                         const SolverOptions& opt = {});

struct DifferenceReport {
  std::vector<double> times;
  std::vector<NormValue> diff_norms;          // converged ||u_1(t) - u_2(t)||
  std::vector<double> first_step_diff;        // ||u_1^1(t) - u_2^1(t)||, the first application of the map
  std::vector<double> gronwall_envelope;      // C t^delta fitted on early times
  double delta = 0.0;
  double early_exponent = 0.0;                // log-log slope of first_step_diff over early times
  double envelope_constant = 0.0;
  double tol = 0.0;
  double aux_q_inv = 0.0;                     // 1/q~ for the auxiliary sup norm
  double aux_beta = 0.0;
  double aux_sup = 0.0;                       // sup_t t^beta ||e^{t Lap} u0|| at (s, q~, r)
  bool aux_defined = false;
  std::string hypotheses;                     // which theorem's hypotheses hold
  bool inconclusive = false;
  bool verdict = false;
  std::string note;
  PicardOutcome outcome_plain = PicardOutcome::MaxIterations;
  PicardOutcome outcome_perturbed = PicardOutcome::MaxIterations;
};

struct ProbeOptions {
  int max_iter = 40;
  double tol = 1e-12;
  int early_points = 6;     // smallest grid times used for the exponent fit
  double aux_level = 0.5;   // position of s/n + 1/q~ inside its admissible window
  SolverOptions solver;
};

/// Solves twice, the second time with the zeroth iterate shifted by
/// `perturbation`, and compares the two limits.
DifferenceReport uniqueness_probe(const RadialFunction& u0, const ProblemParams& params, double T,
                                  const RadialFunction& perturbation, const QuadratureSpec& quad,
                                  const ProbeOptions& opt = {});

/// Least-squares slope of log y against log x.
double loglog_slope(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace herz
