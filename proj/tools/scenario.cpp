#include "scenario.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iostream>
#include <numbers>
#include <sstream>

#include <Eigen/Eigenvalues>

#include "redstates/classical.hpp"
#include "redstates/decoherence.hpp"
#include "redstates/measurement.hpp"
#include "redstates/random.hpp"
#include "redstates/reduction.hpp"

namespace redstates::scenario {

namespace {

using nlohmann::ordered_json;
using cplx = std::complex<double>;

const std::vector<std::string> kScenarios = {
    "consecutive", "contrast", "decohere", "recohere", "coarse-grain", "classical", "verify"};

const std::vector<std::string> kReservedKeys = {"scenario", "seed", "out", "format", "tolerance"};

std::string trim(const std::string& s) {
  const auto begin = s.find_first_not_of(" \t\r\n");
  if (begin == std::string::npos) return "";
  const auto end = s.find_last_not_of(" \t\r\n");
  return s.substr(begin, end - begin + 1);
}

void check_known_keys(const ordered_json& params, const std::vector<std::string>& known,
                      const std::string& scenario) {
  for (const auto& [key, value] : params.items()) {
    if (std::find(kReservedKeys.begin(), kReservedKeys.end(), key) != kReservedKeys.end())
      continue;
    if (std::find(known.begin(), known.end(), key) == known.end())
      throw config_error("unknown key '" + key + "' for scenario '" + scenario + "'");
  }
}

cplx parse_amplitude(const ordered_json& value, const std::string& key) {
  if (value.is_number()) return {value.get<double>(), 0.0};
  if (value.is_array() && value.size() == 2 && value[0].is_number() && value[1].is_number())
    return {value[0].get<double>(), value[1].get<double>()};
  throw config_error("key '" + key + "' must be a number or a [re, im] pair");
}

// Resolves the system amplitude pair, defaulting to (1, 1)/sqrt(2); the pair
// must be normalized within 1e-8 and is renormalized exactly before use.
std::pair<cplx, cplx> resolve_amplitudes(const ordered_json& params) {
  const double inv_sqrt2 = 1.0 / std::numbers::sqrt2;
  cplx c_plus{inv_sqrt2, 0.0}, c_minus{inv_sqrt2, 0.0};
  if (params.contains("c_plus")) c_plus = parse_amplitude(params["c_plus"], "c_plus");
  if (params.contains("c_minus")) c_minus = parse_amplitude(params["c_minus"], "c_minus");
  const double norm = std::sqrt(std::norm(c_plus) + std::norm(c_minus));
  if (std::abs(norm - 1.0) > 1e-8)
    throw config_error("amplitudes (c_plus, c_minus) must be normalized");
  return {c_plus / norm, c_minus / norm};
}

ordered_json amplitude_json(cplx c) { return ordered_json::array({c.real(), c.imag()}); }

std::vector<double> linspace(double t_max, int samples) {
  std::vector<double> out(static_cast<std::size_t>(samples));
  for (int i = 0; i < samples; ++i)
    out[static_cast<std::size_t>(i)] =
        t_max * static_cast<double>(i) / static_cast<double>(samples - 1);
  return out;
}

std::uint64_t require_seed(const ScenarioConfig& config) {
  if (!config.seed) throw config_error("seed required for scenario '" + config.scenario + "'");
  return *config.seed;
}

double get_number(const ordered_json& params, const std::string& key, double fallback) {
  if (!params.contains(key)) return fallback;
  if (!params[key].is_number()) throw config_error("key '" + key + "' must be a number");
  return params[key].get<double>();
}

int get_int(const ordered_json& params, const std::string& key, int fallback) {
  if (!params.contains(key)) return fallback;
  if (!params[key].is_number_integer()) throw config_error("key '" + key + "' must be an integer");
  return params[key].get<int>();
}

std::string get_string(const ordered_json& params, const std::string& key,
                       const std::string& fallback) {
  if (!params.contains(key)) return fallback;
  if (!params[key].is_string()) throw config_error("key '" + key + "' must be a string");
  return params[key].get<std::string>();
}

// --------------------------------------------------------------------------
// consecutive: two premeasurements on one qubit, probabilities from the
// uncollapsed state of system + both pointers.
// --------------------------------------------------------------------------

ScenarioReport run_consecutive(const ScenarioConfig& config) {
  check_known_keys(config.parameters, {"c_plus", "c_minus", "second_axis"}, config.scenario);
  auto [c_plus, c_minus] = resolve_amplitudes(config.parameters);
  const std::string axis = get_string(config.parameters, "second_axis", "x");
  if (axis != "x" && axis != "z") throw config_error("second_axis must be 'x' or 'z'");

  const SpaceSpec system = SpaceSpec::single("S", 2);
  Eigen::Vector2cd amp;
  amp << c_plus, c_minus;
  MeasurementChain chain{StateVector(system, amp)};

  const LinOp sz(system, pauli_z());
  const Eigen::Matrix2cd z_basis = Eigen::Matrix2cd::Identity();
  chain = premeasure(chain, sz, z_basis, PointerFactor::standard("Pz", 2));

  std::string second_label;
  if (axis == "x") {
    auto [x_plus, x_minus] = spin_basis_rotation(z_basis.col(0), z_basis.col(1));
    Eigen::Matrix2cd x_basis;
    x_basis.col(0) = x_plus;
    x_basis.col(1) = x_minus;
    second_label = "Px";
    chain = premeasure(chain, LinOp(system, pauli_x()), x_basis,
                       PointerFactor::standard(second_label, 2));
  } else {
    second_label = "Pz2";
    chain = premeasure(chain, sz, z_basis, PointerFactor::standard(second_label, 2));
  }
  const std::string first_tag = "z";
  const std::string second_tag = axis == "x" ? "x" : "z(2)";
  const auto sign = [](int outcome) { return outcome == 0 ? "+" : "-"; };

  ScenarioReport report;
  report.scenario = config.scenario;
  report.parameters = {{"c_plus", amplitude_json(c_plus)},
                       {"c_minus", amplitude_json(c_minus)},
                       {"second_axis", axis},
                       {"tolerance", config.tolerance}};

  Table& probs = report.add_table("probabilities", {"event", "probability", "provenance"});
  const std::string prov = "fundamental";

  std::vector<double> first_marginal(2), joint(4);
  for (int k = 0; k < 2; ++k) {
    first_marginal[k] = joint_probability(chain, {{"Pz", k}});
    probs.rows.push_back(
        {Cell{"pr(p" + std::string(sign(k)) + first_tag + ")"}, Cell{first_marginal[k]}, Cell{prov}});
  }
  for (int l = 0; l < 2; ++l)
    for (int k = 0; k < 2; ++k) {
      joint[static_cast<std::size_t>(l * 2 + k)] =
          joint_probability(chain, {{second_label, l}, {"Pz", k}});
      probs.rows.push_back({Cell{"pr(p" + std::string(sign(l)) + second_tag + " & p" +
                                 std::string(sign(k)) + first_tag + ")"},
                            Cell{joint[static_cast<std::size_t>(l * 2 + k)]}, Cell{prov}});
    }
  std::vector<double> conditional(4, 0.0);
  for (int k = 0; k < 2; ++k) {
    if (first_marginal[k] <= 1e-15) continue;
    for (int l = 0; l < 2; ++l) {
      conditional[static_cast<std::size_t>(l * 2 + k)] =
          conditional_probability(chain, {second_label, l}, {{"Pz", k}});
      probs.rows.push_back({Cell{"pr(p" + std::string(sign(l)) + second_tag + " | p" +
                                 std::string(sign(k)) + first_tag + ")"},
                            Cell{conditional[static_cast<std::size_t>(l * 2 + k)]}, Cell{prov}});
    }
  }

  const double p_plus = std::norm(c_plus);
  report.add_check("born_rule_first_pointer", std::abs(first_marginal[0] - p_plus) < config.tolerance,
                   std::abs(first_marginal[0] - p_plus));
  const double norm_first = std::abs(first_marginal[0] + first_marginal[1] - 1.0);
  report.add_check("first_marginal_normalized", norm_first < config.tolerance, norm_first);
  if (axis == "x") {
    const double r22 = std::abs(joint[0] - p_plus / 2.0);
    report.add_check("joint_plus_plus_is_half_weight", r22 < config.tolerance, r22);
    if (p_plus > 1e-12 && p_plus < 1.0 - 1e-12) {
      const double rc = std::abs(conditional[0] - 0.5);
      report.add_check("conditional_is_half", rc < config.tolerance, rc);
      const double rn = std::abs(conditional[0] + conditional[2] - 1.0);
      report.add_check("conditional_normalized", rn < config.tolerance, rn);
    }
  } else {
    if (p_plus > 1e-12) {
      const double ra = std::abs(conditional[0] - 1.0);
      report.add_check("repeat_agreement", ra < config.tolerance, ra);
      const double re = std::abs(conditional[2]);
      report.add_check("repeat_exclusion", re < config.tolerance, re);
    }
  }
  return report;
}

// --------------------------------------------------------------------------
// contrast: the reduced-state predictor for a repeated measurement next to
// what the uncollapsed chain actually gives.
// --------------------------------------------------------------------------

ScenarioReport run_contrast(const ScenarioConfig& config) {
  check_known_keys(config.parameters, {"p_plus", "c_plus", "c_minus"}, config.scenario);
  cplx c_plus, c_minus;
  if (config.parameters.contains("p_plus")) {
    if (config.parameters.contains("c_plus") || config.parameters.contains("c_minus"))
      throw config_error("give either p_plus or the amplitude pair, not both");
    const double p = get_number(config.parameters, "p_plus", 0.36);
    if (p < 0.0 || p > 1.0) throw config_error("p_plus must lie in [0, 1]");
    c_plus = std::sqrt(p);
    c_minus = std::sqrt(1.0 - p);
  } else if (config.parameters.contains("c_plus") || config.parameters.contains("c_minus")) {
    std::tie(c_plus, c_minus) = resolve_amplitudes(config.parameters);
  } else {
    c_plus = std::sqrt(0.36);
    c_minus = std::sqrt(0.64);
  }

  const SpaceSpec system = SpaceSpec::single("S", 2);
  Eigen::Vector2cd amp;
  amp << c_plus, c_minus;
  MeasurementChain chain{StateVector(system, amp)};
  chain = premeasure(chain, LinOp(system, pauli_z()), Eigen::Matrix2cd::Identity(),
                     PointerFactor::standard("Pz", 2));
  const ReducedPredictorReport predictor = reduced_chain_predictor(chain);

  ScenarioReport report;
  report.scenario = config.scenario;
  report.parameters = {{"c_plus", amplitude_json(c_plus)},
                       {"c_minus", amplitude_json(c_minus)},
                       {"p_plus", std::norm(c_plus)},
                       {"tolerance", config.tolerance}};

  const auto sign = [](int outcome) { return std::string(outcome == 0 ? "+" : "-"); };
  Table& joint = report.add_table("joint", {"first", "second", "probability", "pipeline", "provenance"});
  for (int k = 0; k < predictor.outcomes; ++k)
    for (int l = 0; l < predictor.outcomes; ++l)
      joint.rows.push_back({Cell{sign(k)}, Cell{sign(l)},
                            Cell{predictor.true_joint[static_cast<std::size_t>(k)]
                                                     [static_cast<std::size_t>(l)]},
                            Cell{std::string("chain")}, Cell{std::string("fundamental")}});
  for (int k = 0; k < predictor.outcomes; ++k)
    for (int l = 0; l < predictor.outcomes; ++l)
      joint.rows.push_back({Cell{sign(k)}, Cell{sign(l)},
                            Cell{predictor.flawed_joint[static_cast<std::size_t>(k)]
                                                       [static_cast<std::size_t>(l)]},
                            Cell{std::string("reduced-predictor")}, Cell{std::string("reduced")}});

  Table& marginals =
      report.add_table("marginals", {"outcome", "first", "second_chain", "second_predictor"});
  for (int l = 0; l < predictor.outcomes; ++l) {
    double second_true = 0.0;
    for (int k = 0; k < predictor.outcomes; ++k)
      second_true += predictor.true_joint[static_cast<std::size_t>(k)][static_cast<std::size_t>(l)];
    marginals.rows.push_back({Cell{sign(l)},
                              Cell{predictor.first_marginals[static_cast<std::size_t>(l)]},
                              Cell{second_true},
                              Cell{predictor.flawed_second_marginals[static_cast<std::size_t>(l)]}});
  }

  Table& summary = report.add_table("summary", {"quantity", "value"});
  summary.rows.push_back({Cell{std::string("max_discrepancy")}, Cell{predictor.max_discrepancy}});
  summary.rows.push_back(
      {Cell{std::string("correlations_cancelled")}, Cell{std::string(predictor.disagrees ? "yes" : "no")}});

  const double p = std::norm(c_plus);
  const double exclusion = predictor.true_joint[0][1] + predictor.true_joint[1][0];
  report.add_check("chain_repeat_exclusion", std::abs(exclusion) < config.tolerance,
                   std::abs(exclusion));
  double marg_residual = 0.0;
  for (int l = 0; l < predictor.outcomes; ++l) {
    double second_true = 0.0;
    for (int k = 0; k < predictor.outcomes; ++k)
      second_true += predictor.true_joint[static_cast<std::size_t>(k)][static_cast<std::size_t>(l)];
    marg_residual = std::max(
        marg_residual,
        std::abs(second_true - predictor.flawed_second_marginals[static_cast<std::size_t>(l)]));
  }
  report.add_check("marginals_agree", marg_residual < config.tolerance, marg_residual);
  const double factorized = std::abs(predictor.flawed_joint[0][1] - p * (1.0 - p));
  report.add_check("predictor_joint_factorizes", factorized < config.tolerance, factorized);
  const bool expect_discrepancy = std::min(p, 1.0 - p) > 1e-12;
  report.add_check("discrepancy_flagged", predictor.disagrees == expect_discrepancy,
                   predictor.max_discrepancy);
  return report;
}

// --------------------------------------------------------------------------
// decohere: spin-bath trajectory of the reduced system state.
// --------------------------------------------------------------------------

ScenarioReport run_decohere(const ScenarioConfig& config) {
  check_known_keys(config.parameters,
                   {"bath_size", "couplings", "coupling_range", "c_plus", "c_minus", "t_max",
                    "samples", "threshold", "convergence_epsilon", "window_fraction",
                    "system_label"},
                   config.scenario);
  const int bath_size = get_int(config.parameters, "bath_size", 8);
  auto [c_plus, c_minus] = resolve_amplitudes(config.parameters);
  const double t_max = get_number(config.parameters, "t_max", 20.0);
  const int samples = get_int(config.parameters, "samples", 100);
  if (samples < 2) throw config_error("samples must be at least 2");
  if (!(t_max > 0.0)) throw config_error("t_max must be positive");
  const double threshold = get_number(config.parameters, "threshold", std::exp(-1.0));
  const double epsilon = get_number(config.parameters, "convergence_epsilon", 0.05);
  const double window = get_number(config.parameters, "window_fraction", 0.5);
  const std::string system_label = get_string(config.parameters, "system_label", "S");

  std::vector<double> couplings;
  double range_lo = 0.5, range_hi = 1.5;
  std::optional<std::uint64_t> used_seed;
  if (config.parameters.contains("couplings")) {
    if (!config.parameters["couplings"].is_array())
      throw config_error("couplings must be an array of numbers");
    for (const auto& v : config.parameters["couplings"]) {
      if (!v.is_number()) throw config_error("couplings must be an array of numbers");
      couplings.push_back(v.get<double>());
    }
  } else {
    if (config.parameters.contains("coupling_range")) {
      const auto& r = config.parameters["coupling_range"];
      if (!r.is_array() || r.size() != 2 || !r[0].is_number() || !r[1].is_number())
        throw config_error("coupling_range must be [lo, hi]");
      range_lo = r[0].get<double>();
      range_hi = r[1].get<double>();
    }
    used_seed = require_seed(config);
    Rng rng(*used_seed);
    couplings = random_couplings(bath_size, range_lo, range_hi, rng);
  }

  const SpinBathModel model = build_spin_bath(bath_size, couplings);
  if (!model.space().has_label(system_label))
    throw config_error("system_label '" + system_label + "' is not a factor of the model");
  const std::vector<double> times = linspace(t_max, samples);

  ScenarioReport report;
  report.scenario = config.scenario;
  report.parameters = {{"bath_size", bath_size},
                       {"couplings", couplings},
                       {"c_plus", amplitude_json(c_plus)},
                       {"c_minus", amplitude_json(c_minus)},
                       {"t_max", t_max},
                       {"samples", samples},
                       {"threshold", threshold},
                       {"convergence_epsilon", epsilon},
                       {"window_fraction", window},
                       {"system_label", system_label},
                       {"tolerance", config.tolerance}};
  if (used_seed) report.parameters["seed"] = *used_seed;

  if (system_label == "S") {
    const DecoherenceTrajectory traj = run_trajectory(model, c_plus, c_minus, times);

    const double weight = std::abs(c_plus * c_minus);
    std::vector<double> closed_form(times.size());
    for (std::size_t i = 0; i < times.size(); ++i) {
      double product = 1.0;
      for (double g : couplings) product *= std::abs(std::cos(g * times[i]));
      closed_form[i] = weight * product;
    }

    Table& table = report.add_table(
        "trajectory", {"t", "offdiag", "closed_form", "reduced_purity", "full_purity"});
    for (std::size_t i = 0; i < times.size(); ++i)
      table.rows.push_back({Cell{times[i]}, Cell{traj.offdiag_magnitudes[i]}, Cell{closed_form[i]},
                            Cell{traj.purity_series[i]}, Cell{traj.full_purity[i]}});

    Table& summary = report.add_table("summary", {"quantity", "value"});
    const std::optional<double> t_dec = decoherence_time(traj, threshold);
    summary.rows.push_back({Cell{std::string("decoherence_time")},
                            t_dec ? Cell{*t_dec} : Cell{std::string("not reached")}});
    summary.rows.push_back({Cell{std::string("threshold_fraction")}, Cell{threshold}});

    const SpaceSpec system = model.system_space();
    const ConvergenceReport convergence = expectation_convergence(
        traj,
        {{"sigma_x", LinOp(system, pauli_x())}, {"sigma_z", LinOp(system, pauli_z())}},
        epsilon, window);
    Table& conv = report.add_table(
        "convergence", {"observable", "initial", "late_mean", "fluctuation", "converged"});
    for (const ObservableConvergence& e : convergence.entries)
      conv.rows.push_back({Cell{e.name}, Cell{e.initial_value}, Cell{e.late_mean},
                           Cell{e.fluctuation}, Cell{std::string(e.converged ? "yes" : "no")}});

    double closed_residual = 0.0, purity_residual = 0.0, diag_residual = 0.0;
    const double rho00_0 = traj.reduced_states.front().matrix()(0, 0).real();
    for (std::size_t i = 0; i < times.size(); ++i) {
      closed_residual = std::max(closed_residual,
                                 std::abs(traj.offdiag_magnitudes[i] - closed_form[i]));
      purity_residual = std::max(purity_residual, std::abs(traj.full_purity[i] - 1.0));
      diag_residual = std::max(
          diag_residual, std::abs(traj.reduced_states[i].matrix()(0, 0).real() - rho00_0));
    }
    report.add_check("closed_form_agreement", closed_residual < config.tolerance, closed_residual);
    report.add_check("full_state_purity_unit", purity_residual < 1e-9, purity_residual);
    report.add_check("reduced_diagonals_constant", diag_residual < config.tolerance, diag_residual);
  } else {
    // Decoherence is relative to the partition: trace everything except the
    // chosen factor. The closed-form check applies only to the default split.
    Eigen::Vector2cd sys;
    sys << c_plus, c_minus;
    const StateVector psi0 =
        tensor_product(StateVector(model.system_space(), sys), model.bath_state());
    EvolutionPlan plan(model.hamiltonian());
    const std::vector<std::string> traced = model.space().complement({system_label});

    Table& table = report.add_table("trajectory", {"t", "offdiag", "reduced_purity", "full_purity"});
    double purity_residual = 0.0, trace_residual = 0.0;
    for (double t : times) {
      const StateVector psi(model.space(), plan.apply(psi0.amplitudes(), t));
      const DensityOperator reduced = partial_trace(psi, traced);
      const double norm2 = psi.amplitudes().squaredNorm();
      table.rows.push_back({Cell{t}, Cell{std::abs(reduced.matrix()(0, 1))},
                            Cell{purity(reduced)}, Cell{norm2 * norm2}});
      purity_residual = std::max(purity_residual, std::abs(norm2 * norm2 - 1.0));
      trace_residual =
          std::max(trace_residual, std::abs(reduced.matrix().trace() - cplx(1.0, 0.0)));
    }
    report.add_check("full_state_purity_unit", purity_residual < 1e-9, purity_residual);
    report.add_check("reduced_trace_unit", trace_residual < config.tolerance, trace_residual);
  }
  return report;
}

// --------------------------------------------------------------------------
// recohere: commensurate couplings, revival of the off-diagonal, and the
// matrix-equal proper mixture that never revives.
// --------------------------------------------------------------------------

ScenarioReport run_recohere(const ScenarioConfig& config) {
  check_known_keys(config.parameters, {"bath_size", "coupling", "c_plus", "c_minus", "samples"},
                   config.scenario);
  const int bath_size = get_int(config.parameters, "bath_size", 4);
  const double g = get_number(config.parameters, "coupling", 1.0);
  auto [c_plus, c_minus] = resolve_amplitudes(config.parameters);
  const int samples = get_int(config.parameters, "samples", 65);
  if (samples < 3) throw config_error("samples must be at least 3");

  const SpinBathModel model =
      build_spin_bath(bath_size, std::vector<double>(static_cast<std::size_t>(bath_size), g));
  const double period = g != 0.0 ? 2.0 * std::numbers::pi / std::abs(g) : 1.0;
  const std::vector<double> times = linspace(period, samples);
  const DecoherenceTrajectory traj = run_trajectory(model, c_plus, c_minus, times);
  const RevivalReport revival = recoherence_check(model, traj);

  ScenarioReport report;
  report.scenario = config.scenario;
  report.parameters = {{"bath_size", bath_size},
                       {"coupling", g},
                       {"c_plus", amplitude_json(c_plus)},
                       {"c_minus", amplitude_json(c_minus)},
                       {"samples", samples},
                       {"tolerance", config.tolerance}};

  Table& table = report.add_table(
      "trajectory", {"t", "offdiag", "mixture_offdiag", "reduced_purity", "full_purity"});
  for (std::size_t i = 0; i < times.size(); ++i)
    table.rows.push_back({Cell{times[i]}, Cell{traj.offdiag_magnitudes[i]},
                          Cell{revival.mixture_coherences[i]}, Cell{traj.purity_series[i]},
                          Cell{traj.full_purity[i]}});

  Table& summary = report.add_table("summary", {"quantity", "value", "provenance"});
  summary.rows.push_back(
      {Cell{std::string("revival_time")}, Cell{revival.revival_time}, Cell{std::string("reduced")}});
  summary.rows.push_back({Cell{std::string("initial_coherence")}, Cell{revival.initial_coherence},
                          Cell{std::string("reduced")}});
  summary.rows.push_back({Cell{std::string("revived_coherence")}, Cell{revival.revived_coherence},
                          Cell{std::string("reduced")}});
  summary.rows.push_back({Cell{std::string("mixture_max_coherence")},
                          Cell{revival.mixture_max_coherence},
                          Cell{std::string("proper-mixture")}});

  report.add_check("coherence_revives", revival.revived,
                   std::abs(revival.revived_coherence - revival.initial_coherence));
  report.add_check("proper_mixture_never_revives", revival.mixture_stays_diagonal,
                   revival.mixture_max_coherence);
  if (g != 0.0) {
    // One-period translates of a few sample times reproduce the trajectory.
    std::vector<double> shifted_times, base_values;
    for (std::size_t idx : {std::size_t{0}, times.size() / 3, (2 * times.size()) / 3}) {
      shifted_times.push_back(times[idx] + period);
      base_values.push_back(traj.offdiag_magnitudes[idx]);
    }
    const DecoherenceTrajectory shifted = run_trajectory(model, c_plus, c_minus, shifted_times);
    double residual = 0.0;
    for (std::size_t i = 0; i < shifted_times.size(); ++i)
      residual = std::max(residual,
                          std::abs(shifted.offdiag_magnitudes[i] - base_values[i]));
    report.add_check("trajectory_periodic", residual < 1e-8, residual);
  }
  return report;
}

// --------------------------------------------------------------------------
// coarse-grain: projector residuals on seeded random states.
// --------------------------------------------------------------------------

ScenarioReport run_coarse_grain(const ScenarioConfig& config) {
  check_known_keys(config.parameters, {"dims", "traced_index", "count"}, config.scenario);
  std::vector<int> dims = {2, 3};
  if (config.parameters.contains("dims")) {
    dims.clear();
    if (!config.parameters["dims"].is_array())
      throw config_error("dims must be an array of integers");
    for (const auto& v : config.parameters["dims"]) {
      if (!v.is_number_integer()) throw config_error("dims must be an array of integers");
      dims.push_back(v.get<int>());
    }
  }
  if (dims.size() < 2) throw config_error("dims must list at least two factors");
  const int traced_index = get_int(config.parameters, "traced_index",
                                   static_cast<int>(dims.size()) - 1);
  if (traced_index < 0 || traced_index >= static_cast<int>(dims.size()))
    throw config_error("traced_index out of range");
  const int count = get_int(config.parameters, "count", 200);
  if (count < 1) throw config_error("count must be positive");
  const std::uint64_t seed = require_seed(config);

  std::vector<Factor> factors;
  for (std::size_t i = 0; i < dims.size(); ++i)
    factors.push_back({"F" + std::to_string(i + 1), dims[i]});
  const SpaceSpec space{factors};
  const std::vector<std::string> traced = {factors[static_cast<std::size_t>(traced_index)].label};
  const std::vector<std::string> retained = space.complement(traced);
  const SpaceSpec retained_space = space.subspace(retained);
  const std::vector<LinOp> basis = hermitian_basis(retained_space);

  ScenarioReport report;
  report.scenario = config.scenario;
  report.parameters = {{"dims", dims},     {"traced_index", traced_index},
                       {"count", count},   {"seed", seed},
                       {"tolerance", config.tolerance}};

  Rng rng(seed);
  Table& table = report.add_table(
      "residuals", {"state", "eq5_definition", "eq27_expectation", "eq29_idempotent",
                    "eq30_recovery"});
  double max5 = 0.0, max27 = 0.0, max29 = 0.0, max30 = 0.0;
  for (int i = 0; i < count; ++i) {
    const DensityOperator rho = random_density(space, rng);
    const DensityOperator reduced = partial_trace(rho, traced);
    const CoarseGrainedState cg = coarse_grain(rho, traced);

    const double r5 = verify_reduced_definition(rho, reduced, retained);
    double r27 = 0.0;
    for (const LinOp& o1 : basis)
      r27 = std::max(r27, coarse_grained_expectation_check(rho, o1, traced));
    const double r29 =
        frobenius_distance(coarse_grain(cg.rho_cg, traced).rho_cg.op(), cg.rho_cg.op());
    const double r30 = frobenius_distance(recover_reduced(cg).op(), reduced.op());

    table.rows.push_back(
        {Cell{static_cast<double>(i)}, Cell{r5}, Cell{r27}, Cell{r29}, Cell{r30}});
    max5 = std::max(max5, r5);
    max27 = std::max(max27, r27);
    max29 = std::max(max29, r29);
    max30 = std::max(max30, r30);
  }

  Table& prov = report.add_table("provenance", {"quantity", "provenance"});
  prov.rows.push_back({Cell{std::string("rho")}, Cell{std::string("fundamental")}});
  prov.rows.push_back({Cell{std::string("rho_r")}, Cell{std::string("reduced")}});
  prov.rows.push_back({Cell{std::string("rho_cg")}, Cell{std::string("coarse-grained")}});

  report.add_check("eq5_definition", max5 < config.tolerance, max5);
  report.add_check("eq27_expectation", max27 < config.tolerance, max27);
  report.add_check("eq29_idempotent", max29 < 1e-12, max29);
  report.add_check("eq30_recovery", max30 < 1e-12, max30);
  return report;
}

// --------------------------------------------------------------------------
// classical: baker-map mixing against block coarse-graining.
// --------------------------------------------------------------------------

ScenarioReport run_classical(const ScenarioConfig& config) {
  check_known_keys(config.parameters, {"resolution", "coarse", "steps", "initial"},
                   config.scenario);
  const int n = get_int(config.parameters, "resolution", 256);
  const int coarse = get_int(config.parameters, "coarse", 4);
  const int steps = get_int(config.parameters, "steps", 10);
  const std::string initial = get_string(config.parameters, "initial", "left-half");
  if (n < 2 || (n & (n - 1)) != 0)
    throw config_error("resolution must be a power of two (exact-cell mode)");
  if (coarse < 1 || coarse >= n || n % coarse != 0)
    throw config_error("coarse must divide the resolution and be strictly coarser");
  if (steps < 0) throw config_error("steps must be nonnegative");

  DensityField field = DensityField::uniform(n);
  std::optional<std::uint64_t> used_seed;
  if (initial == "left-half") {
    field = DensityField::left_half(n);
  } else if (initial == "uniform") {
    field = DensityField::uniform(n);
  } else if (initial == "random") {
    used_seed = require_seed(config);
    Rng rng(*used_seed);
    std::vector<double> values(static_cast<std::size_t>(n) * static_cast<std::size_t>(n));
    double total = 0.0;
    for (double& v : values) {
      v = rng.uniform();
      total += v;
    }
    const double scale = static_cast<double>(n) * static_cast<double>(n) / total;
    for (double& v : values) v *= scale;
    field = DensityField(n, std::move(values));
  } else {
    throw config_error("initial must be 'left-half', 'uniform' or 'random'");
  }

  const EquilibriumSeries series = equilibrium_approach(field, {coarse}, steps);

  ScenarioReport report;
  report.scenario = config.scenario;
  report.parameters = {{"resolution", n},
                       {"coarse", coarse},
                       {"steps", steps},
                       {"initial", initial},
                       {"tolerance", config.tolerance}};
  if (used_seed) report.parameters["seed"] = *used_seed;

  Table& table =
      report.add_table("evolution", {"step", "coarse_l1", "fine_l1", "mass", "occupied"});
  for (std::size_t i = 0; i < series.coarse_l1.size(); ++i)
    table.rows.push_back({Cell{static_cast<double>(i)}, Cell{series.coarse_l1[i]},
                          Cell{series.fine_l1[i]}, Cell{series.mass[i]},
                          Cell{static_cast<double>(series.occupied[i])}});

  double mass_residual = 0.0;
  int support_deviation = 0;
  for (std::size_t i = 0; i < series.mass.size(); ++i) {
    mass_residual = std::max(mass_residual, std::abs(series.mass[i] - 1.0));
    support_deviation =
        std::max(support_deviation, std::abs(series.occupied[i] - series.occupied.front()));
  }
  report.add_check("mass_conserved", mass_residual < 1e-10, mass_residual);
  report.add_check("support_invariant", support_deviation == 0,
                   static_cast<double>(support_deviation));
  const std::size_t window = std::min<std::size_t>(series.coarse_l1.size(), 11);
  double best = series.coarse_l1.front();
  for (std::size_t i = 0; i < window; ++i) best = std::min(best, series.coarse_l1[i]);
  report.add_check("coarse_equilibrium_within_10_steps", best < 0.01, best);
  return report;
}

// --------------------------------------------------------------------------
// verify: reduction-layer residual families on seeded random states.
// --------------------------------------------------------------------------

ScenarioReport run_verify(const ScenarioConfig& config) {
  check_known_keys(config.parameters, {"dims", "count"}, config.scenario);
  std::vector<int> dims = {2, 3};
  if (config.parameters.contains("dims")) {
    dims.clear();
    if (!config.parameters["dims"].is_array())
      throw config_error("dims must be an array of integers");
    for (const auto& v : config.parameters["dims"]) {
      if (!v.is_number_integer()) throw config_error("dims must be an array of integers");
      dims.push_back(v.get<int>());
    }
  }
  if (dims.size() < 2) throw config_error("dims must list at least two factors");
  const int count = get_int(config.parameters, "count", 50);
  if (count < 1) throw config_error("count must be positive");
  const std::uint64_t seed = require_seed(config);

  std::vector<Factor> factors;
  for (std::size_t i = 0; i < dims.size(); ++i)
    factors.push_back({"F" + std::to_string(i + 1), dims[i]});
  const SpaceSpec space{factors};
  const std::vector<std::string> traced = {factors.back().label};
  const std::vector<std::string> retained = space.complement(traced);
  const std::vector<LinOp> basis = hermitian_basis(space.subspace(retained));

  Rng rng(seed);
  double max5 = 0.0, max27 = 0.0, max29 = 0.0, max30 = 0.0;
  double max_trace = 0.0, max_herm = 0.0, max_psd = 0.0;
  for (int i = 0; i < count; ++i) {
    const DensityOperator rho = random_density(space, rng);
    const DensityOperator reduced = partial_trace(rho, traced);
    const CoarseGrainedState cg = coarse_grain(rho, traced);

    max5 = std::max(max5, verify_reduced_definition(rho, reduced, retained));
    for (const LinOp& o1 : basis)
      max27 = std::max(max27, coarse_grained_expectation_check(rho, o1, traced));
    max29 = std::max(max29,
                     frobenius_distance(coarse_grain(cg.rho_cg, traced).rho_cg.op(), cg.rho_cg.op()));
    max30 = std::max(max30, frobenius_distance(recover_reduced(cg).op(), reduced.op()));

    max_trace = std::max(max_trace, std::abs(reduced.matrix().trace() - cplx(1.0, 0.0)));
    max_herm = std::max(max_herm, (reduced.matrix() - reduced.matrix().adjoint()).norm());
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(reduced.matrix(), Eigen::EigenvaluesOnly);
    max_psd = std::max(max_psd, std::max(0.0, -es.eigenvalues().minCoeff()));
  }

  ScenarioReport report;
  report.scenario = config.scenario;
  report.parameters = {{"dims", dims}, {"count", count}, {"seed", seed},
                       {"tolerance", config.tolerance}};

  struct Family {
    const char* name;
    double value;
    double threshold;
  };
  const std::vector<Family> families = {
      {"eq5_definition", max5, config.tolerance},
      {"eq27_expectation", max27, config.tolerance},
      {"eq29_idempotent", max29, 1e-12},
      {"eq30_recovery", max30, 1e-12},
      {"reduced_trace_unit", max_trace, config.tolerance},
      {"reduced_hermitian", max_herm, config.tolerance},
      {"reduced_psd", max_psd, config.tolerance},
  };
  Table& table = report.add_table("residuals", {"family", "max_residual", "threshold", "status"});
  for (const Family& f : families) {
    const bool pass = f.value < f.threshold;
    table.rows.push_back({Cell{std::string(f.name)}, Cell{f.value}, Cell{f.threshold},
                          Cell{std::string(pass ? "pass" : "fail")}});
    report.add_check(f.name, pass, f.value);
  }
  return report;
}

}  // namespace

const std::vector<std::string>& scenario_names() { return kScenarios; }

ordered_json parse_config_text(const std::string& text) {
  const std::string body = trim(text);
  if (body.empty()) return ordered_json::object();
  if (body.front() == '{') {
    try {
      ordered_json j = ordered_json::parse(body);
      if (!j.is_object()) throw config_error("config must be a JSON object");
      return j;
    } catch (const nlohmann::json::parse_error& e) {
      throw config_error(std::string("config parse error: ") + e.what());
    }
  }
  ordered_json out = ordered_json::object();
  std::istringstream stream(body);
  std::string line;
  while (std::getline(stream, line)) {
    const std::string entry = trim(line);
    if (entry.empty() || entry.front() == '#') continue;
    const auto eq = entry.find('=');
    if (eq == std::string::npos)
      throw config_error("config parse error: expected key=value, got '" + entry + "'");
    const std::string key = trim(entry.substr(0, eq));
    const std::string value = trim(entry.substr(eq + 1));
    if (key.empty()) throw config_error("config parse error: empty key");
    try {
      out[key] = ordered_json::parse(value);
    } catch (const nlohmann::json::parse_error&) {
      out[key] = value;  // bare string
    }
  }
  return out;
}

ordered_json parse_config_file(const std::string& path) {
  std::string text;
  if (path == "-") {
    std::ostringstream buffer;
    buffer << std::cin.rdbuf();
    text = buffer.str();
  } else {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw config_error("cannot read config file '" + path + "'");
    std::ostringstream buffer;
    buffer << in.rdbuf();
    text = buffer.str();
  }
  return parse_config_text(text);
}

ScenarioConfig build_config(const std::string& scenario, ordered_json raw,
                            const std::optional<std::string>& out_override,
                            const std::optional<std::string>& format_override,
                            const std::optional<std::uint64_t>& seed_override,
                            const std::optional<double>& tolerance_override) {
  if (std::find(kScenarios.begin(), kScenarios.end(), scenario) == kScenarios.end())
    throw config_error("unknown scenario '" + scenario + "'");
  ScenarioConfig config;
  config.scenario = scenario;
  if (raw.contains("scenario")) {
    if (!raw["scenario"].is_string() || raw["scenario"].get<std::string>() != scenario)
      throw config_error("config scenario does not match the subcommand");
  }
  if (raw.contains("out")) {
    if (!raw["out"].is_string()) throw config_error("key 'out' must be a string");
    config.out_path = raw["out"].get<std::string>();
  }
  if (raw.contains("format")) {
    if (!raw["format"].is_string()) throw config_error("key 'format' must be a string");
    config.format = raw["format"].get<std::string>();
  }
  if (raw.contains("seed")) {
    if (!raw["seed"].is_number_unsigned() && !raw["seed"].is_number_integer())
      throw config_error("key 'seed' must be an integer");
    config.seed = raw["seed"].get<std::uint64_t>();
  }
  if (raw.contains("tolerance")) {
    if (!raw["tolerance"].is_number()) throw config_error("key 'tolerance' must be a number");
    config.tolerance = raw["tolerance"].get<double>();
  }
  if (out_override) config.out_path = *out_override;
  if (format_override) config.format = *format_override;
  if (seed_override) config.seed = *seed_override;
  if (tolerance_override) config.tolerance = *tolerance_override;
  if (config.format != "csv" && config.format != "json")
    throw config_error("format must be 'csv' or 'json'");
  if (!(config.tolerance > 0.0)) throw config_error("tolerance must be positive");

  for (const std::string& key : kReservedKeys) raw.erase(key);
  config.parameters = std::move(raw);
  return config;
}

ScenarioReport run(const ScenarioConfig& config) {
  if (config.scenario == "consecutive") return run_consecutive(config);
  if (config.scenario == "contrast") return run_contrast(config);
  if (config.scenario == "decohere") return run_decohere(config);
  if (config.scenario == "recohere") return run_recohere(config);
  if (config.scenario == "coarse-grain") return run_coarse_grain(config);
  if (config.scenario == "classical") return run_classical(config);
  if (config.scenario == "verify") return run_verify(config);
  throw config_error("unknown scenario '" + config.scenario + "'");
}

}  // namespace redstates::scenario
