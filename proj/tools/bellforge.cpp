#include <CLI11.hpp>
#include <json.hpp>

#include <bellforge/catalog.hpp>
#include <bellforge/io.hpp>
#include <bellforge/local.hpp>
#include <bellforge/npa.hpp>
#include <bellforge/optimize.hpp>
#include <bellforge/symmetry.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>

using namespace bellforge;
using nlohmann::json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitNumerical = 2;

struct NumericalFailure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Functional argument: a catalog name or a path to a functional JSON file.
BellFunctional resolve_functional(const std::string& arg) {
  if (std::filesystem::exists(arg)) return load_functional(arg);
  return catalog_lookup(arg).functional;
}

void emit(const json& j, bool as_json, const std::string& text) {
  if (as_json)
    std::cout << j.dump(2) << "\n";
  else
    std::cout << text;
}

json witness_json(const DeterministicStrategy& w) {
  return json{{"alice", w.alice_outputs}, {"bob", w.bob_outputs}};
}

std::string csv_escape(double v) { return format_sig9(v); }

void write_csv(const std::string& path, const std::string& header,
               const std::vector<std::vector<double>>& rows) {
  std::ostream* out = &std::cout;
  std::ofstream file;
  if (!path.empty() && path != "-") {
    file.open(path);
    if (!file) throw std::runtime_error("cannot write " + path);
    out = &file;
  }
  *out << header << "\n";
  for (const auto& row : rows) {
    for (size_t i = 0; i < row.size(); ++i) *out << (i ? "," : "") << csv_escape(row[i]);
    *out << "\n";
  }
}

int run(int argc, char** argv) {
  CLI::App app{"bellforge: local, quantum and NPA bounds for bipartite Bell inequalities"};
  app.require_subcommand(1);
  app.fallthrough();
  bool as_json = false;
  app.add_flag("--json", as_json, "machine-readable output");

  // ---- catalog ----
  auto* cat = app.add_subcommand("catalog", "inspect the built-in inequality catalog");
  cat->require_subcommand(1);
  cat->add_subcommand("list", "list catalog names");
  std::string show_name;
  auto* cat_show = cat->add_subcommand("show", "print one inequality");
  cat_show->add_option("name", show_name)->required();

  // ---- bound ----
  auto* bound = app.add_subcommand("bound", "compute bounds");
  bound->require_subcommand(1);

  std::string bl_name;
  auto* b_local = bound->add_subcommand("local", "exact local bound by enumeration");
  b_local->add_option("functional", bl_name, "catalog name or functional.json")->required();

  std::string ql_name, ql_mode = "free", ql_save;
  int ql_dim = 2, ql_restarts = 20;
  std::uint64_t ql_seed = 2024;
  auto* b_ql = bound->add_subcommand("quantum-lower", "see-saw lower bound in fixed dimension");
  b_ql->add_option("functional", ql_name)->required();
  b_ql->add_option("--dim", ql_dim, "local Hilbert-space dimension")->capture_default_str();
  b_ql->add_option("--mode", ql_mode, "free | symcorr | sqs")->capture_default_str();
  b_ql->add_option("--restarts", ql_restarts)->capture_default_str();
  b_ql->add_option("--seed", ql_seed)->capture_default_str();
  b_ql->add_option("--save-strategy", ql_save, "write the best strategy JSON here");

  std::string sq_name, sq_subspace = "both", sq_save;
  int sq_dim = 2, sq_restarts = 100;
  std::uint64_t sq_seed = 2024;
  auto* b_sq = bound->add_subcommand("sqs-lower", "symmetric-strategy lower bound");
  b_sq->add_option("functional", sq_name)->required();
  b_sq->add_option("--dim", sq_dim)->capture_default_str();
  b_sq->add_option("--restarts", sq_restarts)->capture_default_str();
  b_sq->add_option("--seed", sq_seed)->capture_default_str();
  b_sq->add_option("--subspace", sq_subspace, "symmetric | antisymmetric | both | full")
      ->capture_default_str();
  b_sq->add_option("--save-strategy", sq_save);

  std::string npa_name, npa_level = "1", npa_export;
  bool npa_symmetric = false;
  auto* b_npa = bound->add_subcommand("npa", "dimension-free upper bound");
  b_npa->add_option("functional", npa_name)->required();
  b_npa->add_option("--level", npa_level, "1 | 1ab | 2")->capture_default_str();
  b_npa->add_flag("--symmetric", npa_symmetric, "twirl over the party swap");
  b_npa->add_option("--export-sdpa", npa_export, "write the assembled program in SDPA format");

  // ---- eval ----
  std::string ev_name, ev_strategy;
  auto* ev = app.add_subcommand("eval", "evaluate a functional on a strategy");
  ev->add_option("functional", ev_name)->required();
  ev->add_option("strategy", ev_strategy, "strategy JSON file")->required();

  // ---- check symmetry ----
  auto* check = app.add_subcommand("check", "diagnostics");
  check->require_subcommand(1);
  std::string cs_strategy;
  auto* check_sym = check->add_subcommand("symmetry", "symmetry report for a strategy");
  check_sym->add_option("strategy", cs_strategy)->required();

  // ---- negativity ----
  std::string neg_strategy;
  auto* neg = app.add_subcommand("negativity", "entanglement negativity of a strategy state");
  neg->add_option("strategy", neg_strategy)->required();

  // ---- sweep ----
  auto* sw = app.add_subcommand("sweep", "family sweeps");
  sw->require_subcommand(1);
  double sw_from = 1.5, sw_to = 3.0;
  int sw_steps = 61, sw_restarts = 12, sw_sqs_restarts = 40;
  std::uint64_t sw_seed = 2024;
  std::string sw_out = "-";
  auto* sw_is = sw->add_subcommand(
      "is-alpha", "sweep the three-setting family; CSV columns: alpha,local,sqs_qubit,quantum");
  sw_is->add_option("--from", sw_from)->capture_default_str();
  sw_is->add_option("--to", sw_to)->capture_default_str();
  sw_is->add_option("--steps", sw_steps)->capture_default_str();
  sw_is->add_option("--restarts", sw_restarts, "see-saw restarts per point")->capture_default_str();
  sw_is->add_option("--sqs-restarts", sw_sqs_restarts)->capture_default_str();
  sw_is->add_option("--seed", sw_seed)->capture_default_str();
  sw_is->add_option("--out", sw_out, "CSV path ('-' for stdout)")->capture_default_str();

  // ---- reproduce ----
  std::string rep_table, rep_out = "-";
  int rep_dmax = 8, rep_steps = 61, rep_restarts = 12, rep_sqs_restarts = 40;
  std::uint64_t rep_seed = 2024;
  auto* rep = app.add_subcommand("reproduce", "regenerate a reported table as CSV");
  rep->add_option("table", rep_table,
                  "cglmp-values (d,i22dd_value,cglmp_value) | negativity (d,negativity) | "
                  "is-sweep (alpha,local,sqs_qubit,quantum)")
      ->required();
  rep->add_option("--dmax", rep_dmax)->capture_default_str();
  rep->add_option("--steps", rep_steps)->capture_default_str();
  rep->add_option("--restarts", rep_restarts)->capture_default_str();
  rep->add_option("--sqs-restarts", rep_sqs_restarts)->capture_default_str();
  rep->add_option("--seed", rep_seed)->capture_default_str();
  rep->add_option("--out", rep_out)->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    app.exit(e);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  if (cat->parsed()) {
    if (cat_show->parsed()) {
      const auto e = catalog_lookup(show_name);
      json j = to_json(e.functional);
      j["symmetric"] = e.symmetric;
      if (e.known_quantum_value) j["known_quantum_value"] = *e.known_quantum_value;
      if (e.known_sqs_qubit_value) j["known_sqs_qubit_value"] = *e.known_sqs_qubit_value;
      j["source"] = e.source;
      std::ostringstream text;
      text << e.functional.name << ": scenario (2," << e.functional.scenario().settings_a << ","
           << e.functional.scenario().outcomes << ")"
           << ", symmetric=" << (e.symmetric ? "yes" : "no");
      if (e.functional.known_local_bound)
        text << ", local bound " << format_sig9(*e.functional.known_local_bound);
      if (e.known_quantum_value)
        text << ", quantum value " << format_sig9(*e.known_quantum_value);
      text << "\n  " << e.source << "\n";
      emit(j, as_json, text.str());
    } else {
      json names = json::array();
      std::ostringstream text;
      for (const auto& n : catalog_names()) {
        names.push_back(n);
        text << n << "\n";
      }
      emit(json{{"names", names}}, as_json, text.str());
    }
    return kExitOk;
  }

  if (b_local->parsed()) {
    const auto f = resolve_functional(bl_name);
    const auto r = local_bound(f);
    json j{{"functional", f.name}, {"value", r.value}, {"witness", witness_json(r.witness)}};
    std::ostringstream text;
    text << "local bound " << format_sig9(r.value) << "\n  witness alice=[";
    for (size_t i = 0; i < r.witness.alice_outputs.size(); ++i)
      text << (i ? " " : "") << r.witness.alice_outputs[i];
    text << "] bob=[";
    for (size_t i = 0; i < r.witness.bob_outputs.size(); ++i)
      text << (i ? " " : "") << r.witness.bob_outputs[i];
    text << "]\n";
    emit(j, as_json, text.str());
    return kExitOk;
  }

  if (b_ql->parsed()) {
    const auto f = resolve_functional(ql_name);
    OptimizationReport report;
    if (ql_mode == "sqs") {
      ParamOptConfig cfg;
      cfg.local_dim = ql_dim;
      cfg.restarts = ql_restarts;
      cfg.seed = ql_seed;
      report = sqs_lower_bound(f, cfg);
    } else {
      SeesawConfig cfg;
      cfg.local_dim = ql_dim;
      cfg.restarts = ql_restarts;
      cfg.seed = ql_seed;
      cfg.mode = seesaw_mode_from_string(ql_mode);
      report = seesaw(f, cfg);
    }
    if (!ql_save.empty()) {
      std::ofstream out(ql_save);
      out << to_json(report.best_strategy).dump(2) << "\n";
    }
    json j{{"functional", f.name}, {"value", report.best_value},   {"mode", report.mode},
           {"seed", ql_seed},      {"converged", report.converged}, {"restarts", ql_restarts}};
    std::ostringstream text;
    text << "quantum lower bound " << format_sig9(report.best_value) << " (" << report.mode
         << ", seed " << ql_seed << ")\n";
    emit(j, as_json, text.str());
    return kExitOk;
  }

  if (b_sq->parsed()) {
    const auto f = resolve_functional(sq_name);
    ParamOptConfig cfg;
    cfg.local_dim = sq_dim;
    cfg.restarts = sq_restarts;
    cfg.seed = sq_seed;
    if (sq_subspace == "symmetric") cfg.subspace = StateSubspace::symmetric;
    else if (sq_subspace == "antisymmetric") cfg.subspace = StateSubspace::antisymmetric;
    else if (sq_subspace == "both") cfg.subspace = StateSubspace::both;
    else if (sq_subspace == "full") cfg.subspace = StateSubspace::full;
    else throw CLI::ValidationError("--subspace", "unknown subspace");
    const auto report = sqs_lower_bound(f, cfg);
    if (!sq_save.empty()) {
      std::ofstream out(sq_save);
      out << to_json(report.best_strategy).dump(2) << "\n";
    }
    json j{{"functional", f.name}, {"value", report.best_value}, {"mode", report.mode},
           {"seed", sq_seed},      {"restarts", sq_restarts}};
    std::ostringstream text;
    text << "SQS lower bound " << format_sig9(report.best_value) << " (" << report.mode
         << ", seed " << sq_seed << ")\n";
    emit(j, as_json, text.str());
    return kExitOk;
  }

  if (b_npa->parsed()) {
    const auto f = resolve_functional(npa_name);
    const auto level = npa_level_from_string(npa_level);
    if (!npa_export.empty()) {
      auto m = npa_moment_structure(f.scenario(), level);
      if (npa_symmetric) m = twirl(m);
      std::ofstream out(npa_export);
      export_sdpa(npa_assemble(f, m), out);
    }
    const auto b = npa_upper_bound(f, level, npa_symmetric);
    if (b.status != SdpStatus::optimal)
      throw NumericalFailure(std::string("solver status: ") + to_string(b.status));
    json j{{"functional", f.name},
           {"value", b.value},
           {"level", npa_level},
           {"symmetric", npa_symmetric},
           {"moment_matrix_size", b.moment_matrix_size},
           {"variables", b.variables},
           {"solver_gap", b.solver_gap}};
    std::ostringstream text;
    text << "NPA level " << npa_level << (npa_symmetric ? " (twirled)" : "") << " upper bound "
         << format_sig9(b.value) << "  [moment matrix " << b.moment_matrix_size << "x"
         << b.moment_matrix_size << ", " << b.variables << " variables]\n";
    emit(j, as_json, text.str());
    return kExitOk;
  }

  if (ev->parsed()) {
    const auto f = resolve_functional(ev_name);
    const auto s = load_strategy(ev_strategy);
    const double v = evaluate(f, born_correlation(s));
    emit(json{{"functional", f.name}, {"value", v}}, as_json,
         "value " + format_sig9(v) + "\n");
    return kExitOk;
  }

  if (check_sym->parsed()) {
    const auto s = load_strategy(cs_strategy);
    const auto p = born_correlation(s);
    json j;
    j["correlation_symmetric"] = is_symmetric(p);
    j["sqs"] = check_sufficient_conditions(s, SufficientKind::identity);
    j["mirror_kind"] = check_sufficient_conditions(s, SufficientKind::conjugation);
    // local-unitary alignability for qubit dichotomic PVM strategies
    std::string alignable = "not-applicable";
    if (state_dim_a(s.state) == 2 && state_dim_b(s.state) == 2 &&
        s.alice.front().outcomes() == 2) {
      bool pvm = true;
      for (const auto& m : s.alice) pvm = pvm && m.is_projective(1e-8);
      for (const auto& m : s.bob) pvm = pvm && m.is_projective(1e-8);
      if (pvm) {
        auto bloch_of = [](const Measurement& m) {
          const Matrix obs = m.effects[0] - m.effects[1];
          return Eigen::Vector3d{(obs * pauli_x()).trace().real() / 2.0,
                                 (obs * pauli_y()).trace().real() / 2.0,
                                 (obs * pauli_z()).trace().real() / 2.0};
        };
        std::vector<Eigen::Vector3d> va, vb;
        bool degenerate = false;
        for (size_t x = 0; x < s.alice.size(); ++x) {
          const auto a = bloch_of(s.alice[x]);
          const auto b = bloch_of(s.bob[x]);
          if (a.norm() < 1e-8 || b.norm() < 1e-8) degenerate = true;
          va.push_back(a);
          vb.push_back(b);
        }
        if (!degenerate)
          alignable = find_aligning_rotation(va, vb, 1e-7) ? "yes" : "no";
      }
    }
    j["measurements_alignable_by_local_unitary"] = alignable;
    std::ostringstream text;
    text << "correlation symmetric: " << (j["correlation_symmetric"].get<bool>() ? "yes" : "no")
         << "\nSQS (shared measurements, swap-invariant state): "
         << (j["sqs"].get<bool>() ? "yes" : "no")
         << "\nmirror kind (conjugation pairing): " << (j["mirror_kind"].get<bool>() ? "yes" : "no")
         << "\nmeasurement directions alignable by a local unitary: " << alignable << "\n";
    emit(j, as_json, text.str());
    return kExitOk;
  }

  if (neg->parsed()) {
    const auto s = load_strategy(neg_strategy);
    const DensityOperator rho{density_of(s.state), state_dim_a(s.state), state_dim_b(s.state)};
    const double v = negativity(rho);
    emit(json{{"negativity", v}}, as_json, "negativity " + format_sig9(v) + "\n");
    return kExitOk;
  }

  if (sw_is->parsed() || (rep->parsed() && rep_table == "is-sweep")) {
    const double from = sw_is->parsed() ? sw_from : 1.5;
    const double to = sw_is->parsed() ? sw_to : 3.0;
    const int steps = sw_is->parsed() ? sw_steps : rep_steps;
    const int restarts = sw_is->parsed() ? sw_restarts : rep_restarts;
    const int sqs_restarts = sw_is->parsed() ? sw_sqs_restarts : rep_sqs_restarts;
    const std::uint64_t seed = sw_is->parsed() ? sw_seed : rep_seed;
    const std::string out = sw_is->parsed() ? sw_out : rep_out;
    if (steps < 1) throw CLI::ValidationError("--steps", "need at least one step");
    std::vector<double> alphas;
    for (int i = 0; i < steps; ++i)
      alphas.push_back(steps == 1 ? from : from + (to - from) * i / (steps - 1));
    SeesawConfig scfg;
    scfg.restarts = restarts;
    scfg.seed = seed;
    ParamOptConfig pcfg;
    pcfg.restarts = sqs_restarts;
    pcfg.seed = seed;
    const auto rows = sweep([](double a) { return i_s(a).functional; }, alphas, scfg, pcfg);
    std::vector<std::vector<double>> csv;
    for (const auto& r : rows) csv.push_back({r.alpha, r.local, r.sqs_qubit, r.quantum});
    std::cerr << "# seed " << seed << ", seesaw restarts " << restarts << ", sqs restarts "
              << sqs_restarts << "\n";
    write_csv(out, "alpha,local,sqs_qubit,quantum", csv);
    return kExitOk;
  }

  if (rep->parsed()) {
    if (rep_table == "cglmp-values") {
      std::vector<std::vector<double>> rows;
      for (int d = 2; d <= rep_dmax; ++d) {
        const auto meas = cglmp_optimal_measurements(d);
        const auto r = best_state_for_measurements(i22dd(d).functional, meas, meas);
        rows.push_back({static_cast<double>(d), r.value, cglmp_value_from_i22dd(d, r.value)});
      }
      write_csv(rep_out, "d,i22dd_value,cglmp_value", rows);
      return kExitOk;
    }
    if (rep_table == "negativity") {
      std::vector<std::vector<double>> rows;
      for (int d = 2; d <= std::min(rep_dmax, 7); ++d) {
        const auto meas = cglmp_optimal_measurements(d);
        const auto r = best_state_for_measurements(i22dd(d).functional, meas, meas);
        const DensityOperator rho{r.state.amplitudes * r.state.amplitudes.adjoint(), d, d};
        rows.push_back({static_cast<double>(d), negativity(rho)});
      }
      write_csv(rep_out, "d,negativity", rows);
      return kExitOk;
    }
    throw CLI::ValidationError("table", "unknown table id: " + rep_table);
  }

  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const NumericalFailure& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return kExitNumerical;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const ShapeError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitNumerical;
  }
}
