// Command-line front end: sweeps, thresholds, oracle comparison, built-in
// scenarios and coefficient dumps.

#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "hrc/builtin_scenarios.hpp"
#include "hrc/coefficients.hpp"
#include "hrc/csv.hpp"
#include "hrc/oracle/compare.hpp"
#include "hrc/scenario_io.hpp"
#include "hrc/sweep.hpp"

#ifndef HRC_VERSION
#define HRC_VERSION "dev"
#endif

namespace {

using namespace hrc;

struct ScenarioFlags {
  std::string scenario = "fig2";
  std::optional<double> gamma_over_g;
  std::optional<double> probe_alpha;
  std::optional<double> probe_phase;
  std::string dkd_unit = "g";
  bool strict = false;
  std::string witness_form = "expanded";

  void add(CLI::App* app) {
    app->add_option("--scenario", scenario, "Built-in name (see 'scenarios') or path to a scenario JSON file")
        ->capture_default_str();
    app->add_option("--gamma-over-g", gamma_over_g, "Probe coupling Gamma in units of g");
    app->add_option("--probe-alpha", probe_alpha, "Probe amplitude magnitude |alpha|")->check(CLI::NonNegativeNumber);
    app->add_option("--probe-phase", probe_phase, "Probe amplitude phase (rad)");
    app->add_option("--dkD-unit", dkd_unit, "Reading of the built-in dkD = 9: g or absolute")
        ->check(CLI::IsMember({"g", "absolute"}))
        ->capture_default_str();
    app->add_flag("--strict-transcription", strict, "Evaluate the coefficient formulas exactly as printed");
    app->add_option("--witness-form", witness_form, "Witness closed forms: expanded or printed")
        ->check(CLI::IsMember({"expanded", "printed"}))
        ->capture_default_str();
  }

  Reading reading() const { return strict ? Reading::StrictTranscription : Reading::Derived; }
  WitnessForm form() const { return witness_form == "printed" ? WitnessForm::Printed : WitnessForm::Expanded; }

  /// Loads the scenario and applies the overrides. default_gamma_over_g is
  /// used for built-ins when --gamma-over-g is absent.
  Scenario load(std::optional<double> default_gamma_over_g = std::nullopt) const {
    Scenario s;
    if (is_builtin(scenario)) {
      BuiltinOptions o;
      o.dkd_unit = parse_dkd_unit(dkd_unit);
      o.gamma_over_g = gamma_over_g ? gamma_over_g : default_gamma_over_g;
      s = builtin_scenario(scenario, o);
    } else {
      s = load_scenario(scenario);
      if (gamma_over_g) s.couplings.Gamma = *gamma_over_g * s.couplings.g;
    }
    if (probe_alpha || probe_phase) {
      const double mag = probe_alpha.value_or(std::abs(s.amplitudes.alpha));
      const double ph = probe_phase.value_or(std::arg(s.amplitudes.alpha));
      s.amplitudes.alpha = polar_amplitude(mag, normalize_phase(ph));
    }
    return s;
  }
};

struct GridFlags {
  std::optional<double> start, stop;
  std::optional<std::size_t> count;

  void add(CLI::App* app) {
    app->add_option("--z-start", start, "First z");
    app->add_option("--z-stop", stop, "Last z");
    app->add_option("--z-count", count, "Number of z points (>= 2)");
  }

  /// The requested grid, or the scenario's own grid when no flag is given.
  std::vector<double> resolve(const Scenario& s) const {
    if (!start && !stop && !count) {
      if (s.z_grid.size() < 2) throw std::invalid_argument("scenario has no z grid; pass --z-start/--z-stop/--z-count");
      return s.z_grid;
    }
    if (!start || !stop || !count) throw std::invalid_argument("--z-start, --z-stop and --z-count go together");
    return linspace(*start, *stop, *count);
  }
};

class Output {
 public:
  explicit Output(const std::string& path) : path_(path) {
    if (!path.empty()) {
      file_ = std::make_unique<std::ofstream>(path, std::ios::binary);
      if (!*file_) throw std::runtime_error("cannot open output file: " + path);
    }
  }
  std::ostream& stream() { return file_ ? *file_ : std::cout; }
  const std::string& path() const { return path_; }

 private:
  std::string path_;
  std::unique_ptr<std::ofstream> file_;
};

std::string hex64(std::uint64_t h) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

/// Run metadata next to the data file (<out>.meta.json); skipped for stdout.
void write_sidecar(const std::string& out, const Scenario& s, const std::string& command,
                   const std::vector<std::string>& args) {
  if (out.empty()) return;
  nlohmann::json meta;
  meta["tool"] = "hrc";
  meta["version"] = HRC_VERSION;
  meta["command"] = command;
  meta["arguments"] = args;
  meta["scenario_hash"] = hex64(scenario_hash(s));
  meta["scenario"] = scenario_to_json(s);
  std::ofstream f(out + ".meta.json");
  if (!f) throw std::runtime_error("cannot write metadata file: " + out + ".meta.json");
  f << meta.dump(2) << '\n';
}

std::vector<WitnessKind> parse_witnesses(const std::vector<std::string>& names, bool all) {
  if (all) return tabulated_witnesses();
  std::vector<WitnessKind> out;
  for (const auto& n : names) {
    WitnessKind k = parse_witness(n);
    require_tabulated(k);
    out.push_back(k);
  }
  return out;
}

Family parse_family(const std::string& s) {
  for (Family f : kAllFamilies)
    if (family_name(f) == s) return f;
  throw std::invalid_argument("unknown coefficient family '" + s + "'");
}

/// "g:2:1.5" -> multiply g2 by 1.5.
oracle::CoefficientFault parse_fault(const std::string& spec) {
  std::stringstream ss(spec);
  std::string fam, idx, fac;
  if (!std::getline(ss, fam, ':') || !std::getline(ss, idx, ':') || !std::getline(ss, fac))
    throw std::invalid_argument("fault must look like family:index:factor");
  oracle::CoefficientFault f;
  f.family = parse_family(fam);
  f.index = std::stoi(idx);
  f.factor = parse_double(fac);
  if (f.index < 1 || f.index > family_size(f.family)) throw std::invalid_argument("fault index out of range");
  return f;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Probed hyper-Raman coupler: witness sweeps, thresholds and oracle checks"};
  app.set_version_flag("--version", std::string(HRC_VERSION));
  app.require_subcommand(1);
  const std::vector<std::string> args(argv + 1, argv + argc);

  // sweep
  auto* sweep = app.add_subcommand("sweep", "Evaluate witnesses on a z grid (optionally times a second axis)");
  ScenarioFlags sweep_sc;
  GridFlags sweep_grid;
  std::vector<std::string> sweep_w;
  bool sweep_all = false;
  std::string sweep_axis, sweep_out;
  std::optional<double> ax_start, ax_stop;
  std::optional<std::size_t> ax_count;
  unsigned sweep_threads = 0;
  sweep_sc.add(sweep);
  sweep_grid.add(sweep);
  sweep->add_option("--witness", sweep_w, "Witness name, e.g. S_a1->d, HZ1_a1d, HZ2_bc, D_a1 (repeatable)");
  sweep->add_flag("--all-witnesses", sweep_all, "Every tabulated witness");
  sweep->add_option("--axis2", sweep_axis, "Secondary axis: alpha_mag, alpha_phase or dkD")
      ->check(CLI::IsMember({"alpha_mag", "alpha_phase", "dkD"}));
  sweep->add_option("--axis2-start", ax_start, "First secondary-axis value");
  sweep->add_option("--axis2-stop", ax_stop, "Last secondary-axis value");
  sweep->add_option("--axis2-count", ax_count, "Number of secondary-axis values (>= 2)");
  sweep->add_option("--threads", sweep_threads, "Worker threads (0: all cores)");
  sweep->add_option("--out", sweep_out, "Output CSV (default stdout); metadata goes to <out>.meta.json");

  // threshold
  auto* thr = app.add_subcommand("threshold", "Locate the first sign change of a witness");
  ScenarioFlags thr_sc;
  std::string thr_w;
  double thr_lo = 0.0, thr_hi = 0.0, thr_tol = 1e-4;
  std::size_t thr_scan = 200;
  thr_sc.add(thr);
  thr->add_option("--witness", thr_w, "Witness name")->required();
  thr->add_option("--z-start", thr_lo, "Range start")->required();
  thr->add_option("--z-stop", thr_hi, "Range end")->required();
  thr->add_option("--tol", thr_tol, "Bracket width")->capture_default_str();
  thr->add_option("--scan-points", thr_scan, "Points of the bracketing scan")->capture_default_str();

  // compare
  auto* cmp = app.add_subcommand("compare", "Compare closed-form witnesses against the truncated Fock oracle");
  ScenarioFlags cmp_sc;
  GridFlags cmp_grid;
  std::vector<std::string> cmp_w;
  int cmp_cutoff = 5;
  double cmp_C = oracle::kFrozenToleranceC;
  std::string cmp_fault, cmp_out;
  bool cmp_raw = false;
  cmp_sc.add(cmp);
  cmp_grid.add(cmp);
  cmp->add_option("--witness", cmp_w, "Restrict to these witnesses (default: all tabulated)");
  cmp->add_option("--cutoff", cmp_cutoff, "Fock cutoff per mode")->check(CLI::Range(1, 40))->capture_default_str();
  cmp->add_option("--tolerance-C", cmp_C, "Constant C of the C (Lambda z xi)^3 band")->capture_default_str();
  cmp->add_option("--inject-fault", cmp_fault, "Scale one coefficient, family:index:factor (harness self-test)");
  cmp->add_flag("--keep-truncation-offset", cmp_raw, "Do not remove the z = 0 truncation offset");
  cmp->add_option("--out", cmp_out, "Output CSV (default stdout)");

  // scenarios
  auto* scn = app.add_subcommand("scenarios", "List built-in scenarios or print one as JSON");
  std::string scn_show;
  ScenarioFlags scn_sc;
  scn->add_option("--show", scn_show, "Print this built-in (with overrides) as scenario JSON");
  scn->add_option("--gamma-over-g", scn_sc.gamma_over_g, "Probe coupling Gamma in units of g");
  scn->add_option("--probe-alpha", scn_sc.probe_alpha, "Probe amplitude magnitude");
  scn->add_option("--probe-phase", scn_sc.probe_phase, "Probe amplitude phase (rad)");
  scn->add_option("--dkD-unit", scn_sc.dkd_unit, "g or absolute")->check(CLI::IsMember({"g", "absolute"}));

  // coeffs
  auto* cof = app.add_subcommand("coeffs", "Dump every coefficient at one z");
  ScenarioFlags cof_sc;
  double cof_z = 0.0;
  std::string cof_out;
  cof_sc.add(cof);
  cof->add_option("--z", cof_z, "Propagation length")->required()->check(CLI::NonNegativeNumber);
  cof->add_option("--out", cof_out, "Output CSV (default stdout)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*sweep) {
      // Maps over a second axis default to Gamma = 1.5 g for the built-ins.
      const Scenario s = sweep_sc.load(sweep_axis.empty() ? std::nullopt : std::optional<double>(1.5));
      SweepSpec spec;
      spec.scenario = s;
      spec.witnesses = parse_witnesses(sweep_w, sweep_all);
      spec.z_grid = sweep_grid.resolve(s);
      spec.reading = sweep_sc.reading();
      spec.form = sweep_sc.form();
      spec.threads = sweep_threads;
      if (!sweep_axis.empty()) {
        if (!ax_start || !ax_stop || !ax_count)
          throw std::invalid_argument("--axis2 needs --axis2-start, --axis2-stop and --axis2-count");
        spec.axis2 = Axis2{parse_axis2(sweep_axis), linspace(*ax_start, *ax_stop, *ax_count)};
      }
      const auto rows = run_sweep(spec);
      Output out(sweep_out);
      write_sweep_csv(out.stream(), rows, spec.axis2 ? std::optional(spec.axis2->kind) : std::nullopt);
      write_sidecar(sweep_out, s, "sweep", args);
      return 0;
    }
    if (*thr) {
      const Scenario s = thr_sc.load();
      const ThresholdResult r =
          find_threshold(parse_witness(thr_w), s, thr_lo, thr_hi, thr_tol, thr_sc.reading(), thr_sc.form(), thr_scan);
      std::cout << "witness,z_lo,z_hi,z_star,direction,sign_changes\n"
                << to_string(r.kind) << ',' << format_double(r.z_lo) << ',' << format_double(r.z_hi) << ','
                << format_double(r.z_star) << ',' << (r.direction < 0 ? "+to-" : "-to+") << ',' << r.sign_changes
                << '\n';
      return 0;
    }
    if (*cmp) {
      const Scenario s = cmp_sc.load();
      oracle::CompareOptions opt;
      opt.cutoffs.fill(cmp_cutoff);
      opt.tolerance_C = cmp_C;
      opt.reading = cmp_sc.reading();
      opt.form = cmp_sc.form();
      opt.kinds = parse_witnesses(cmp_w, cmp_w.empty());
      opt.subtract_truncation_offset = !cmp_raw;
      if (!cmp_fault.empty()) opt.fault = parse_fault(cmp_fault);
      const auto run = oracle::compare(s, cmp_grid.resolve(s), opt);
      Output out(cmp_out);
      oracle::write_comparison_csv(out.stream(), run.records);
      std::size_t fails = 0;
      for (const auto& r : run.records) fails += r.pass ? 0 : 1;
      std::cerr << "records: " << run.records.size() << ", failures: " << fails
                << ", worst conservation drift: " << format_double(run.conservation.worst()) << '\n';
      return fails == 0 ? 0 : 1;
    }
    if (*scn) {
      if (scn_show.empty()) {
        for (const auto& b : kBuiltinScenarios) std::cout << b.name << "  " << b.description << '\n';
        return 0;
      }
      scn_sc.scenario = scn_show;
      if (!is_builtin(scn_show)) throw std::invalid_argument("unknown built-in scenario '" + scn_show + "'");
      std::cout << dump_scenario(scn_sc.load());
      return 0;
    }
    if (*cof) {
      const Scenario s = cof_sc.load();
      Output out(cof_out);
      write_coefficients_csv(out.stream(), eval_coefficients(s, cof_z, cof_sc.reading()));
      return 0;
    }
  } catch (const NoSignChange& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
