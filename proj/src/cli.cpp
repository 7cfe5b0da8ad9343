#include "mudecay/cli.hpp"

#include "mudecay/bounds.hpp"
#include "mudecay/digest.hpp"
#include "mudecay/errors.hpp"
#include "mudecay/kernels.hpp"
#include "mudecay/parallel.hpp"
#include "mudecay/selftest.hpp"

#include <json.hpp>

#include <chrono>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <random>
#include <sstream>

namespace mudecay {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

json num(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

json charges_json(const Charges& c) { return {{"Q", c.Q}, {"L_e", c.L_e}, {"L_mu", c.L_mu}}; }

json config_json(const RunConfig& config) {
  json out = json::object();
  std::istringstream in(canonical_config(config));
  std::string line, section;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    if (line.front() == '[') {
      section = line.substr(1, line.size() - 2);
      out[section] = json::object();
      continue;
    }
    const auto eq = line.find(" = ");
    out[section][line.substr(0, eq)] = line.substr(eq + 3);
  }
  return out;
}

std::string utc_now() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  std::ostringstream s;
  s << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
  return s.str();
}

std::string fmt(double v) {
  if (!std::isfinite(v)) return v > 0 ? "inf" : (v < 0 ? "-inf" : "nan");
  std::ostringstream s;
  s << std::setprecision(17) << v;
  return s.str();
}

struct Csv {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
};

class Context {
 public:
  Context(const CliOptions& opt, RunConfig config, std::ostream& log)
      : opt_(opt), config_(std::move(config)), log_(log), digest_(config_digest(config_)) {}

  const RunConfig& config() const { return config_; }
  RunConfig& config() { return config_; }
  std::ostream& log() { return log_; }
  const std::string& digest() const { return digest_; }

  // Model with g resolved from g_over_g0 when requested.
  Model& model() {
    if (!model_) {
      model_ = std::make_unique<Model>(make_model(config_.model));
      if (config_.g_over_g0) {
        const BoundsReport b = compute_bounds(*model_);
        model_->config.g = b.g0_infinite ? 0.0 : *config_.g_over_g0 * b.g0;
        if (b.g0_infinite) notes_.push_back("g0 is infinite (zero kernels); g set to 0");
      }
    }
    return *model_;
  }

  // Vertex table with kernels applied, cached on disk by the raw-vertex key.
  const VertexTable& table() {
    if (!table_) {
      Model& m = model();
      const std::string key = vertex_cache_key(m.config);
      const fs::path cache = fs::path(opt_.out_dir) / "cache" / ("vertex-" + hex_digest(key) + ".txt");
      VertexTable t;
      bool loaded = false;
      if (fs::exists(cache)) {
        std::ifstream in(cache);
        try {
          t = load_vertex_table(in);
          loaded = true;
          log_ << "vertex table loaded from " << cache.string() << "\n";
        } catch (const std::exception& e) {
          log_ << "ignoring unreadable vertex cache " << cache.string() << ": " << e.what() << "\n";
        }
      }
      if (!loaded) {
        t = build_vertex_table(m);
        fs::create_directories(cache.parent_path());
        std::ofstream out(cache);
        save_vertex_table(out, t);
      }
      apply_kernels(m, t);
      table_ = std::make_unique<VertexTable>(std::move(t));
    }
    return *table_;
  }

  void write_json(const std::string& name, json body) {
    json doc;
    doc["schema_version"] = kReportSchemaVersion;
    doc["command"] = opt_.command;
    doc["config_digest"] = digest_;
    doc["config"] = config_json(config_);
    if (model_) doc["resolved_g"] = num(model_->config.g);
    if (!notes_.empty()) doc["notes"] = notes_;
    doc["report"] = std::move(body);
    write_file(name, doc.dump(2) + "\n");
  }

  void write_csv(const std::string& name, const Csv& csv) {
    std::string text;
    for (std::size_t i = 0; i < csv.header.size(); ++i) text += (i ? "," : "") + csv.header[i];
    text += "\n";
    for (const auto& row : csv.rows) {
      for (std::size_t i = 0; i < row.size(); ++i) text += (i ? "," : "") + row[i];
      text += "\n";
    }
    write_file(name, text);
  }

  void write_file(const std::string& name, const std::string& text) {
    const fs::path p = fs::path(opt_.out_dir) / name;
    std::ofstream out(p, std::ios::binary);
    if (!out) throw ConfigError("cannot write " + p.string());
    out << text;
    outputs_.push_back(p.string());
  }

  void write_manifest() {
    RunManifest m{digest_, opt_.command, utc_now(), kToolVersion, outputs_};
    json doc{{"schema_version", kReportSchemaVersion}, {"config_digest", m.config_digest}, {"command", m.command},
             {"timestamp", m.timestamp}, {"tool_version", m.tool_version}, {"seed", config_.run.seed},
             {"threads", opt_.threads}, {"outputs", m.outputs}};
    std::ofstream out(fs::path(opt_.out_dir) / "run_manifest.json");
    out << doc.dump(2) << "\n";
  }

  std::vector<std::string> failures;

 private:
  const CliOptions& opt_;
  RunConfig config_;
  std::ostream& log_;
  std::string digest_;
  std::unique_ptr<Model> model_;
  std::unique_ptr<VertexTable> table_;
  std::vector<std::string> notes_;
  std::vector<std::string> outputs_;
};

json check_json(const SuiteCheck& c) {
  return {{"name", c.name}, {"max_error", num(c.max_error)}, {"tolerance", c.tolerance}, {"passed", c.passed},
          {"detail", c.detail}};
}

void cmd_selftest(Context& ctx) {
  const auto& cfg = ctx.config();
  std::vector<SuiteCheck> all;
  for (auto&& part : {car_suite(ctx.model().fock), gamma_suite(),
                      orthonormality_suite(cfg.model.electron(), cfg.model.muon(), 8, 20, cfg.run.seed),
                      neutrino_suite(100, cfg.run.seed)})
    all.insert(all.end(), part.begin(), part.end());
  all.push_back(hermite_recurrence_check(40, 50, cfg.run.seed));
  json checks = json::array();
  Csv csv{{"name", "max_error", "tolerance", "passed"}, {}};
  for (const auto& c : all) {
    checks.push_back(check_json(c));
    csv.rows.push_back({c.name, fmt(c.max_error), fmt(c.tolerance), c.passed ? "1" : "0"});
    if (!c.passed) ctx.failures.push_back(c.name);
  }
  ctx.write_json("selftest.json", {{"checks", checks}, {"passed", ctx.failures.empty()}});
  ctx.write_csv("selftest.csv", csv);
}

json refined_json(const RefinedIntegral& r) {
  return {{"value", num(r.value)}, {"divergent", r.divergent}, {"refinements", r.refinements}};
}

json ir_json(const IrFit& f) {
  return {{"exponent", num(f.exponent)}, {"constant_K", num(f.constant_K)}, {"residual", num(f.residual)}};
}

void cmd_check_kernels(Context& ctx) {
  const auto& m = ctx.config().model;
  const auto sigmas = default_ir_sigmas();
  const HypothesisReport r = check_hypotheses(m.spec_F, m.spec_G, sigmas, m.grid_e.spins);
  json pass = json::object();
  for (const auto& [k, v] : r.pass) pass[k] = v;
  json deriv = json::object();
  for (const auto& [k, v] : r.deriv_norms) deriv[k] = num(v);
  ctx.write_json("check-kernels.json",
                 {{"l2_norm_F", num(r.l2_norm_F)}, {"l2_norm_G", num(r.l2_norm_G)},
                  {"ir_integral_F", refined_json(r.ir_integral_i)}, {"ir_integral_G", refined_json(r.ir_integral_ii)},
                  {"ir_slope_F", ir_json(r.ir_slope_iii)}, {"ir_slope_G", ir_json(r.ir_slope_iv)},
                  {"derivative_norms", deriv}, {"pass", pass}, {"all_pass", r.all_pass()},
                  {"family_F", to_string(m.spec_F.family)}, {"family_G", to_string(m.spec_G.family)}});
  Csv csv{{"sigma", "mass_F", "mass_G"}, {}};
  for (std::size_t i = 0; i < r.ir_slope_iii.sigmas.size(); ++i)
    csv.rows.push_back({fmt(r.ir_slope_iii.sigmas[i]), fmt(r.ir_slope_iii.masses[i]),
                        i < r.ir_slope_iv.masses.size() ? fmt(r.ir_slope_iv.masses[i]) : ""});
  ctx.write_csv("ir_masses.csv", csv);
}

json bounds_json(const BoundsReport& b) {
  return {{"C", num(b.C)},
          {"M", num(b.M)},
          {"norm_F", num(b.norm_F)},
          {"norm_G", num(b.norm_G)},
          {"norm_F_continuum", num(b.norm_F_continuum)},
          {"norm_G_continuum", num(b.norm_G_continuum)},
          {"a", num(b.a)},
          {"b", num(b.b)},
          {"a_tilde", num(b.a_tilde)},
          {"b_tilde", num(b.b_tilde)},
          {"g0", num(b.g0)},
          {"g0_infinite", b.g0_infinite},
          {"epsilon", b.epsilon}};
}

void cmd_bounds(Context& ctx) {
  Model& model = ctx.model();
  const BoundsReport b = compute_bounds(model);
  const TotalHamiltonian h = assemble_total(model, ctx.table());
  const auto& run = ctx.config().run;
  const RelativeBoundCheck check = verify_relative_bound(model, h, b, run.samples, run.seed, run.times);
  for (const auto& v : check.violations) ctx.failures.push_back("relative_bound: " + v);
  ctx.write_json("bounds.json",
                 {{"bounds", bounds_json(b)},
                  {"relative_bound",
                   {{"samples", check.samples},
                    {"seed", check.seed},
                    {"empirical_max_ratio", num(check.empirical_max_ratio)},
                    {"inverted_max_ratio", num(check.inverted_max_ratio)},
                    {"number_max_ratio", num(check.number_max_ratio)},
                    {"vacuum_image_norm", num(check.vacuum_image_norm)},
                    {"violations", check.violations},
                    {"passed", check.passed()}}},
                  {"warnings", h.warnings}});
  Csv csv{{"quantity", "value"}, {}};
  const json flat = bounds_json(b);
  for (const auto& [k, v] : flat.items()) csv.rows.push_back({k, v.is_null() ? "inf" : v.dump()});
  ctx.write_csv("bounds.csv", csv);
}

std::string qn_text(const Mode& m) {
  std::ostringstream s;
  s << std::setprecision(17);
  if (std::holds_alternative<LandauQN>(m.qn)) {
    const auto& q = m.landau();
    s << "s=" << q.s << " n=" << q.n << " p1=" << q.p1 << " p3=" << q.p3;
  } else {
    const auto& q = m.momentum();
    s << "p=(" << q.p(0) << " " << q.p(1) << " " << q.p(2) << ") helicity=" << q.helicity;
  }
  return s.str();
}

Csv modes_csv(const Model& model) {
  Csv csv{{"global_index", "species", "local_index", "quantum_numbers", "weight", "energy"}, {}};
  for (Species sp : model.fock.order())
    for (int k = 0; k < model.grids[sp].size(); ++k) {
      const Mode& m = model.grids[sp].modes[static_cast<std::size_t>(k)];
      csv.rows.push_back({std::to_string(model.fock.mode(sp, k)), std::string(species_name(sp)), std::to_string(k), qn_text(m),
                          fmt(m.weight), fmt(mode_energy(model.config, sp, m))});
    }
  return csv;
}

void cmd_assemble(Context& ctx) {
  Model& model = ctx.model();
  const TotalHamiltonian h = assemble_total(model, ctx.table());
  auto triplets = [&](const std::string& name, const SparseOp& m) {
    std::ostringstream s;
    write_triplets(s, m);
    ctx.write_file(name, s.str());
  };
  triplets("h0.triplets", h.h0.matrix);
  triplets("hi.triplets", h.hi.matrix);
  triplets("h.triplets", h.h.matrix);
  const double tol = model.config.tol.hermitian_tol;
  const bool herm = is_hermitian(h.h.matrix, tol);
  if (!herm) ctx.failures.push_back("hermiticity");
  ctx.write_json("assemble.json", {{"dim", model.fock.dim()},
                                   {"modes", model.fock.n_modes()},
                                   {"g", num(h.g)},
                                   {"nnz_h0", h.h0.matrix.nonZeros()},
                                   {"nnz_hi", h.hi.matrix.nonZeros()},
                                   {"nnz_h", h.h.matrix.nonZeros()},
                                   {"hermitian", herm},
                                   {"triplet_format", "first line 'dim nnz', then 'row col re im' sorted by row, col"},
                                   {"warnings", h.warnings}});
  ctx.write_csv("modes.csv", modes_csv(model));
}

double commutator_norm(const SparseOp& a, const SparseOp& b) { return max_abs_entry(commutator(a, b)); }

void cmd_spectrum(Context& ctx) {
  Model& model = ctx.model();
  const auto& cfg = ctx.config();
  const TotalHamiltonian h = assemble_total(model, ctx.table());
  const int k = static_cast<int>(std::min<Eigen::Index>(cfg.spectral.k_low, model.fock.dim()));
  const Eigenpairs pairs = eigensolve(h.h, k, cfg.spectral.solver, cfg.run.seed);
  if (pairs.max_residual > model.config.tol.residual_tol) ctx.failures.push_back("eigen_residual");
  const ChargeOperators q = charge_operators(model.fock);
  const double cq = commutator_norm(h.h.matrix, q.Q.matrix), ce = commutator_norm(h.h.matrix, q.L_e.matrix),
               cm = commutator_norm(h.h.matrix, q.L_mu.matrix);
  if (std::max({cq, ce, cm}) > 1e-12) ctx.failures.push_back("charge_conservation");
  const auto sectors = sectored_solve(model, h.h.matrix);
  json mismatch = nullptr;
  if (model.fock.dim() <= 4096) {
    const double d = sector_union_mismatch(sectors, dense_eigenvalues(h.h.matrix));
    mismatch = num(d);
    if (d > 1e-8) ctx.failures.push_back("sector_union");
  }
  json sec = json::array();
  Csv sector_csv{{"Q", "L_e", "L_mu", "dim", "lowest"}, {}};
  for (const auto& s : sectors) {
    sec.push_back({{"charges", charges_json(s.charges)}, {"dim", s.dim}, {"lowest", num(s.eigenvalues.front())}});
    sector_csv.rows.push_back({std::to_string(s.charges.Q), std::to_string(s.charges.L_e), std::to_string(s.charges.L_mu),
                               std::to_string(s.dim), fmt(s.eigenvalues.front())});
  }
  std::vector<double> values(pairs.values.data(), pairs.values.data() + pairs.values.size());
  ctx.write_json("spectrum.json",
                 {{"solver", cfg.spectral.solver == SolverKind::Dense ? "dense" : "krylov"},
                  {"eigenvalues", values},
                  {"max_residual", num(pairs.max_residual)},
                  {"iterations", pairs.iterations},
                  {"commutator_norms", {{"Q", num(cq)}, {"L_e", num(ce)}, {"L_mu", num(cm)}}},
                  {"sector_union_mismatch", mismatch},
                  {"sectors", sec},
                  {"warnings", h.warnings}});
  Csv csv{{"index", "eigenvalue"}, {}};
  for (std::size_t i = 0; i < values.size(); ++i) csv.rows.push_back({std::to_string(i), fmt(values[i])});
  ctx.write_csv("spectrum.csv", csv);
  ctx.write_csv("sectors.csv", sector_csv);
}

void cmd_ground_state(Context& ctx) {
  Model& model = ctx.model();
  const auto& cfg = ctx.config();
  const SpectralReport r = ground_state_report(model, ctx.table(), model.config.g, cfg.spectral.k_low);
  if (!(r.gap > 0)) ctx.failures.push_back("spectral_gap");
  if (r.E > 1e-12) ctx.failures.push_back("ground_energy_nonpositive");
  json low = json::array();
  Csv low_csv{{"index", "eigenvalue", "Q", "L_e", "L_mu", "vacuum_overlap"}, {}};
  for (std::size_t i = 0; i < r.low_spectrum.size(); ++i) {
    const auto& l = r.low_spectrum[i];
    low.push_back({{"eigenvalue", num(l.eigenvalue)}, {"charges", charges_json(l.charges)},
                   {"vacuum_overlap", num(l.vacuum_overlap)}});
    low_csv.rows.push_back({std::to_string(i), fmt(l.eigenvalue), std::to_string(l.charges.Q),
                            std::to_string(l.charges.L_e), std::to_string(l.charges.L_mu), fmt(l.vacuum_overlap)});
  }
  json dos = json::array();
  Csv dos_csv{{"bin_upper_edge", "count"}, {}};
  for (const auto& [edge, count] : r.density_of_states) {
    dos.push_back({{"upper_edge", num(edge)}, {"count", count}});
    dos_csv.rows.push_back({fmt(edge), std::to_string(count)});
  }
  json body{{"g", num(r.g)},
            {"E", num(r.E)},
            {"gap", num(r.gap)},
            {"vacuum_overlap", num(r.vacuum_overlap)},
            {"unique", r.unique},
            {"max_residual", num(r.max_residual)},
            {"ground_charges", charges_json(r.ground_charges)},
            {"low_spectrum", low},
            {"thresholds", r.thresholds},
            {"density_of_states", dos},
            {"warnings", r.warnings}};
  const BoundsReport b = compute_bounds(model);
  if (!b.g0_infinite && model.config.g > 0) {
    std::vector<double> gs;
    for (double x : cfg.spectral.couplings_over_g0) gs.push_back(x * b.g0);
    const PerturbationCheck p = perturbation_scaling(model, ctx.table(), gs);
    body["perturbation"] = {{"couplings", p.couplings}, {"energies", p.energies}, {"remainders", p.remainders},
                            {"S2", num(p.S2)},          {"exponent", num(p.exponent)}, {"residual", num(p.residual)},
                            {"within_4_pm_0.5", std::abs(p.exponent - 4) <= 0.5}};
    Csv pcsv{{"g", "E", "remainder"}, {}};
    for (std::size_t i = 0; i < p.couplings.size(); ++i)
      pcsv.rows.push_back({fmt(p.couplings[i]), fmt(p.energies[i]), fmt(p.remainders[i])});
    ctx.write_csv("perturbation.csv", pcsv);
  }
  ctx.write_json("ground-state.json", body);
  ctx.write_csv("low_spectrum.csv", low_csv);
  ctx.write_csv("density_of_states.csv", dos_csv);
}

Eigen::VectorXcd seeded_amplitudes(int n, std::mt19937_64& rng) {
  std::normal_distribution<double> normal;
  Eigen::VectorXcd f(n);
  for (int i = 0; i < n; ++i) f(i) = Complex(normal(rng), normal(rng));
  return f;
}

// Returns the per-channel reports; failing identities are recorded on ctx.
json run_commutators(Context& ctx, Csv& csv) {
  Model& model = ctx.model();
  const InteractionParts parts = assemble_interaction(model, ctx.table());
  std::mt19937_64 rng(ctx.config().run.seed);
  json out = json::array();
  for (Species sp : kAllSpecies)
    for (bool dagger : {false, true}) {
      const Eigen::VectorXcd f = seeded_amplitudes(model.fock.count(sp), rng);
      const CommutatorReport rep = commutator_identities(model, ctx.table(), parts, sp, dagger, f);
      json checks = json::array();
      for (const auto& c : rep.checks) {
        checks.push_back({{"name", c.name}, {"vanishing", c.vanishing}, {"max_deviation", num(c.max_deviation)},
                          {"tolerance", c.tolerance}, {"exact", c.exact}, {"passed", c.passed}});
        csv.rows.push_back({rep.channel_name(), c.name, c.vanishing ? "1" : "0", fmt(c.max_deviation), fmt(c.tolerance),
                            c.passed ? "1" : "0"});
        if (!c.passed) ctx.failures.push_back("commutator " + c.name);
      }
      out.push_back({{"channel", rep.channel_name()}, {"checks", checks}, {"all_passed", rep.all_passed()}});
    }
  return out;
}

const Csv kCommutatorHeader{{"channel", "identity", "vanishing", "max_deviation", "tolerance", "passed"}, {}};

void cmd_commutators(Context& ctx) {
  Csv csv = kCommutatorHeader;
  json reports = run_commutators(ctx, csv);
  ctx.write_json("commutators.json", {{"channels", reports}, {"passed", ctx.failures.empty()}});
  ctx.write_csv("commutators.csv", csv);
}

TestModeFunction negative_control(TestModeFunction f) {
  if (is_landau(f.channel)) {
    f.center_p3 = 0.0;  // support straddles p3 = 0
  } else {
    f.axis = Momentum(0, 0, 1);  // cap around the p3 axis
  }
  return f;
}

json fit_json(const DecayFitReport& r) {
  json pts = json::array();
  for (const auto& p : r.points)
    pts.push_back({{"t", p.t}, {"I", num(p.I)}, {"error", num(p.error)}, {"underresolved", p.underresolved}});
  return {{"channel", to_string(r.channel)},
          {"admissible", r.admissible},
          {"fitted_exponent", num(r.fitted_exponent)},
          {"fit_residual", num(r.fit_residual)},
          {"gate_passed", r.gate_passed},
          {"passed", r.passed},
          {"exponent_gate", kDecayExponentGate},
          {"residual_gate", kDecayResidualGate},
          {"note", r.note},
          {"points", pts}};
}

Csv fit_csv(const DecayFitReport& r) {
  Csv csv{{"t", "I"}, {}};
  for (const auto& p : r.points) csv.rows.push_back({fmt(p.t), fmt(p.I)});
  return csv;
}

void cmd_decay_rate(Context& ctx) {
  Csv ccsv = kCommutatorHeader;
  json comm = run_commutators(ctx, ccsv);
  ctx.write_csv("commutators.csv", ccsv);
  if (!ctx.failures.empty()) {
    ctx.write_json("decay-rate.json", {{"commutators", comm}, {"skipped", "commutator identities failed"}});
    return;
  }
  const auto& d = ctx.config().decay;
  const auto times = log_time_grid(d.t_min, d.t_max, d.per_decade);
  const DecayFitReport main = fit_decay(ctx.model().config, d.test, times, d.orders);
  if (!main.passed) ctx.failures.push_back("decay_fit " + to_string(main.channel));
  json body{{"commutators", comm}, {"fit", fit_json(main)}};
  ctx.write_csv("decay.csv", fit_csv(main));
  if (d.negative_control) {
    const DecayFitReport control = fit_decay(ctx.model().config, negative_control(d.test), times, d.orders);
    if (control.gate_passed) ctx.failures.push_back("negative_control_passed_gate");
    body["negative_control"] = fit_json(control);
    body["negative_control_rejected"] = !control.gate_passed;
    ctx.write_csv("decay_control.csv", fit_csv(control));
  }
  ctx.write_json("decay-rate.json", body);
}

}  // namespace

const std::vector<std::string>& cli_commands() {
  static const std::vector<std::string> names{"selftest",    "check-kernels", "bounds",      "assemble",
                                              "spectrum",    "ground-state",  "commutators", "decay-rate"};
  return names;
}

int run(const CliOptions& options, std::ostream& log) {
  try {
    const auto& names = cli_commands();
    if (std::find(names.begin(), names.end(), options.command) == names.end())
      throw ConfigError("unknown command '" + options.command + "'");
    if (options.threads < 1) throw ConfigError("--threads must be at least 1");
    set_thread_count(options.threads);
    RunConfig config;
    if (!options.config_path.empty()) config = load_config(options.config_path);
    if (options.seed) config.run.seed = *options.seed;
    validate(config);
    std::error_code ec;
    fs::create_directories(options.out_dir, ec);
    if (ec || !fs::is_directory(options.out_dir)) throw ConfigError("cannot create output directory " + options.out_dir);

    Context ctx(options, std::move(config), log);
    const std::string& c = options.command;
    if (c == "selftest") cmd_selftest(ctx);
    else if (c == "check-kernels") cmd_check_kernels(ctx);
    else if (c == "bounds") cmd_bounds(ctx);
    else if (c == "assemble") cmd_assemble(ctx);
    else if (c == "spectrum") cmd_spectrum(ctx);
    else if (c == "ground-state") cmd_ground_state(ctx);
    else if (c == "commutators") cmd_commutators(ctx);
    else cmd_decay_rate(ctx);
    ctx.write_manifest();
    if (!ctx.failures.empty()) {
      for (const auto& f : ctx.failures) log << "assertion failed: " << f << "\n";
      return kExitAssertion;
    }
    return kExitOk;
  } catch (const ConfigError& e) {
    log << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const ConvergenceError& e) {
    log << "convergence error: " << e.what() << "\n";
    return kExitConvergence;
  } catch (const InvariantError& e) {
    log << "assertion failed: " << e.what() << "\n";
    return kExitAssertion;
  } catch (const std::invalid_argument& e) {
    log << "config error: " << e.what() << "\n";
    return kExitConfig;
  }
}

}  // namespace mudecay
