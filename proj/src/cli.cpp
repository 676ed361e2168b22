#include "superact/cli.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <mutex>
#include <sstream>
#include <stdexcept>
#include <thread>
#include <variant>

#include <CLI11.hpp>
#include <json.hpp>

#include "superact/certify.hpp"
#include "superact/coincidence.hpp"
#include "superact/distillation.hpp"
#include "superact/errors.hpp"
#include "superact/format.hpp"
#include "superact/ppt_mixer.hpp"
#include "superact/sampling.hpp"
#include "superact/sle.hpp"
#include "superact/state_io.hpp"
#include "superact/thresholds.hpp"

namespace superact {

using ojson = nlohmann::ordered_json;

namespace {

// Raised for anything the user can fix; maps to exit status 2.
class UsageError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

double parse_number(const std::string& text, const std::string& what) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(text, &used);
  } catch (const std::exception&) {
    throw UsageError(what + ": \"" + text + "\" is not a number");
  }
  if (used != text.size() || !std::isfinite(v)) throw UsageError(what + ": \"" + text + "\" is not a number");
  return v;
}

std::uint64_t parse_count(const std::string& text, const std::string& what) {
  if (text.empty() || text.find_first_not_of("0123456789") != std::string::npos) {
    throw UsageError(what + ": \"" + text + "\" is not a nonnegative integer");
  }
  try {
    return std::stoull(text);
  } catch (const std::exception&) {
    throw UsageError(what + ": \"" + text + "\" is out of range");
  }
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream in(s);
  while (std::getline(in, cur, sep)) out.push_back(cur);
  if (!s.empty() && s.back() == sep) out.emplace_back();
  return out;
}

std::map<std::string, std::string> parse_key_values(const std::vector<std::string>& tokens) {
  std::map<std::string, std::string> kv;
  for (const auto& t : tokens) {
    const auto eq = t.find('=');
    if (eq == std::string::npos || eq == 0) throw UsageError("expected key=value, got \"" + t + "\"");
    kv[t.substr(0, eq)] = t.substr(eq + 1);
  }
  return kv;
}

// Tabular output shared by the csv and json renderers.
using Cell = std::variant<std::monostate, double, long long, std::string, bool>;

struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;

  std::string csv() const {
    std::ostringstream os;
    for (std::size_t i = 0; i < columns.size(); ++i) os << (i ? "," : "") << columns[i];
    os << '\n';
    for (const auto& row : rows) {
      for (std::size_t i = 0; i < row.size(); ++i) {
        if (i) os << ',';
        std::visit(
            [&](const auto& v) {
              using T = std::decay_t<decltype(v)>;
              if constexpr (std::is_same_v<T, double>) {
                os << format_double(v);
              } else if constexpr (std::is_same_v<T, long long>) {
                os << v;
              } else if constexpr (std::is_same_v<T, std::string>) {
                os << v;
              } else if constexpr (std::is_same_v<T, bool>) {
                os << (v ? "true" : "false");
              }
            },
            row[i]);
      }
      os << '\n';
    }
    return os.str();
  }

  std::string json() const {
    ojson arr = ojson::array();
    for (const auto& row : rows) {
      ojson obj = ojson::object();
      for (std::size_t i = 0; i < row.size(); ++i) {
        std::visit(
            [&](const auto& v) {
              using T = std::decay_t<decltype(v)>;
              if constexpr (std::is_same_v<T, std::monostate>) {
                obj[columns[i]] = nullptr;
              } else {
                obj[columns[i]] = v;
              }
            },
            row[i]);
      }
      arr.push_back(std::move(obj));
    }
    return arr.dump(2) + "\n";
  }

  std::string render(OutputFormat f) const { return f == OutputFormat::Csv ? csv() : json(); }
};

OutputFormat parse_format(const std::string& s) {
  if (s == "csv") return OutputFormat::Csv;
  if (s == "json") return OutputFormat::Json;
  throw UsageError("format must be csv or json, got \"" + s + "\"");
}

const SubsystemPartition& pair_for_measured(std::size_t measured) {
  static const SubsystemPartition parts[3] = {SubsystemPartition::keep(3, {1, 2}),
                                              SubsystemPartition::keep(3, {0, 2}),
                                              SubsystemPartition::keep(3, {0, 1})};
  return parts[measured];
}

ojson certify_report(const DensityMatrix& rho, const std::string& label, const RunConfig& cfg) {
  if (rho.n_qubits() != 3) throw UsageError("certify needs a three-qubit state, got " + std::to_string(rho.n_qubits()));
  ojson rep;
  rep["state"] = label;
  rep["n_qubits"] = rho.n_qubits();
  const XShapeView view = x_shape_view(rho);
  const bool x_shaped = view.max_off_pattern_magnitude <= 1e-8;
  rep["x_shaped"] = x_shaped;
  rep["x_leakage"] = view.max_off_pattern_magnitude;
  if (x_shaped) {
    rep["gme_concurrence"] = gme_concurrence_x(rho);
    rep["concurrence_terms"] = gme_concurrence_terms(rho);
  } else {
    rep["gme_concurrence"] = nullptr;
    rep["concurrence_terms"] = nullptr;
  }
  PptMixerConfig pc;
  pc.feasibility_tolerance = cfg.feasibility_tolerance;
  const WitnessResult w = ppt_mixer_witness(rho, pc);
  rep["ppt_mixer"] = {{"optimal_value", w.optimal_value},
                      {"sign", to_string(w.sign)},
                      {"converged", w.converged},
                      {"iterations", w.iterations},
                      {"certificate_residuals", w.certificate_residuals},
                      {"primal_residual", w.primal_residual},
                      {"dual_residual", w.dual_residual}};
  ojson sle = ojson::array();
  bool sle_found = false;
  for (std::size_t measured = 3; measured-- > 0;) {
    for (auto q : {SleQuantifier::Negativity, SleQuantifier::MinEigenvalueAfterPT}) {
      const SLEResult r = sle_quantify(rho, pair_for_measured(measured), q);
      if (q == SleQuantifier::Negativity && r.value > 0.0) sle_found = true;
      sle.push_back({{"measured_qubit", measured},
                     {"quantifier", to_string(q)},
                     {"value", r.value},
                     {"theta", r.theta},
                     {"phi", r.phi}});
    }
  }
  rep["sle"] = std::move(sle);
  rep["sle_certified"] = sle_found;
  rep["ghz_witness"] = ghz_witness_expectation(rho);
  rep["w_witness"] = w_witness_expectation(rho);
  return rep;
}

Table certify_table(const ojson& rep) {
  Table t;
  t.columns = {"state", "gme_concurrence", "ppt_value", "ppt_sign", "sle_negativity", "sle_min_eig",
               "ghz_witness", "w_witness"};
  Cell conc = std::monostate{};
  if (!rep["gme_concurrence"].is_null()) conc = rep["gme_concurrence"].get<double>();
  // The first two SLE entries belong to the pair (0, 1).
  t.rows.push_back({rep["state"].get<std::string>(), conc, rep["ppt_mixer"]["optimal_value"].get<double>(),
                    rep["ppt_mixer"]["sign"].get<std::string>(), rep["sle"][0]["value"].get<double>(),
                    rep["sle"][1]["value"].get<double>(), rep["ghz_witness"].get<double>(),
                    rep["w_witness"].get<double>()});
  return t;
}

std::string render_record(const ojson& rep, const Table& flat, const RunConfig& cfg) {
  if (cfg.format.value_or(OutputFormat::Json) == OutputFormat::Csv) return flat.csv();
  return rep.dump(2) + "\n";
}

}  // namespace

std::vector<double> GridSpec::points() const {
  std::vector<double> p(static_cast<std::size_t>(count));
  for (int i = 0; i < count; ++i) {
    p[static_cast<std::size_t>(i)] = count == 1 ? start : start + (stop - start) * i / (count - 1);
  }
  if (count > 1) p.back() = stop;
  return p;
}

GridSpec parse_grid(const std::string& text) {
  const auto parts = split(text, ':');
  if (parts.size() != 3) throw UsageError("grid must look like start:stop:count, got \"" + text + "\"");
  GridSpec g;
  g.start = parse_number(parts[0], "grid start");
  g.stop = parse_number(parts[1], "grid stop");
  const auto n = parse_count(parts[2], "grid count");
  if (n < 1 || n > 1000000) throw UsageError("grid count must be between 1 and 1000000");
  g.count = static_cast<int>(n);
  return g;
}

void RunConfig::validate() const {
  if (grid.count < 1) throw UsageError("grid count must be at least 1");
  if (!(grid.start >= 0.0 && grid.start <= 1.0 && grid.stop >= 0.0 && grid.stop <= 1.0)) {
    throw UsageError("grid endpoints must lie in [0, 1]");
  }
  if (threshold_tolerance < 0.0 || !std::isfinite(threshold_tolerance)) {
    throw UsageError("threshold tolerance must be positive");
  }
  if (!(feasibility_tolerance > 0.0)) throw UsageError("feasibility tolerance must be positive");
  if (shots == 0) throw UsageError("shots must be positive");
  if (protocol != "pbs" && protocol != "cnot") throw UsageError("protocol must be pbs or cnot");
}

RunConfig load_config(const std::string& text) {
  ojson doc;
  try {
    doc = ojson::parse(text);
  } catch (const ojson::parse_error& e) {
    throw UsageError(std::string("malformed config: ") + e.what());
  }
  if (!doc.is_object()) throw UsageError("config must be a JSON object");
  RunConfig c;
  try {
    for (const auto& [key, v] : doc.items()) {
      if (key == "subcommand") {
        c.subcommand = v.get<std::string>();
      } else if (key == "inputs") {
        c.inputs = v.get<std::vector<std::string>>();
      } else if (key == "grid") {
        c.grid.start = v.at("start").get<double>();
        c.grid.stop = v.at("stop").get<double>();
        c.grid.count = v.at("count").get<int>();
      } else if (key == "tolerances") {
        if (v.contains("threshold")) c.threshold_tolerance = v["threshold"].get<double>();
        if (v.contains("feasibility")) c.feasibility_tolerance = v["feasibility"].get<double>();
      } else if (key == "seed") {
        c.seed = v.get<std::uint64_t>();
      } else if (key == "output") {
        c.output = v.get<std::string>();
      } else if (key == "format") {
        c.format = parse_format(v.get<std::string>());
      } else if (key == "protocol") {
        c.protocol = v.get<std::string>();
      } else if (key == "localize") {
        c.localize = v.get<std::string>();
      } else if (key == "certify") {
        c.certify_output = v.get<bool>();
      } else if (key == "curves") {
        c.curves = v.get<bool>();
      } else if (key == "thresholds") {
        c.thresholds = v.get<std::vector<std::string>>();
      } else if (key == "certifiers") {
        c.certifiers = v.get<std::string>();
      } else if (key == "schedule_p") {
        c.schedule_p = v.get<double>();
      } else if (key == "sample_setting") {
        c.sample_setting = v.get<std::string>();
      } else if (key == "shots") {
        c.shots = v.get<std::uint64_t>();
      } else if (key == "fidelity") {
        c.fidelity = v.get<bool>();
      } else {
        throw UsageError("unknown config key \"" + key + "\"");
      }
    }
  } catch (const ojson::exception& e) {
    throw UsageError(std::string("config has a value of the wrong type: ") + e.what());
  }
  c.validate();
  return c;
}

DensityMatrix parse_state_spec(const std::string& spec) {
  const auto colon = spec.find(':');
  const std::string kind = spec.substr(0, colon);
  const std::string args = colon == std::string::npos ? "" : spec.substr(colon + 1);
  auto params = [&](std::size_t n) {
    const auto parts = split(args, ',');
    if (colon == std::string::npos || parts.size() != n) {
      throw UsageError("state spec \"" + spec + "\" needs " + std::to_string(n) + " parameter(s)");
    }
    std::vector<double> v;
    for (const auto& p : parts) v.push_back(parse_number(p, "state parameter"));
    return v;
  };
  try {
    if (kind == "noisy-ghz") return noisy_ghz(params(1)[0]);
    if (kind == "noisy-w") return noisy_w(params(1)[0]);
    if (kind == "noise-model") {
      const auto v = params(3);
      return noise_model_state(v[0], v[1], v[2]);
    }
  } catch (const UsageError&) {
    throw;
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  try {
    return read_density_matrix(spec);
  } catch (const std::invalid_argument& e) {
    throw UsageError(spec + ": " + e.what());
  }
}

unsigned worker_count() {
  unsigned n = std::max(1U, std::thread::hardware_concurrency());
  if (const char* env = std::getenv("SUPERACT_THREADS")) {
    try {
      const auto cap = parse_count(env, "SUPERACT_THREADS");
      if (cap >= 1) n = static_cast<unsigned>(std::min<std::uint64_t>(cap, 1024));
    } catch (const std::exception&) {
    }
  }
  return n;
}

std::vector<std::string> parallel_map(std::size_t n, const std::function<std::string(std::size_t)>& f) {
  std::vector<std::string> out(n);
  std::vector<std::exception_ptr> errors(n);
  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t i = next++; i < n; i = next++) {
      try {
        out[i] = f(i);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  const std::size_t workers = std::min<std::size_t>(worker_count(), n);
  if (workers <= 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(work);
    for (auto& t : pool) t.join();
  }
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
  return out;
}

std::string cmd_certify(const RunConfig& cfg) {
  if (cfg.inputs.size() != 1) throw UsageError("certify takes exactly one state");
  const DensityMatrix rho = parse_state_spec(cfg.inputs[0]);
  const ojson rep = certify_report(rho, cfg.inputs[0], cfg);
  return render_record(rep, certify_table(rep), cfg);
}

std::string cmd_distill(const RunConfig& cfg) {
  if (cfg.inputs.empty() || cfg.inputs.size() > 2) throw UsageError("distill takes one or two states");
  const std::string spec2 = cfg.inputs.size() == 2 ? cfg.inputs[1] : cfg.inputs[0];
  const DensityMatrix rho1 = parse_state_spec(cfg.inputs[0]);
  const DensityMatrix rho2 = parse_state_spec(spec2);
  if (rho1.n_qubits() != rho2.n_qubits()) throw UsageError("distill inputs have different qubit counts");
  if (cfg.protocol == "pbs" && rho1.n_qubits() != 3) throw UsageError("the pbs protocol needs three-qubit states");
  if (cfg.protocol != "pbs" && cfg.protocol != "cnot") throw UsageError("protocol must be pbs or cnot");

  const DistillationOutcome out =
      cfg.protocol == "pbs" ? distill_tripartite(rho1, rho2) : distill_cnot(rho1, rho2);
  ojson rep;
  rep["protocol"] = cfg.protocol;
  rep["inputs"] = {cfg.inputs[0], spec2};
  rep["success_probability"] = out.success_probability;
  ojson branches = ojson::object();
  for (const auto& [label, weight] : out.parity_branch_weights) branches[label] = weight;
  rep["branch_weights"] = std::move(branches);
  const bool three = out.state.n_qubits() == 3;
  rep["fidelity_ghz"] = three ? ojson(fidelity_with_pure(out.state, make_ghz(0, 1))) : ojson(nullptr);
  rep["fidelity_w"] = three ? ojson(fidelity_with_pure(out.state, make_w())) : ojson(nullptr);
  rep["ghz_witness"] = three ? ojson(ghz_witness_expectation(out.state)) : ojson(nullptr);
  rep["w_witness"] = three ? ojson(w_witness_expectation(out.state)) : ojson(nullptr);

  Cell epr = std::monostate{};
  if (!cfg.localize.empty()) {
    if (!three) throw UsageError("--localize needs a three-qubit output");
    const auto parts = split(cfg.localize, ':');
    if (parts.size() < 2 || parts.size() > 3) throw UsageError("--localize expects BASIS:QUBIT[:OUTCOME]");
    LocalizationBasis basis;
    if (parts[0] == "X" || parts[0] == "x") {
      basis = LocalizationBasis::X;
    } else if (parts[0] == "Z" || parts[0] == "z" || parts[0] == "computational") {
      basis = LocalizationBasis::Computational;
    } else {
      throw UsageError("localization basis must be X or Z");
    }
    const auto qubit = parse_count(parts[1], "localization qubit");
    const auto outcome = parts.size() == 3 ? parse_count(parts[2], "localization outcome") : 0;
    if (qubit > 2 || outcome > 1) throw UsageError("localization qubit must be 0..2 and outcome 0 or 1");
    Projection loc = localize(out.state, qubit, basis, static_cast<int>(outcome));
    // A computational-basis outcome leaves |01>+|10>-type correlations; X on
    // the second qubit maps them onto Phi+.
    if (basis == LocalizationBasis::Computational) loc.state = apply_local(loc.state, pauli_x(), 1);
    const double f = fidelity_with_pure(loc.state, bell_phi_plus());
    epr = f;
    rep["localization"] = {{"basis", basis == LocalizationBasis::X ? "X" : "Z"},
                           {"qubit", qubit},
                           {"outcome", outcome},
                           {"weight", loc.weight},
                           {"epr_fidelity", f},
                           {"negativity", negativity(loc.state, SubsystemPartition::bipartite(2, {1}))}};
  }
  if (cfg.certify_output) rep["certify"] = certify_report(out.state, "distilled", cfg);

  Table t;
  t.columns = {"protocol", "success_probability", "fidelity_ghz", "fidelity_w", "ghz_witness", "w_witness",
               "epr_fidelity"};
  auto num = [&](const char* key) -> Cell {
    return rep[key].is_null() ? Cell{std::monostate{}} : Cell{rep[key].get<double>()};
  };
  t.rows.push_back({cfg.protocol, out.success_probability, num("fidelity_ghz"), num("fidelity_w"),
                    num("ghz_witness"), num("w_witness"), epr});
  return render_record(rep, t, cfg);
}

namespace {

DensityMatrix family_state(const std::string& family, double p) {
  const auto colon = family.find(':');
  const std::string kind = family.substr(0, colon);
  if (kind == "noisy-ghz") return noisy_ghz(p);
  if (kind == "noisy-w") return noisy_w(p);
  if (kind == "distilled-ghz") return distill_tripartite(noisy_ghz(p), noisy_ghz(p)).state;
  if (kind == "distilled-w") return distill_cnot(noisy_w(p), noisy_w(p)).state;
  if (kind == "noise-model") {
    const auto parts = colon == std::string::npos ? std::vector<std::string>{} : split(family.substr(colon + 1), ',');
    if (parts.size() != 2) throw UsageError("noise-model family needs q,r (noise-model:q,r)");
    return noise_model_state(p, parse_number(parts[0], "q"), parse_number(parts[1], "r"));
  }
  throw UsageError("unknown certifier family \"" + family + "\"");
}

}  // namespace

std::string cmd_sweep(const RunConfig& cfg) {
  const int modes = (cfg.curves ? 1 : 0) + (cfg.thresholds.empty() ? 0 : 1) + (cfg.certifiers.empty() ? 0 : 1);
  if (modes != 1) throw UsageError("sweep needs exactly one of --curves, --thresholds, --certifiers");
  const OutputFormat fmt = cfg.format.value_or(OutputFormat::Csv);

  if (cfg.curves) {
    Table t;
    t.columns = {"p", "F_initial", "F1", "F2"};
    for (const auto& r : fidelity_curves(cfg.grid.points())) t.rows.push_back({r.p, r.f_initial, r.f1, r.f2});
    return t.render(fmt);
  }

  if (!cfg.thresholds.empty()) {
    std::vector<Property> props;
    for (const auto& name : cfg.thresholds) {
      if (name == "all") {
        props = all_properties();
        break;
      }
      try {
        props.push_back(parse_property(name));
      } catch (const std::invalid_argument& e) {
        throw UsageError(e.what());
      }
    }
    std::vector<ThresholdReport> reports(props.size());
    parallel_map(props.size(), [&](std::size_t i) {
      const double tol = cfg.threshold_tolerance > 0.0 ? cfg.threshold_tolerance : default_tolerance(props[i]);
      reports[i] = find_threshold(props[i], default_range(props[i]), tol);
      return std::string();
    });
    Table t;
    t.columns = {"property", "crossing_p", "bracket_width", "evaluations"};
    for (const auto& r : reports) {
      t.rows.push_back({std::string(property_name(r.property)), r.crossing_p, r.bracket_width,
                        static_cast<long long>(r.evaluations)});
    }
    return t.render(fmt);
  }

  family_state(cfg.certifiers, 0.5);  // rejects unknown families before any work
  const auto grid = cfg.grid.points();
  std::vector<std::vector<Cell>> rows(grid.size());
  parallel_map(grid.size(), [&](std::size_t i) {
    const double p = grid[i];
    const DensityMatrix rho = family_state(cfg.certifiers, p);
    Cell conc = std::monostate{};
    if (x_shape_view(rho).max_off_pattern_magnitude <= 1e-8) conc = gme_concurrence_x(rho);
    PptMixerConfig pc;
    pc.feasibility_tolerance = cfg.feasibility_tolerance;
    const auto w = ppt_mixer_witness(rho, pc);
    const auto& pair = pair_for_measured(2);
    rows[i] = {p,
               conc,
               w.optimal_value,
               std::string(to_string(w.sign)),
               sle_quantify(rho, pair, SleQuantifier::Negativity).value,
               sle_quantify(rho, pair, SleQuantifier::MinEigenvalueAfterPT).value,
               ghz_witness_expectation(rho),
               w_witness_expectation(rho)};
    return std::string();
  });
  Table t;
  t.columns = {"p", "gme_concurrence", "ppt_value", "ppt_sign", "sle_negativity", "sle_min_eig", "ghz_witness",
               "w_witness"};
  t.rows = std::move(rows);
  return t.render(fmt);
}

std::string cmd_coincidence(const RunConfig& cfg) {
  const bool sampling = !cfg.sample_setting.empty() || cfg.fidelity;
  if (cfg.schedule_p && sampling) throw UsageError("use either --schedule or --sample, not both");
  const OutputFormat fmt = cfg.format.value_or(sampling ? OutputFormat::Json : OutputFormat::Csv);

  if (cfg.schedule_p) {
    const auto s = preparation_schedule(*cfg.schedule_p);
    if (fmt == OutputFormat::Csv) return schedule_csv(s);
    Table t;
    t.columns = {"component", "m1", "m2", "m3", "probability", "herald_efficiency"};
    for (const auto& r : s.rows) {
      t.rows.push_back({r.label, std::string(r.m1 ? "in" : "out"), std::string(r.m2 ? "in" : "out"),
                        std::string(r.m3 ? "in" : "out"), r.probability, r.herald_efficiency});
    }
    return t.json();
  }

  if (sampling) {
    const std::string spec = cfg.inputs.empty() ? "noisy-ghz:1" : cfg.inputs[0];
    if (cfg.inputs.size() > 1) throw UsageError("--state takes a single state");
    const DensityMatrix rho = parse_state_spec(spec);
    if (!cfg.fidelity) {
      std::vector<Observable> setting;
      try {
        setting = parse_setting(cfg.sample_setting);
      } catch (const std::invalid_argument& e) {
        throw UsageError(e.what());
      }
      if (setting.size() != rho.n_qubits()) throw UsageError("setting length does not match the state");
      return sample_counts(rho, setting, cfg.shots, cfg.seed).to_json() + "\n";
    }
    // Fidelity estimate from the settings of the witness decomposition.
    const bool ghz = rho.n_qubits() == 3;
    if (!ghz && rho.n_qubits() != 2) throw UsageError("--fidelity needs a two- or three-qubit state");
    const std::vector<std::pair<std::string, std::string>> plan =
        ghz ? std::vector<std::pair<std::string, std::string>>{{"pop", "zzz"}, {"m0", "m0m0m0"}, {"m1", "m1m1m1"}, {"m2", "m2m2m2"}}
            : std::vector<std::pair<std::string, std::string>>{{"pop", "zz"}, {"xx", "xx"}, {"yy", "yy"}};
    std::map<std::string, double> values;
    ojson hists = ojson::array();
    double variance = 0.0;
    const double n = static_cast<double>(cfg.shots);
    for (std::size_t k = 0; k < plan.size(); ++k) {
      const auto h = sample_counts(rho, parse_setting(plan[k].second), cfg.shots, cfg.seed + k);
      const bool pop = plan[k].first == "pop";
      const double v = pop ? population(h) : correlation(h);
      values[plan[k].first] = v;
      const double weight = pop ? 0.5 : (ghz ? 1.0 / 6.0 : 0.25);
      variance += weight * weight * (pop ? v * (1.0 - v) : 1.0 - v * v) / n;
      hists.push_back(ojson::parse(h.to_json()));
    }
    const auto target = ghz ? FidelityTarget::GHZ3 : FidelityTarget::EPR;
    ojson rep;
    rep["state"] = spec;
    rep["shots_per_setting"] = cfg.shots;
    rep["seed"] = cfg.seed;
    rep["expectations"] = values;
    rep["fidelity_estimate"] = fidelity_from_settings(values, target);
    rep["standard_error"] = std::sqrt(variance);
    rep["exact_fidelity"] = fidelity_with_pure(rho, ghz ? make_ghz(0, 1) : bell_phi_plus());
    rep["histograms"] = std::move(hists);
    return rep.dump(2) + "\n";
  }

  const auto report = enumerate_same_order_events();
  if (fmt == OutputFormat::Csv) return enumeration_csv(report);
  Table t;
  t.columns = {"class", "events", "passing", "ideal"};
  for (const auto& c : report.classes) {
    t.rows.push_back({c.label, static_cast<long long>(c.events), static_cast<long long>(c.passing), c.ideal});
  }
  return t.json();
}

void write_output(const std::string& path, const std::string& content) {
  if (path.empty() || path == "-") {
    std::cout << content << std::flush;
    return;
  }
  const std::filesystem::path target(path);
  std::filesystem::path tmp = target;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + tmp.string());
    out << content;
    out.flush();
    if (!out) {
      out.close();
      std::filesystem::remove(tmp);
      throw std::runtime_error("failed writing " + tmp.string());
    }
  }
  std::error_code ec;
  std::filesystem::rename(tmp, target, ec);
  if (ec) {
    std::filesystem::remove(tmp);
    throw std::runtime_error("cannot move output into place: " + ec.message());
  }
}

int run_cli(int argc, const char* const* argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  RunConfig cfg;
  try {
    // --config is read first so explicit flags override the file.
    for (std::size_t i = 0; i < args.size(); ++i) {
      std::string path;
      if (args[i] == "--config" && i + 1 < args.size()) {
        path = args[i + 1];
      } else if (args[i].rfind("--config=", 0) == 0) {
        path = args[i].substr(9);
      } else {
        continue;
      }
      std::ifstream in(path);
      if (!in) throw UsageError("cannot open config " + path);
      std::ostringstream buf;
      buf << in.rdbuf();
      cfg = load_config(buf.str());
    }
    static const char* kSubcommands[] = {"certify", "distill", "sweep", "coincidence"};
    const bool has_sub = std::any_of(args.begin(), args.end(), [](const std::string& a) {
      return std::find(std::begin(kSubcommands), std::end(kSubcommands), a) != std::end(kSubcommands);
    });
    if (!has_sub && !cfg.subcommand.empty()) args.insert(args.begin(), cfg.subcommand);
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }

  CLI::App app{"Density-matrix engine for tripartite entanglement distillation and certification", "superact"};
  app.require_subcommand(1);
  app.fallthrough();
  std::string config_path, format, grid_text, curves_text, thresholds_text, schedule_text;
  std::vector<std::string> sample_tokens;
  app.add_option("--config", config_path, "RunConfig JSON file; flags given on the command line win");
  app.add_option("-o,--output", cfg.output, "output file (default: stdout)");
  app.add_option("--format", format, "csv or json");
  app.add_option("--seed", cfg.seed, "RNG seed");
  app.add_option("--feasibility-tolerance", cfg.feasibility_tolerance, "SDP feasibility tolerance");

  auto* certify = app.add_subcommand("certify", "certify GME and SLE of a three-qubit state");
  certify->add_option("state", cfg.inputs, "noisy-ghz:p | noisy-w:p | noise-model:p,q,r | state.json");

  auto* distill = app.add_subcommand("distill", "run a two-copy distillation protocol");
  distill->add_option("states", cfg.inputs, "one state (used twice) or two states");
  distill->add_option("--protocol", cfg.protocol, "pbs or cnot");
  distill->add_option("--localize", cfg.localize, "BASIS:QUBIT[:OUTCOME], e.g. X:2");
  distill->add_flag("--certify", cfg.certify_output, "certify the distilled state");

  auto* sweep = app.add_subcommand("sweep", "fidelity curves, threshold table or certifier values over a grid");
  sweep->add_option("--curves", curves_text, "fidelity curves over start:stop:count");
  sweep->add_option("--thresholds", thresholds_text, "all, or comma-separated property names");
  sweep->add_option("--tolerance", cfg.threshold_tolerance, "bisection tolerance (default per property)");
  sweep->add_option("--certifiers", cfg.certifiers,
                    "noisy-ghz | noisy-w | distilled-ghz | distilled-w | noise-model:q,r");
  sweep->add_option("--grid", grid_text, "grid for --certifiers, start:stop:count");

  auto* coinc = app.add_subcommand("coincidence", "coincidence filtering, preparation schedule, sampling");
  coinc->add_option("--schedule", schedule_text, "p=VALUE: preparation schedule");
  coinc->add_option("--sample", sample_tokens, "setting=zzz shots=N seed=S")->expected(1, 3);
  coinc->add_option("--state", cfg.inputs, "state to sample (default noisy-ghz:1)");
  coinc->add_flag("--fidelity", cfg.fidelity, "estimate the fidelity from sampled witness settings");

  try {
    std::vector<std::string> rev(args.rbegin(), args.rend());
    app.parse(rev);
  } catch (const CLI::CallForHelp&) {
    std::cout << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }

  try {
    if (!format.empty()) cfg.format = parse_format(format);
    if (!grid_text.empty()) cfg.grid = parse_grid(grid_text);
    if (!curves_text.empty()) {
      cfg.curves = true;
      cfg.grid = parse_grid(curves_text);
    }
    if (!thresholds_text.empty()) cfg.thresholds = split(thresholds_text, ',');
    if (!schedule_text.empty()) {
      const auto kv = parse_key_values({schedule_text});
      if (kv.size() != 1 || !kv.count("p")) throw UsageError("--schedule expects p=VALUE");
      cfg.schedule_p = parse_number(kv.at("p"), "schedule p");
    }
    if (!sample_tokens.empty()) {
      for (const auto& [k, v] : parse_key_values(sample_tokens)) {
        if (k == "setting") {
          cfg.sample_setting = v;
        } else if (k == "shots") {
          cfg.shots = parse_count(v, "shots");
        } else if (k == "seed") {
          cfg.seed = parse_count(v, "seed");
        } else {
          throw UsageError("unknown --sample key \"" + k + "\"");
        }
      }
      if (cfg.sample_setting.empty() && !cfg.fidelity) throw UsageError("--sample needs setting=...");
    }
    cfg.validate();

    std::string text;
    if (certify->parsed()) {
      text = cmd_certify(cfg);
    } else if (distill->parsed()) {
      text = cmd_distill(cfg);
    } else if (sweep->parsed()) {
      text = cmd_sweep(cfg);
    } else {
      text = cmd_coincidence(cfg);
    }
    write_output(cfg.output, text);
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}

}  // namespace superact
