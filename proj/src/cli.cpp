#include "witnesskit/cli.hpp"

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <locale>
#include <ostream>
#include <sstream>

namespace witnesskit::cli {
namespace {

std::string num(double v) {
  if (std::isnan(v)) return "nan";
  std::ostringstream s;
  s.imbue(std::locale::classic());
  s << std::setprecision(12) << v;
  return s.str();
}

const char* flag(bool b) { return b ? "true" : "false"; }

struct MeasureRow {
  std::string d;
  std::optional<double> alpha;
  std::optional<double> d_closed;
  double d_numeric = std::nan("");
  std::optional<double> b;
  std::optional<double> discrepancy;
  double gap = std::nan("");
  int iters = 0;
  bool converged = true;
  std::string note;  // diagnostic for non-converged rows
  std::optional<MeasureResult> measure;
};

std::string opt(const std::optional<double>& v) { return v ? num(*v) : std::string(); }

void write_csv_row(std::ostream& out, const MeasureRow& r) {
  out << r.d << ',' << opt(r.alpha) << ',' << opt(r.d_closed) << ',' << num(r.d_numeric) << ',' << opt(r.b) << ','
      << opt(r.discrepancy) << ',' << num(r.gap) << ',' << r.iters << '\n';
}

nlohmann::json ensemble_json(const ProductEnsemble& e) {
  auto vec = [](const ComplexVector& v) {
    nlohmann::json a = nlohmann::json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back({v(i).real(), v(i).imag()});
    return a;
  };
  nlohmann::json terms = nlohmann::json::array();
  for (const auto& t : e.terms) terms.push_back({{"weight", t.weight}, {"psi", vec(t.psi)}, {"phi", vec(t.phi)}});
  return terms;
}

nlohmann::json row_json(const MeasureRow& r, bool with_state) {
  auto jopt = [](const std::optional<double>& v) { return v ? nlohmann::json(*v) : nlohmann::json(nullptr); };
  nlohmann::json j = {{"d", r.d},
                      {"alpha", jopt(r.alpha)},
                      {"D_closed", jopt(r.d_closed)},
                      {"D_numeric", r.d_numeric},
                      {"B", jopt(r.b)},
                      {"discrepancy", jopt(r.discrepancy)},
                      {"gap", r.gap},
                      {"iters", r.iters},
                      {"converged", r.converged}};
  if (with_state && r.measure && !r.measure->nearest.terms.empty()) {
    j["ensemble"] = ensemble_json(r.measure->nearest);
    try {
      j["nearest"] = to_json(ensemble_to_density(r.measure->nearest));
    } catch (const Error&) {
      j["nearest"] = nullptr;
    }
  }
  return j;
}

struct Target {
  DensityMatrix state;
  std::string d_label;
  std::optional<double> alpha;
  std::optional<double> d_closed;
  bool entangled_known = false;  // isotropic inputs know their class exactly
  bool entangled = false;
};

DensityMatrix load_state(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DomainError("cannot open state file '" + path + "'");
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw DomainError("state file '" + path + "': " + e.what());
  }
  return density_from_json(j);
}

std::string dims_label(const DensityMatrix& rho) {
  return rho.d_a() == rho.d_b() ? std::to_string(rho.d_a())
                                : std::to_string(rho.d_a()) + "x" + std::to_string(rho.d_b());
}

std::vector<Target> targets(const RunConfig& cfg) {
  std::vector<Target> out;
  if (cfg.state_path) {
    DensityMatrix rho = load_state(*cfg.state_path);
    std::string label = dims_label(rho);
    out.push_back({std::move(rho), std::move(label), std::nullopt, std::nullopt, false, false});
    return out;
  }
  if (!cfg.alpha) throw DomainError("--alpha or --state is required");
  for (double a : cfg.alpha->values()) {
    const IsotropicParams p{cfg.d, a};
    const bool ent = isotropic_separability(p) == Separability::Entangled;
    out.push_back({isotropic(p), std::to_string(cfg.d), a, ent ? hs_measure_isotropic(p) : 0.0, true, ent});
  }
  return out;
}

// Projection plus, when `with_b`, the violation of the witness built on the
// numeric nearest state. Budget exhaustion yields a flagged partial row.
MeasureRow solve_row(const Target& t, const ProjectionConfig& pc, bool with_b) {
  MeasureRow row;
  row.d = t.d_label;
  row.alpha = t.alpha;
  row.d_closed = t.d_closed;
  try {
    row.measure = nearest_separable(t.state, pc);
  } catch (const ProjectionError& e) {
    row.measure = e.partial();
    row.converged = false;
    row.note = e.what();
  } catch (const ConvergenceError& e) {
    row.converged = false;
    row.note = e.what();
    row.d_numeric = e.best_value();
    return row;
  }
  row.d_numeric = row.measure->distance;
  row.gap = row.measure->gap_certificate;
  row.iters = row.measure->iterations;
  if (!with_b) return row;

  const bool separable = t.entangled_known ? !t.entangled : row.d_numeric <= kEigTol;
  if (separable) {
    row.b = 0.0;
  } else {
    try {
      const WitnessCandidate cand = witness_candidate(ensemble_to_density(row.measure->nearest), t.state);
      row.b = gbi_violation(t.state, cand.op, pc.inner);
    } catch (const ConvergenceError& e) {
      row.converged = false;
      row.note = e.what();
      return row;
    }
  }
  row.discrepancy = std::abs(row.d_numeric - *row.b);
  return row;
}

int emit_rows(const RunConfig& cfg, const std::vector<MeasureRow>& rows, const char* command, std::ostream& out,
              std::ostream& err) {
  int code = kExitOk;
  for (const auto& r : rows) {
    if (!r.converged) {
      err << "converged=false d=" << r.d << " alpha=" << opt(r.alpha) << ": " << r.note << '\n';
      code = kExitNoConvergence;
    }
  }
  if (cfg.format == Format::Csv) {
    out << kMeasureCsvHeader << '\n';
    for (const auto& r : rows) write_csv_row(out, r);
  } else {
    nlohmann::json j = {{"command", command}, {"seed", cfg.projection.inner.seed}, {"rows", nlohmann::json::array()}};
    const bool with_state = cfg.command == Command::Measure;
    for (const auto& r : rows) j["rows"].push_back(row_json(r, with_state));
    out << j.dump(2) << '\n';
  }
  return code;
}

int cmd_sweep(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  std::vector<MeasureRow> rows;
  for (const Target& t : targets(cfg)) rows.push_back(solve_row(t, cfg.projection, true));
  return emit_rows(cfg, rows, "iso-sweep", out, err);
}

int cmd_measure(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  const auto ts = targets(cfg);
  if (ts.size() != 1) throw DomainError("measure takes a single --alpha value or --state");
  return emit_rows(cfg, {solve_row(ts.front(), cfg.projection, false)}, "measure", out, err);
}

int cmd_bnt(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  std::vector<MeasureRow> rows;
  for (const Target& t : targets(cfg)) {
    if (t.entangled_known && !t.entangled) {
      throw DomainError("bnt: alpha=" + num(*t.alpha) + " is separable for d=" + t.d_label);
    }
    rows.push_back(solve_row(t, cfg.projection, true));
  }
  return emit_rows(cfg, rows, "bnt", out, err);
}

int cmd_witness_check(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  const auto ts = targets(cfg);
  if (ts.size() != 1) throw DomainError("witness-check takes a single --alpha value or --state");
  const Target& t = ts.front();
  const int d = t.state.d_a();
  if (t.state.d_b() != d && !cfg.guess_alpha) throw DomainError("witness-check: non-square state needs an isotropic guess");
  const double g = cfg.guess_alpha.value_or(separability_threshold(d));
  const DensityMatrix guess = isotropic({d, g});
  const WitnessReport rep = verify_nearest_separable(guess, t.state, cfg.projection.inner);
  if (cfg.format == Format::Csv) {
    out << "d,alpha,guess_alpha,ent_expectation,sep_minimum,is_witness,is_optimal\n";
    out << t.d_label << ',' << opt(t.alpha) << ',' << num(g) << ',' << num(rep.ent_expectation) << ','
        << num(rep.sep_minimum) << ',' << flag(rep.is_witness) << ',' << flag(rep.is_optimal) << '\n';
  } else {
    nlohmann::json j = {{"command", "witness-check"},
                        {"seed", cfg.projection.inner.seed},
                        {"d", t.d_label},
                        {"alpha", t.alpha ? nlohmann::json(*t.alpha) : nlohmann::json(nullptr)},
                        {"guess_alpha", g},
                        {"offset_c", rep.candidate.offset_c},
                        {"ent_expectation", rep.ent_expectation},
                        {"sep_minimum", rep.sep_minimum},
                        {"is_witness", rep.is_witness},
                        {"is_optimal", rep.is_optimal},
                        {"minimizer", ensemble_json(rep.minimizer)}};
    out << j.dump(2) << '\n';
  }
  (void)err;
  return kExitOk;
}

int cmd_gamma_signs(const RunConfig& cfg, std::ostream& out) {
  const std::vector<int> signs = gamma_signs(cfg.d);
  if (cfg.format == Format::Json) {
    out << nlohmann::json{{"d", cfg.d}, {"signs", signs}}.dump() << '\n';
    return kExitOk;
  }
  for (std::size_t i = 0; i < signs.size(); ++i) out << (i ? " " : "") << (signs[i] > 0 ? '+' : '-');
  out << '\n';
  return kExitOk;
}

int cmd_chsh_scan(const RunConfig& cfg, std::ostream& out) {
  if (cfg.d != 2) throw DomainError("chsh-scan: CHSH settings are defined for d=2 only");
  if (!cfg.alpha) throw DomainError("--alpha is required");
  nlohmann::json rows = nlohmann::json::array();
  if (cfg.format == Format::Csv) out << "alpha,chsh_max,chsh_closed,chsh_violated,B_closed,gbi_violated\n";
  for (double a : cfg.alpha->values()) {
    const IsotropicParams p{2, a};
    const ChshSettings s = chsh_max(isotropic(p), cfg.projection.inner);
    const double closed = 2.0 * std::sqrt(2.0) * std::abs(a);
    const bool ent = isotropic_separability(p) == Separability::Entangled;
    const double b = ent ? hs_measure_isotropic(p) : 0.0;
    const bool chsh_violated = s.value > 2.0 + kWitnessTol;
    if (cfg.format == Format::Csv) {
      out << num(a) << ',' << num(s.value) << ',' << num(closed) << ',' << flag(chsh_violated) << ',' << num(b) << ','
          << flag(ent) << '\n';
    } else {
      rows.push_back({{"alpha", a},
                      {"chsh_max", s.value},
                      {"chsh_closed", closed},
                      {"chsh_violated", chsh_violated},
                      {"B_closed", b},
                      {"gbi_violated", ent}});
    }
  }
  if (cfg.format == Format::Json) {
    out << nlohmann::json{{"command", "chsh-scan"}, {"seed", cfg.projection.inner.seed}, {"rows", rows}}.dump(2)
        << '\n';
  }
  return kExitOk;
}

int dispatch(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  cfg.validate();
  switch (cfg.command) {
    case Command::IsoSweep: return cmd_sweep(cfg, out, err);
    case Command::Measure: return cmd_measure(cfg, out, err);
    case Command::Bnt: return cmd_bnt(cfg, out, err);
    case Command::WitnessCheck: return cmd_witness_check(cfg, out, err);
    case Command::GammaSigns: return cmd_gamma_signs(cfg, out);
    case Command::ChshScan: return cmd_chsh_scan(cfg, out);
  }
  return kExitDomain;
}

}  // namespace

std::vector<double> AlphaRange::values() const {
  std::vector<double> out;
  for (long i = 0;; ++i) {
    const double v = start + double(i) * step;
    if (v > end + 0.5 * step) break;
    out.push_back(v);
  }
  return out;
}

AlphaRange parse_alpha(const std::string& text) {
  std::vector<double> parts;
  std::istringstream in(text);
  in.imbue(std::locale::classic());
  std::string piece;
  while (std::getline(in, piece, ':')) {
    std::istringstream ps(piece);
    ps.imbue(std::locale::classic());
    double v = 0.0;
    if (!(ps >> v) || !(ps >> std::ws).eof()) throw DomainError("--alpha: cannot parse '" + piece + "'");
    parts.push_back(v);
  }
  if (parts.size() == 1) return {parts[0], parts[0], 1.0};
  if (parts.size() != 3) throw DomainError("--alpha: expected a value or start:end:step");
  if (!(parts[2] > 0.0)) throw DomainError("--alpha: step must be positive");
  if (parts[1] < parts[0]) throw DomainError("--alpha: end is below start");
  return {parts[0], parts[1], parts[2]};
}

void RunConfig::validate() const {
  if (d < 2) throw DomainError("--d must be at least 2");
  if (alpha) {
    for (double a : alpha->values()) IsotropicParams{d, a}.validate();
  }
  if (guess_alpha) IsotropicParams{d, *guess_alpha}.validate();
}

std::uint64_t default_seed() {
  const char* env = std::getenv("WITNESSKIT_SEED");
  if (env == nullptr || *env == '\0') return 0;
  char* end = nullptr;
  const unsigned long long v = std::strtoull(env, &end, 10);
  return (end != nullptr && *end == '\0') ? v : 0;
}

int run(const RunConfig& config, std::ostream& out, std::ostream& err) {
  std::ofstream file;
  std::ostream* sink = &out;
  if (config.output && !config.output->empty() && *config.output != "-") {
    file.open(*config.output, std::ios::binary);
    if (!file) {
      err << "error: cannot open output '" << *config.output << "'\n";
      return kExitDomain;
    }
    sink = &file;
  }
  try {
    return dispatch(config, *sink, err);
  } catch (const ConvergenceError& e) {
    err << "converged=false: " << e.what() << '\n';
    return kExitNoConvergence;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kExitDomain;
  } catch (const nlohmann::json::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitDomain;
  }
}

}  // namespace witnesskit::cli
