#include "commands.hpp"

#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <stdexcept>
#include <unistd.h>

#include "criteria.hpp"
#include "oracles.hpp"
#include "tmlab/constants.hpp"
#include "tmlab/elliptic.hpp"
#include "tmlab/extremals.hpp"
#include "tmlab/maximize1d.hpp"
#include "tmlab/nonlinearity.hpp"
#include "tmlab/special.hpp"
#include "tmlab/transforms.hpp"
#include "tmlab/weights.hpp"

namespace tmlab::cli {

using json = nlohmann::ordered_json;

namespace {

std::string shortest(double x) {
  char buf[64];
  const auto r = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, r.ptr);
}

Params params_of(const RunConfig& c) { return Params(c.p, c.N, Radius::parse(c.R), c.alpha, c.beta); }

json base_config(const RunConfig& c) {
  json j;
  j["p"] = c.p;
  j["N"] = c.N;
  j["R"] = Radius::parse(c.R).is_infinite() ? json("inf") : json(Radius::parse(c.R).value());
  return j;
}

json nl_config(const RunConfig& c) {
  return {{"nl", c.nl},           {"k", c.nl_k},         {"beta_exp", c.nl_beta}, {"nl_alpha", c.nl_alpha},
          {"gamma", c.nl_gamma},  {"threshold", c.nl_threshold}, {"delta", c.nl_delta}};
}

WeightSpec weight_of(const RunConfig& c) {
  const Params P = params_of(c);
  if (c.weight == "vp") return WeightSpec::vp(P);
  if (c.weight == "vpbeta") return WeightSpec::vp_beta(P);
  if (c.weight == "constant") return WeightSpec::constant(P, c.weight_value);
  if (c.weight == "powerlaw") return WeightSpec::power_law(P, c.weight_value);
  if (c.weight == "perturbed") return WeightSpec::perturbed(P, c.weight_value);
  throw DomainError("unknown weight kind: " + c.weight);
}

Nonlinearity nl_of(const RunConfig& c) {
  static const std::pair<const char*, NlKind> kinds[] = {{"zero", NlKind::zero}, {"f1", NlKind::f1},
                                                         {"f2", NlKind::f2},     {"f3", NlKind::f3},
                                                         {"f4", NlKind::f4},     {"f5", NlKind::f5}};
  for (const auto& [name, kind] : kinds)
    if (c.nl == name) {
      NlCoeffs k;
      k.k = c.nl_k;
      k.beta = c.nl_beta;
      k.alpha = c.nl_alpha;
      k.gamma = c.nl_gamma;
      k.threshold = c.nl_threshold;
      k.delta = c.nl_delta;
      return Nonlinearity(kind, k, c.p);
    }
  throw DomainError("unknown nonlinearity: " + c.nl + " (expected zero, f1..f5)");
}

std::pair<double, double> parse_pair(const std::string& s) {
  const auto comma = s.find(',');
  if (comma == std::string::npos) throw DomainError("expected lo,hi but got " + s);
  return {std::stod(s.substr(0, comma)), std::stod(s.substr(comma + 1))};
}

json assumptions_json(const AssumptionFlags& a) {
  return {{"A1", a.a1},
          {"A3", a.a3},
          {"A3_witness", {{"lambda", num(a.a3_lambda)}, {"q", num(a.a3_q)}, {"t0", num(a.a3_t0)}}},
          {"A4", a.a4},
          {"A4_limsup", num(a.a4_limsup)},
          {"A5", a.a5},
          {"A5_witness", {{"mu", num(a.a5_mu)}, {"t0", num(a.a5_t0)}}},
          {"A6", a.a6},
          {"A6_witness", {{"M", num(a.a6_M)}, {"t0", num(a.a6_t0)}}},
          {"A7", a.a7},
          {"A9", a.a9},
          {"A9_conservative", a.a9_conservative},
          {"A9_limit", num(a.a9_limit)},
          {"A9_threshold", num(a.a9_threshold)},
          {"A9_threshold_conservative", num(a.a9_threshold_conservative)},
          {"C_V", 1.0}};
}

Output constants_cmd(const RunConfig& c) {
  Output o;
  o.config = base_config(c);
  o.config["beta"] = c.beta;
  o.config["alpha0"] = c.alpha0 > 0 ? json(c.alpha0) : json(nullptr);
  const Params P = params_of(c);
  const auto t = constants_table(P, c.alpha0 > 0 ? std::optional<double>(c.alpha0) : std::nullopt);
  o.result = {{"omega_p", num(t.omega_p)},
              {"omega_N", num(t.omega_N)},
              {"alpha_p", num(t.alpha_p)},
              {"alpha_p_beta", num(t.alpha_p_beta)},
              {"concentration_level", num(t.concentration_level)},
              {"L_p_bounds", {num(t.L_p_bounds.first), num(t.L_p_bounds.second)}},
              {"L_p_estimate", num(t.L_p_estimate)},
              {"L_p_error", num(t.L_p_error)},
              {"c_bar", t.c_bar ? num(*t.c_bar) : json(nullptr)},
              {"lambda_floor", num(std::pow(c.p, c.p) / gamma_fn(c.p))}};
  const double lo = t.L_p_bounds.first, err = std::max(t.L_p_error, 1e-12);
  o.flags["L_p_within_bounds"] = t.L_p_estimate >= lo - err && t.L_p_estimate <= t.L_p_bounds.second + err;
  o.csv.header = {"omega_p", "omega_N", "alpha_p", "alpha_p_beta", "concentration_level", "L_p_estimate",
                  "L_p_lower", "L_p_upper", "c_bar"};
  o.csv.rows.push_back({t.omega_p, t.omega_N, t.alpha_p, t.alpha_p_beta, t.concentration_level, t.L_p_estimate,
                        t.L_p_bounds.first, t.L_p_bounds.second, t.c_bar ? *t.c_bar : std::nan("")});
  return o;
}

Output weight_cmd(const RunConfig& c) {
  if (c.grid < 2) throw DomainError("grid must be >= 2");
  Output o;
  o.config = base_config(c);
  o.config["beta"] = c.beta;
  o.config["weight"] = c.weight;
  o.config["weight_value"] = c.weight_value;
  o.config["grid"] = c.grid;
  const WeightSpec spec = weight_of(c);
  const auto mt = weight_mass(spec);
  const auto mr = weight_mass_rspace(spec);
  o.result = {{"mass", num(mt.value)}, {"mass_rspace", num(mr.value)}, {"mass_finite", mt.finite}};
  const Radius R = spec.params.R;
  o.csv.header = {"r", "V", "log_V"};
  for (int i = 1; i <= c.grid; ++i) {
    // uniform on (0, R]; geometric on [1e-2, 1e2] for R = inf
    const double r = R.is_infinite() ? std::pow(10.0, -2.0 + 4.0 * (i - 1) / (c.grid - 1)) : R.value() * i / c.grid;
    const double lv = log_weight(spec, r);
    o.csv.rows.push_back({r, std::exp(lv), lv});
  }
  if (!R.is_infinite()) o.result["V_at_R"] = num(weight(spec, R.value()));
  o.flags["mass_converged"] = mt.converged && mr.converged;
  return o;
}

Output moser_cmd(const RunConfig& c) {
  Output o;
  o.config = base_config(c);
  o.config["alpha_ratio"] = c.alpha_ratio;
  o.config["k_max"] = c.k_max;
  const Params P = params_of(c).with_beta(0.0);
  const double alpha = c.alpha_ratio * optimal_exponent(P);
  const auto scan = blowup_scan(P, alpha, c.k_max);
  json rows = json::array();
  o.csv.header = {"k", "r_k", "plateau", "value", "log_value", "lower_bound"};
  for (const auto& r : scan.rows) {
    const auto el = build_moser(P, r.k);
    rows.push_back({{"k", r.k},
                    {"r_k", num(el.r_k)},
                    {"plateau", num(el.plateau)},
                    {"value", num(r.value)},
                    {"log_value", num(r.log_value)},
                    {"lower_bound", num(r.lower_bound)},
                    {"divergent", r.divergent}});
    o.csv.rows.push_back({double(r.k), el.r_k, el.plateau, r.value, r.log_value, r.lower_bound});
  }
  o.result = {{"alpha", num(alpha)},
              {"alpha_p", num(optimal_exponent(P))},
              {"rows", rows},
              {"increasing", scan.increasing},
              {"tenfold_k", scan.tenfold_k},
              {"min_bound_margin", num(scan.min_bound_margin)}};
  o.flags["bound_respected"] = scan.min_bound_margin >= -1e-9;
  o.flags["growth_demonstrated"] = c.alpha_ratio > 1.0 && scan.increasing && scan.tenfold_k > 0;
  if (scan.min_bound_margin < -1e-9) o.exit_code = 2;
  return o;
}

Output maximize_cmd(const RunConfig& c) {
  Output o;
  o.config = base_config(c);
  o.config["beta"] = c.beta;
  o.config["alpha_ratio"] = c.alpha_ratio;
  o.config["restarts"] = c.restarts;
  o.config["seed"] = c.seed;
  o.config["nodes"] = c.nodes;
  o.config["horizon"] = c.horizon;
  o.config["tol"] = c.tol;
  const Params P = params_of(c);
  MaxResult r;
  if (c.beta > 0.0) {
    r = singular_variant(P, c.alpha_ratio * singular_exponent(P), c.restarts, c.seed);
  } else {
    MaxProblem mp;
    mp.params = P;
    mp.alpha_ratio = c.alpha_ratio;
    mp.nodes = c.nodes;
    mp.horizon = c.horizon;
    mp.tolerance = c.tol;
    r = solve(mp, c.restarts, c.seed);
  }
  json restarts = json::array();
  for (const auto& s : r.restarts)
    restarts.push_back({{"seed", s.seed},
                        {"initial_value", num(s.initial_value)},
                        {"value", num(s.value)},
                        {"residual", num(s.residual)},
                        {"iterations", s.iterations},
                        {"evaluations", s.evaluations},
                        {"converged", s.converged}});
  o.result = {{"value", num(r.value)},
              {"value_Trad", num(r.value_Trad)},
              {"kkt_residual", num(r.kkt_residual)},
              {"budget", num(r.profile.budget())},
              {"tail_contribution", num(r.tail_contribution)},
              {"tail_envelope", num(r.tail_envelope)},
              {"alpha_ratio", num(r.alpha_ratio)},
              {"restarts_used", r.restarts_used},
              {"restarts", restarts}};
  if (r.alpha_ratio == 1.0) {
    const double level = concentration_level(c.p).value;
    o.result["concentration_level"] = num(level);
    o.result["gap"] = num(r.value - level);
    o.flags["above_level"] = r.value >= level - 1e-6;
  }
  o.flags["converged"] = r.converged;
  if (!r.converged) o.exit_code = 2;
  o.csv.header = {"t", "w"};
  for (Eigen::Index i = 0; i < r.profile.t.size(); ++i) o.csv.rows.push_back({r.profile.t[i], r.profile.w[i]});
  return o;
}

Output transplant_cmd(const RunConfig& c) {
  Output o;
  o.config = base_config(c);
  o.config["mode"] = c.mode;
  o.config["count"] = c.count;
  o.config["seed"] = c.seed;
  std::mt19937_64 rng(c.seed);
  auto random_field = [&](const Space& S) {
    return std::make_shared<RadialProfile>(oracle::random_profile(S, rng));
  };
  double wn = 0.0, wf = 0.0, wu = 0.0;
  if (c.mode == "harmonic") {
    o.config["m"] = c.m;
    o.config["h"] = c.h;
    const int p = static_cast<int>(std::lround(c.p));
    if (std::abs(c.p - p) > 0 || c.m <= p) throw DomainError("harmonic mode needs integer p < m");
    const Space crit(p, p, Radius::finite(1.0)), sub(p, c.m, Radius::parse(c.R));
    for (int i = 0; i < c.count; ++i) {
      auto v = random_field(crit);
      const auto u = harmonic_transplant(v, HarmonicDirection::from_critical, sub);
      const auto id = harmonic_identities(*u, *v, optimal_exponent(c.p));
      wn = std::max(wn, id.norm_rel_error);
      wf = std::max(wf, id.functional_rel_error);
    }
    auto v0 = std::make_shared<AnalyticProfile>(
        crit, [](double s) { return 1 - s * s; }, [](double s) { return -2 * s; }, std::vector<double>{1e-9, 1.0});
    const TransplantedProfile tp(sub, v0, 1.0, 1.0);
    o.csv.header = {"r", "s", "t"};
    const MoserMap map(sub);
    const double top = sub.radius.is_infinite() ? 10.0 : sub.radius.value();
    for (int i = 1; i <= c.grid; ++i) {
      const double r = top * i / c.grid;
      o.csv.rows.push_back({r, tp.source_radius(r), map.t(r)});
    }
    json plap = json::array();
    bool resolved = true;
    if (!sub.radius.is_infinite()) {
      auto v = [](double x) { return std::cos(x) * (1 - x * x); };
      for (double h : {c.h, c.h / 2, c.h / 4}) {
        const auto e = plap_equivalence_check(v, p, c.m, sub.radius.value(), h);
        plap.push_back({{"h", num(h)}, {"max_abs", num(e.max_abs_discrepancy)}, {"points", e.points}});
        resolved = resolved && e.resolved;
      }
    }
    o.result["plap_equivalence"] = plap;
    o.flags["plap_resolved"] = resolved;
  } else if (c.mode == "beta") {
    o.config["beta"] = c.beta;
    const Params P = params_of(c);
    if (!(c.beta > 0.0)) throw DomainError("beta mode needs --beta > 0");
    const double alpha = singular_exponent(P);
    for (int i = 0; i < c.count; ++i) {
      auto v = random_field(P.space());
      const auto u = beta_transplant(v, c.beta);
      const auto id = beta_identities(*u, *v, c.beta, alpha);
      wn = std::max(wn, id.norm_rel_error);
      wf = std::max(wf, id.functional_rel_error);
      wu = std::max(wu, std::abs(id.functional_lhs - id.functional_rhs_unscaled) / id.functional_lhs);
    }
    o.result["max_rel_error_without_factor"] = num(wu);
    o.csv.header = {"r", "y"};
    const double top = P.R.is_infinite() ? 10.0 : P.R.value();
    for (int i = 1; i <= c.grid; ++i) {
      const double r = top * i / c.grid;
      o.csv.rows.push_back({r, beta_radius_map(P, c.beta, r)});
    }
  } else {
    throw DomainError("unknown transplant mode: " + c.mode);
  }
  o.result["profiles"] = c.count;
  o.result["max_norm_rel_error"] = num(wn);
  o.result["max_functional_rel_error"] = num(wf);
  o.flags["identities_hold"] = wn <= 1e-6 && wf <= 1e-6;
  if (!(wn <= 1e-6 && wf <= 1e-6)) o.exit_code = 2;
  return o;
}

Output elliptic_cmd(const RunConfig& c) {
  Output o;
  o.config = base_config(c);
  o.config["beta"] = c.beta;
  o.config["weight"] = c.weight;
  o.config.update(nl_config(c));
  o.config["bracket"] = c.bracket;
  o.config["tol"] = c.tol;
  o.config["grid"] = c.grid;
  o.config["mp_level"] = c.mp_level;
  const WeightSpec spec = weight_of(c);
  const Nonlinearity nl = nl_of(c);
  ShootOptions opt;
  opt.tol = c.tol;
  const auto s = shoot(nl, spec, parse_pair(c.bracket), opt);
  json weak = json::array();
  for (double r : s.weak_residuals) weak.push_back(num(r));
  const auto E = energy(*s.profile, nl, spec);
  o.result = {{"initial_height", num(s.initial_height)},
              {"boundary_miss", num(s.boundary_miss)},
              {"weak_residuals", weak},
              {"max_weak_residual", num(s.max_weak_residual)},
              {"energy_norm", num(s.energy_norm)},
              {"energy", num(E.value)},
              {"iterations", s.iterations},
              {"message", s.message},
              {"growth", to_string(classify_growth(nl))},
              {"declared_growth", to_string(nl.declared_growth())},
              {"assumptions", assumptions_json(nl.assumptions())}};
  if (nl.kind() == NlKind::f5) o.result["threshold"] = num(nl.coeffs().threshold);
  o.flags["converged"] = s.converged;
  if (!s.converged) o.exit_code = 2;
  if (c.mp_level) {
    const auto L = mp_level_bound(nl, spec.params.with_beta(0.0));
    json rows = json::array();
    for (const auto& r : L.rows) rows.push_back({{"k", r.k}, {"t_max", num(r.t_max)}, {"e_max", num(r.e_max)}});
    o.result["mp_level"] = {{"rows", rows},
                            {"bound", num(L.bound)},
                            {"c_bar", num(L.c_bar)},
                            {"margin", num(L.margin)},
                            {"a9", L.a9}};
    o.flags["level_certified"] = L.certified;
    if (!L.certified) o.result["mp_level"]["message"] = "d < c_bar not certified for this nonlinearity/parameters";
  }
  o.csv.header = {"r", "u", "du"};
  const double R = spec.params.R.value();
  for (int i = 0; i <= c.grid; ++i) {
    const double r = R * i / c.grid;
    o.csv.rows.push_back({r, s.profile->value(std::max(r, 1e-300)), i == 0 ? 0.0 : s.profile->derivative(r)});
  }
  return o;
}

Output rayleigh_cmd(const RunConfig& c) {
  Output o;
  o.config = base_config(c);
  o.config["beta"] = c.beta;
  o.config["weight"] = c.weight;
  o.config["weight_value"] = c.weight_value;
  o.config["grid"] = c.grid;
  o.config["iterations"] = c.iterations;
  o.config["seed"] = c.seed;
  o.config["horizon"] = c.horizon;
  const auto r = rayleigh_min(weight_of(c), c.grid, c.iterations, c.seed, c.horizon);
  o.result = {{"lambda", num(r.lambda)},
              {"floor", num(r.floor)},
              {"iterations", r.iterations}};
  o.flags["converged"] = r.converged;
  o.flags["above_floor"] = r.above_floor;
  if (!r.converged || !r.above_floor) o.exit_code = 2;
  o.csv.header = {"t", "w"};
  for (Eigen::Index i = 0; i < r.minimizer.t.size(); ++i) o.csv.rows.push_back({r.minimizer.t[i], r.minimizer.w[i]});
  return o;
}

Output report_cmd(const RunConfig& c) {
  Output o;
  o.config = {{"only", c.only}};
  acceptance::Options opt;
  opt.cli_path = c.self_path;
  json rows = json::array();
  bool all = true;
  o.csv.header = {"id", "pass"};
  for (const auto& v : acceptance::run_all(opt, c.only)) {
    rows.push_back({{"id", v.id}, {"name", v.name}, {"pass", v.pass}, {"detail", v.detail}});
    o.csv.rows.push_back({double(v.id), v.pass ? 1.0 : 0.0});
    all = all && v.pass;
  }
  o.result = {{"criteria", rows}};
  o.flags["all_pass"] = all;
  if (!all) o.exit_code = 2;
  return o;
}

}  // namespace

json num(double x) {
  if (std::isfinite(x)) return x;
  if (std::isnan(x)) return "nan";
  return x > 0 ? "inf" : "-inf";
}

Output run_command(const RunConfig& cfg) {
  if (cfg.command == "constants") return constants_cmd(cfg);
  if (cfg.command == "weight") return weight_cmd(cfg);
  if (cfg.command == "moser-seq") return moser_cmd(cfg);
  if (cfg.command == "maximize") return maximize_cmd(cfg);
  if (cfg.command == "transplant") return transplant_cmd(cfg);
  if (cfg.command == "solve-elliptic") return elliptic_cmd(cfg);
  if (cfg.command == "rayleigh") return rayleigh_cmd(cfg);
  if (cfg.command == "report") return report_cmd(cfg);
  throw std::invalid_argument("unknown subcommand: " + cfg.command);
}

json document(const RunConfig& cfg, const Output& out, double seconds) {
  json d;
  d["schema_version"] = kSchemaVersion;
  d["command"] = cfg.command;
  d["config"] = out.config;
  d["result"] = out.result;
  d["flags"] = out.flags;
  d["timing"] = cfg.timing ? json{{"seconds", seconds}} : json(nullptr);
  return d;
}

std::string to_csv(const CsvTable& t) {
  std::string s;
  for (std::size_t i = 0; i < t.header.size(); ++i) s += (i ? "," : "") + t.header[i];
  s += "\n";
  for (const auto& row : t.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) s += ",";
      s += std::isfinite(row[i]) ? shortest(row[i]) : (std::isnan(row[i]) ? "nan" : (row[i] > 0 ? "inf" : "-inf"));
    }
    s += "\n";
  }
  return s;
}

void write_atomic(const std::string& path, const std::string& content) {
  namespace fs = std::filesystem;
  const fs::path target(path);
  const fs::path tmp = target.string() + ".tmp." + std::to_string(::getpid());
  {
    std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
    if (!f) throw std::runtime_error("cannot write " + tmp.string());
    f << content;
    if (!f.flush()) throw std::runtime_error("write failed for " + tmp.string());
  }
  std::error_code ec;
  fs::rename(tmp, target, ec);
  if (ec) {
    fs::remove(tmp);
    throw std::runtime_error("cannot rename onto " + path + ": " + ec.message());
  }
}

Sweep parse_sweep(const std::string& spec) {
  const auto eq = spec.find('=');
  if (eq == std::string::npos || eq == 0) throw std::invalid_argument("sweep must look like key=a:step:b");
  Sweep s;
  s.key = spec.substr(0, eq);
  const std::string rest = spec.substr(eq + 1);
  if (rest.find(':') != std::string::npos) {
    std::stringstream ss(rest);
    std::string a, st, b;
    std::getline(ss, a, ':');
    std::getline(ss, st, ':');
    std::getline(ss, b, ':');
    const double lo = std::stod(a), step = std::stod(st), hi = std::stod(b);
    if (!(step > 0.0) || hi < lo) throw std::invalid_argument("sweep range needs step > 0 and a <= b");
    const long n = std::lround(std::floor((hi - lo) / step + 1e-9));
    for (long i = 0; i <= n; ++i) s.values.push_back(lo + i * step);
  } else {
    std::stringstream ss(rest);
    std::string item;
    while (std::getline(ss, item, ',')) s.values.push_back(std::stod(item));
  }
  if (s.values.empty()) throw std::invalid_argument("empty sweep");
  return s;
}

void set_field(RunConfig& c, const std::string& key, double v) {
  if (key == "p") c.p = v;
  else if (key == "N") c.N = static_cast<int>(std::lround(v));
  else if (key == "R") c.R = shortest(v);
  else if (key == "alpha") c.alpha = v;
  else if (key == "beta") c.beta = v;
  else if (key == "alpha-ratio") c.alpha_ratio = v;
  else if (key == "k-max") c.k_max = static_cast<int>(std::lround(v));
  else if (key == "seed") c.seed = static_cast<std::uint64_t>(std::llround(v));
  else if (key == "alpha0") c.alpha0 = v;
  else if (key == "grid") c.grid = static_cast<int>(std::lround(v));
  else if (key == "m") c.m = static_cast<int>(std::lround(v));
  else if (key == "k") c.nl_k = v;
  else if (key == "beta-exp") c.nl_beta = v;
  else if (key == "weight-value") c.weight_value = v;
  else throw std::invalid_argument("cannot sweep over " + key);
}

std::string sweep_path(const std::string& path, const std::string& key, double value) {
  const std::filesystem::path p(path);
  const std::string stem = p.stem().string() + "_" + key + shortest(value);
  return (p.parent_path() / (stem + p.extension().string())).string();
}

}  // namespace tmlab::cli
