#pragma once

#include <charconv>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"
#include "lsd/lsd.hpp"

namespace lsd::cli {

using Json = nlohmann::ordered_json;
using ParamMap = std::map<std::string, double>;

inline int exit_code(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::NotEntangled:
    case ErrorKind::NoApplicableCase: return 3;
    case ErrorKind::NoConvergence:
    case ErrorKind::InvalidDecomposition:
    case ErrorKind::EmptyGrid:
    case ErrorKind::MixedEntangledPart: return 4;
    default: return 2;
  }
}

// ---- parameters ----

inline std::vector<std::string> indexed_keys(const char* prefix, int n) {
  std::vector<std::string> out;
  for (int k = 1; k <= n; ++k) out.push_back(prefix + std::to_string(k));
  return out;
}

inline std::vector<std::string> state_keys(FamilyTag tag) {
  const auto with = [](std::vector<std::string> v, std::initializer_list<const char*> more) {
    for (const char* m : more) v.emplace_back(m);
    return v;
  };
  switch (tag) {
    case FamilyTag::BD22: return indexed_keys("p", 4);
    case FamilyTag::ICD: return with(indexed_keys("p", 4), {"theta"});
    case FamilyTag::BD23: return indexed_keys("p", 6);
    case FamilyTag::Werner: return {"d", "f"};
    case FamilyTag::Isotropic: return {"d", "F"};
    case FamilyTag::Locc1: return with(indexed_keys("l", 4), {"theta"});
    case FamilyTag::Locc3: return with(indexed_keys("l", 4), {"theta", "xi", "phi"});
    case FamilyTag::Horodecki33: return {"alpha"};
    case FamilyTag::MultiIso: return {"d", "n", "s"};
  }
  return {};
}

// Entangled-part angles picked by the caller instead of the default branch.
inline std::vector<std::string> angle_keys(FamilyTag tag) {
  switch (tag) {
    case FamilyTag::ICD:
    case FamilyTag::Locc1: return {"theta_pp"};
    case FamilyTag::Locc3: return {"theta_pp", "xi_pp", "phi_pp"};
    default: return {};
  }
}

inline double parse_number(const std::string& text) {
  double v = 0.0;
  const char* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, v);
  if (ec != std::errc() || ptr != end || !std::isfinite(v)) fail(ErrorKind::ParseError, "not a number: '" + text + "'");
  return v;
}

inline std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> out;
  std::string part;
  std::istringstream in(text);
  while (std::getline(in, part, sep)) out.push_back(part);
  if (!text.empty() && text.back() == sep) out.emplace_back();
  return out;
}

// "k=v,k=v"; values are returned raw so sweeps can read ranges.
inline std::vector<std::pair<std::string, std::string>> parse_assignments(const std::string& text) {
  std::vector<std::pair<std::string, std::string>> out;
  if (text.empty()) return out;
  for (const auto& item : split(text, ',')) {
    const auto eq = item.find('=');
    if (eq == std::string::npos || eq == 0 || eq + 1 == item.size())
      fail(ErrorKind::ParseError, "expected key=value, got '" + item + "'");
    out.emplace_back(item.substr(0, eq), item.substr(eq + 1));
  }
  return out;
}

inline ParamMap parse_params(const std::string& text) {
  ParamMap out;
  for (const auto& [k, v] : parse_assignments(text)) out[k] = parse_number(v);
  return out;
}

namespace detail {

inline std::size_t integer(const ParamMap& m, const std::string& key) {
  const double v = m.at(key);
  if (v != std::floor(v) || v < 1.0 || v > 1e6) fail(ErrorKind::ParseError, key + " must be a positive integer");
  return static_cast<std::size_t>(v);
}

// Unset p's share whatever mass the set ones leave.
template <std::size_t N>
std::array<double, N> distribution(ParamMap& m) {
  double used = 0.0;
  std::size_t missing = 0;
  for (std::size_t k = 1; k <= N; ++k) {
    const auto it = m.find("p" + std::to_string(k));
    if (it == m.end()) ++missing;
    else used += it->second;
  }
  std::array<double, N> p{};
  for (std::size_t k = 1; k <= N; ++k) {
    const std::string key = "p" + std::to_string(k);
    if (!m.count(key)) m[key] = (1.0 - used) / static_cast<double>(missing);
    p[k - 1] = m[key];
  }
  return p;
}

inline std::array<double, 4> lambdas(const ParamMap& m) {
  return {m.at("l1"), m.at("l2"), m.at("l3"), m.at("l4")};
}

}  // namespace detail

inline FamilyState make_state(FamilyTag tag, ParamMap m) {
  const auto keys = state_keys(tag);
  const auto angles = angle_keys(tag);
  for (const auto& [k, v] : m)
    if (std::find(keys.begin(), keys.end(), k) == keys.end() && std::find(angles.begin(), angles.end(), k) == angles.end())
      fail(ErrorKind::ParseError, "unknown parameter '" + k + "' for " + std::string(family_name(tag)));
  FamilyState state;
  switch (tag) {
    case FamilyTag::BD22: state = BD22Params{detail::distribution<4>(m)}; break;
    case FamilyTag::ICD: {
      const auto p = detail::distribution<4>(m);
      state = ICDParams{p, m.count("theta") ? m["theta"] : std::numbers::pi / 4};
      break;
    }
    case FamilyTag::BD23: state = BD23Params{detail::distribution<6>(m)}; break;
    default:
      for (const auto& k : keys)
        if (!m.count(k)) fail(ErrorKind::ParseError, "missing parameter '" + k + "' for " + std::string(family_name(tag)));
      switch (tag) {
        case FamilyTag::Werner: state = WernerParams{detail::integer(m, "d"), m["f"]}; break;
        case FamilyTag::Isotropic: state = IsotropicParams{detail::integer(m, "d"), m["F"]}; break;
        case FamilyTag::Locc1: state = make_locc1(detail::lambdas(m), m["theta"]); break;
        case FamilyTag::Locc3: state = make_locc3(detail::lambdas(m), m["theta"], m["xi"], m["phi"]); break;
        case FamilyTag::Horodecki33: state = Horodecki33Params{m["alpha"]}; break;
        case FamilyTag::MultiIso:
          state = MultiIsoParams{detail::integer(m, "d"), detail::integer(m, "n"), m["s"]};
          break;
        default: break;
      }
  }
  validate(state);
  return state;
}

inline std::vector<std::pair<std::string, double>> state_params(const FamilyState& state) {
  std::vector<double> values;
  std::visit(
      [&](const auto& x) {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, BD22Params> || std::is_same_v<T, BD23Params>) {
          values.assign(x.p.begin(), x.p.end());
        } else if constexpr (std::is_same_v<T, ICDParams>) {
          values.assign(x.p.begin(), x.p.end());
          values.push_back(x.theta);
        } else if constexpr (std::is_same_v<T, WernerParams>) {
          values = {static_cast<double>(x.d), x.f};
        } else if constexpr (std::is_same_v<T, IsotropicParams>) {
          values = {static_cast<double>(x.d), x.F};
        } else if constexpr (std::is_same_v<T, Locc1Params>) {
          values.assign(x.lambdas.begin(), x.lambdas.end());
          values.push_back(x.theta);
        } else if constexpr (std::is_same_v<T, Locc3Params>) {
          values.assign(x.lambdas.begin(), x.lambdas.end());
          values.insert(values.end(), {x.theta, x.xi, x.phi});
        } else if constexpr (std::is_same_v<T, Horodecki33Params>) {
          values = {x.alpha};
        } else {
          values = {static_cast<double>(x.d), static_cast<double>(x.n), x.s};
        }
      },
      state);
  const auto keys = state_keys(tag_of(state));
  std::vector<std::pair<std::string, double>> out;
  for (std::size_t k = 0; k < keys.size(); ++k) out.emplace_back(keys[k], values[k]);
  return out;
}

// ---- documents ----

struct StateDocument {
  std::optional<FamilyState> family;
  std::optional<DensityMatrix> matrix;
  ParamMap angles;  // decomposition options carried along with a family record

  const DensityMatrix& density() {
    if (!matrix) matrix = to_density(*family);
    return *matrix;
  }
};

inline Json family_json(const FamilyState& state) {
  Json params = Json::object();
  for (const auto& [k, v] : state_params(state)) {
    if (k == "d" || k == "n") params[k] = static_cast<std::size_t>(v);
    else params[k] = v;
  }
  return {{"family", std::string(family_name(tag_of(state)))}, {"params", params}};
}

inline Json matrix_json(const DensityMatrix& rho) {
  Json entries = Json::array();
  const ComplexMatrix& m = rho.matrix();
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j) entries.push_back({m(i, j).real(), m(i, j).imag()});
  return {{"dims", rho.dims()}, {"entries", entries}};
}

// Params may be flat ("p1": ..) or grouped ("p": [..]); `overrides` wins.
inline StateDocument family_document(const std::string& name, const Json& params, const ParamMap& overrides = {}) {
  const auto tag = parse_family(name);
  if (!tag) fail(ErrorKind::ParseError, "unknown family '" + name + "'");
  ParamMap m;
  if (!params.is_null()) {
    if (!params.is_object()) fail(ErrorKind::ParseError, "params must be an object");
    for (const auto& [k, v] : params.items()) {
      if (v.is_number()) {
        m[k] = v.get<double>();
      } else if (v.is_array()) {
        for (std::size_t i = 0; i < v.size(); ++i) {
          if (!v[i].is_number()) fail(ErrorKind::ParseError, "params." + k + " must hold numbers");
          m[k + std::to_string(i + 1)] = v[i].get<double>();
        }
      } else {
        fail(ErrorKind::ParseError, "params." + k + " must be a number or a list");
      }
    }
  }
  for (const auto& [k, v] : overrides) m[k] = v;
  StateDocument doc;
  for (const auto& k : angle_keys(*tag))
    if (m.count(k)) doc.angles[k] = m[k];
  doc.family = make_state(*tag, m);
  return doc;
}

inline StateDocument load_document(const Json& j, const ParamMap& overrides = {}) {
  if (!j.is_object()) fail(ErrorKind::ParseError, "document must be an object");
  if (j.contains("family")) {
    if (!j["family"].is_string()) fail(ErrorKind::ParseError, "family must be a string");
    return family_document(j["family"].get<std::string>(), j.value("params", Json()), overrides);
  }
  if (!j.contains("dims") || !j.contains("entries"))
    fail(ErrorKind::ParseError, "document needs either 'family' or 'dims' and 'entries'");
  if (!overrides.empty()) fail(ErrorKind::ParseError, "--params applies only to family records");
  Dims dims;
  for (const auto& d : j["dims"]) {
    if (!d.is_number_unsigned()) fail(ErrorKind::ParseError, "dims must be positive integers");
    dims.push_back(d.get<std::size_t>());
  }
  const auto& entries = j["entries"];
  if (!entries.is_array()) fail(ErrorKind::ParseError, "entries must be a list");
  const std::size_t n = dims.empty() ? 0 : total_dimension(dims);
  if (n == 0 || entries.size() != n * n)
    fail(ErrorKind::ParseError, "entries must hold prod(dims)^2 = " + std::to_string(n * n) + " pairs");
  ComplexMatrix m(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  for (std::size_t k = 0; k < entries.size(); ++k) {
    const auto& e = entries[k];
    if (!e.is_array() || e.size() != 2 || !e[0].is_number() || !e[1].is_number())
      fail(ErrorKind::ParseError, "entry " + std::to_string(k) + " must be [re, im]");
    m(static_cast<Eigen::Index>(k / n), static_cast<Eigen::Index>(k % n)) = {e[0].get<double>(), e[1].get<double>()};
  }
  StateDocument doc;
  doc.matrix = DensityMatrix(dims, m);
  return doc;
}

inline Json read_json(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorKind::ParseError, "cannot read " + path.string());
  try {
    return Json::parse(in);
  } catch (const Json::exception& e) {
    fail(ErrorKind::ParseError, path.string() + ": " + e.what());
  }
}

inline void write_json(const std::filesystem::path& path, const Json& j) {
  std::ofstream out(path);
  if (!out) fail(ErrorKind::ParseError, "cannot write " + path.string());
  out << j.dump(2) << '\n';
}

// ---- rendering ----

inline std::string number(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

inline void render_text(const Json& j, std::ostream& out, const std::string& prefix = "") {
  for (const auto& [k, v] : j.items()) {
    const std::string key = prefix + k;
    if (v.is_object()) {
      render_text(v, out, key + ".");
      continue;
    }
    out << key << ": ";
    if (v.is_array()) {
      out << '[';
      for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) out << ", ";
        out << (v[i].is_number_float() ? number(v[i].get<double>()) : v[i].dump());
      }
      out << "]\n";
    } else if (v.is_number_float()) {
      out << number(v.get<double>()) << '\n';
    } else if (v.is_string()) {
      out << v.get<std::string>() << '\n';
    } else {
      out << v.dump() << '\n';
    }
  }
}

inline void render(const Json& j, bool structured, std::ostream& out) {
  if (structured) out << j.dump(2) << '\n';
  else render_text(j, out);
}

inline std::vector<double> eigenvalues(const ComplexMatrix& m) {
  const RealVector v = hermitian_eigenvalues(m);
  return {v.begin(), v.end()};
}

// ---- commands ----

inline Json analyze(StateDocument& doc) {
  const DensityMatrix& rho = doc.density();
  Json r;
  if (doc.family) {
    r["family"] = std::string(family_name(tag_of(*doc.family)));
    r["params"] = family_json(*doc.family)["params"];
  }
  r["dims"] = rho.dims();
  r["trace"] = rho.matrix().trace().real();
  r["eigenvalues"] = eigenvalues(rho.matrix());
  const double margin = ppt_margin(rho);
  const bool ppt = margin >= -default_tolerances.psd;
  const bool complete = rho.dims().size() == 2 && rho.dimension() <= 6;
  r["ppt_min_eigenvalue"] = margin;
  r["ppt"] = ppt ? (complete ? "separable" : "PPT, inconclusive") : "entangled";
  if (rho.has_dims({2, 2})) {
    const ConcurrenceReport c = wootters_concurrence(rho);
    r["concurrence"] = c.concurrence;
    r["eof_nats"] = c.eof;
    r["eof_bits"] = c.eof_bits;
  }
  if (rho.dims().size() == 2 && rho.dims()[0] == 2) r["lower_bound"] = concurrence_lower_bound_2k(rho).bound;
  if (doc.family) {
    const bool sep = is_separable(*doc.family);
    r["family_verdict"] = sep ? "separable" : "entangled";
    if (const auto* h = std::get_if<Horodecki33Params>(&*doc.family)) {
      const char* names[] = {"separable", "bound entangled", "free entangled"};
      r["class"] = names[static_cast<int>(entanglement_class_33(h->alpha))];
    }
  }
  return r;
}

inline LSDecomposition decompose_document(StateDocument& doc) {
  if (!doc.family) {
    if (!doc.density().has_dims({2, 2}))
      fail(ErrorKind::UnsupportedShape, "explicit matrices are decomposed only for dims [2,2]; give a family record");
    return decompose_wootters(doc.density());
  }
  const FamilyState& s = *doc.family;
  const auto& a = doc.angles;
  if (const auto* x = std::get_if<ICDParams>(&s); x && a.count("theta_pp")) return decompose_icd_case2(*x, a.at("theta_pp"));
  if (const auto* x = std::get_if<Locc1Params>(&s); x && a.count("theta_pp")) return decompose_locc1(*x, a.at("theta_pp"));
  if (const auto* x = std::get_if<Locc3Params>(&s); x && !a.empty()) {
    const auto pick = [&](const char* k, double fallback) { return a.count(k) ? a.at(k) : fallback; };
    return decompose_locc3(*x, {pick("theta_pp", x->theta), pick("xi_pp", x->xi), pick("phi_pp", x->phi)});
  }
  return decompose(s);
}

inline Json decomposition_json(StateDocument& doc, const LSDecomposition& dec) {
  Json r;
  r["source"] = doc.family ? family_json(*doc.family) : matrix_json(doc.density());
  r["lambda"] = dec.lambda;
  r["branch"] = dec.derivation.branch;
  if (!dec.derivation.frame.empty()) r["frame"] = dec.derivation.frame;
  Json d = Json::object();
  for (const auto& [k, v] : dec.derivation.values) d[k] = v;
  r["derivation"] = d;
  r["rho_s_eigenvalues"] = eigenvalues(dec.rho_s.matrix());
  r["rho_e_eigenvalues"] = eigenvalues(dec.rho_e.matrix());
  r["rho_e_rank"] = numeric_rank(dec.rho_e.matrix(), default_tolerances.rank);
  try {
    r["average_concurrence"] = average_concurrence(dec);
  } catch (const Error& e) {
    r["average_concurrence"] = std::string("undefined (") + std::string(to_string(e.kind())) + ")";
  }
  return r;
}

// rho.json, rho_s.json, rho_e.json and decomposition.json under `dir`.
inline void emit(const std::filesystem::path& dir, StateDocument& doc, const LSDecomposition& dec, const Json& report) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) fail(ErrorKind::ParseError, "cannot create " + dir.string() + ": " + ec.message());
  write_json(dir / "rho.json", doc.family ? family_json(*doc.family) : matrix_json(doc.density()));
  write_json(dir / "rho_s.json", matrix_json(dec.rho_s));
  write_json(dir / "rho_e.json", matrix_json(dec.rho_e));
  write_json(dir / "decomposition.json", report);
}

inline constexpr double verify_tolerance = 1e-3;

inline Json validation_json(const ValidationReport& v) {
  Json r;
  r["reconstruction_residual"] = v.reconstruction_residual;
  r["psd_margin_e"] = v.psd_margin_e;
  r["psd_margin_s"] = v.psd_margin_s;
  r["ppt_margin_s"] = v.ppt_margin_s;
  if (v.line_entangled) r["line_entangled"] = *v.line_entangled;
  if (!v.note.empty()) r["note"] = v.note;
  r["passed"] = v.passed;
  return r;
}

// Closed form against the oracle; `passed` needs both the weight match and validate.
inline Json verify(StateDocument& doc, const LSDecomposition& dec, std::size_t grid) {
  const DensityMatrix& rho = doc.density();
  const BoundarySampler sampler = doc.family ? sampler_for(*doc.family) : wootters_sampler(rho);
  const OracleReport o = certify(rho, sampler, GridOptions{grid});
  const ValidationReport v = validate(rho, dec);
  const double gap = std::abs(dec.lambda - o.lambda_star);
  Json r;
  r["source"] = doc.family ? family_json(*doc.family) : matrix_json(rho);
  r["lambda"] = dec.lambda;
  r["branch"] = dec.derivation.branch;
  r["oracle_lambda"] = o.lambda_star;
  r["gap"] = gap;
  r["tolerance"] = verify_tolerance;
  r["oracle_chart"] = o.best_chart;
  r["oracle_samples"] = o.samples;
  r["oracle_psd_margin_e"] = o.psd_margin_e;
  r["oracle_ppt_margin_s"] = o.ppt_margin_s;
  r["oracle_runtime_s"] = o.runtime;
  r["validation"] = validation_json(v);
  r["result"] = gap <= verify_tolerance && v.passed ? "PASS" : "FAIL";
  return r;
}

// A directory written by emit: validate the stored triple as it stands.
inline Json verify_emitted(const std::filesystem::path& dir) {
  StateDocument doc = load_document(read_json(dir / "rho.json"));
  const DensityMatrix rho_s = *load_document(read_json(dir / "rho_s.json")).matrix;
  const DensityMatrix rho_e = *load_document(read_json(dir / "rho_e.json")).matrix;
  const Json stored = read_json(dir / "decomposition.json");
  if (!stored.contains("lambda") || !stored["lambda"].is_number())
    fail(ErrorKind::ParseError, "decomposition.json needs a numeric lambda");
  LSDecomposition dec{stored["lambda"].get<double>(), rho_s, rho_e, std::nullopt, {}};
  dec.derivation.branch = stored.value("branch", "");
  const ValidationReport v = validate(doc.density(), dec);
  Json r;
  r["source"] = doc.family ? family_json(*doc.family) : matrix_json(doc.density());
  r["lambda"] = dec.lambda;
  r["validation"] = validation_json(v);
  r["result"] = v.passed ? "PASS" : "FAIL";
  return r;
}

// ---- sweep ----

struct SweepSpec {
  FamilyTag family;
  std::string param;
  double start = 0.0;
  double stop = 0.0;
  std::size_t steps = 0;
  ParamMap fixed;

  double value(std::size_t i) const {
    if (i + 1 == steps) return stop;
    return start + (stop - start) * static_cast<double>(i) / static_cast<double>(steps - 1);
  }
};

// --params carries exactly one name=start:stop:steps entry.
inline SweepSpec parse_sweep(const std::string& family, const std::string& params) {
  const auto tag = parse_family(family);
  if (!tag) fail(ErrorKind::ParseError, "unknown family '" + family + "'");
  SweepSpec spec{*tag, {}, 0, 0, 0, {}};
  for (const auto& [k, v] : parse_assignments(params)) {
    if (v.find(':') == std::string::npos) {
      spec.fixed[k] = parse_number(v);
      continue;
    }
    if (!spec.param.empty()) fail(ErrorKind::ParseError, "only one parameter may be swept");
    const auto parts = split(v, ':');
    if (parts.size() != 3) fail(ErrorKind::ParseError, "range must be start:stop:steps, got '" + v + "'");
    spec.param = k;
    spec.start = parse_number(parts[0]);
    spec.stop = parse_number(parts[1]);
    const double steps = parse_number(parts[2]);
    if (steps < 2 || steps != std::floor(steps) || steps > 1e7) fail(ErrorKind::ParseError, "steps must be an integer >= 2");
    spec.steps = static_cast<std::size_t>(steps);
  }
  if (spec.param.empty()) fail(ErrorKind::ParseError, "no swept parameter (name=start:stop:steps)");
  const auto keys = state_keys(*tag), angles = angle_keys(*tag);
  if (std::find(keys.begin(), keys.end(), spec.param) == keys.end() &&
      std::find(angles.begin(), angles.end(), spec.param) == angles.end())
    fail(ErrorKind::ParseError, "unknown parameter '" + spec.param + "' for " + family);
  return spec;
}

inline const char* sweep_header = "family,swept_param,param_value,separable,concurrence,lower_bound,lambda,avg_concurrence,case,error";

inline std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + '"';
}

// Fields left empty where a quantity is undefined; a failing row keeps what
// was computed before the error.
inline std::string sweep_row(const SweepSpec& spec, std::size_t i) {
  const double v = spec.value(i);
  std::string separable, concurrence, lower, lambda, avg, branch, error;
  try {
    ParamMap m = spec.fixed;
    m[spec.param] = v;
    StateDocument doc;
    for (const auto& k : angle_keys(spec.family))
      if (m.count(k)) doc.angles[k] = m[k];
    doc.family = make_state(spec.family, m);
    const DensityMatrix& rho = doc.density();
    const bool sep = is_separable(*doc.family);
    separable = sep ? "true" : "false";
    if (rho.has_dims({2, 2})) concurrence = number(wootters_concurrence(rho).concurrence);
    if (rho.dims().size() == 2 && rho.dims()[0] == 2) lower = number(concurrence_lower_bound_2k(rho).bound);
    if (sep) {
      lambda = number(1.0);
      avg = number(0.0);
      branch = "separable";
    } else {
      const LSDecomposition dec = decompose_document(doc);
      lambda = number(dec.lambda);
      branch = dec.derivation.branch;
      try {
        avg = number(average_concurrence(dec));
      } catch (const Error&) {
      }
    }
  } catch (const Error& e) {
    error = e.what();
  }
  const std::vector<std::string> fields{std::string(family_name(spec.family)), spec.param, number(v), separable,
                                        concurrence, lower, lambda, avg, branch, error};
  std::string line;
  for (std::size_t k = 0; k < fields.size(); ++k) {
    if (k) line += ',';
    line += csv_field(fields[k]);
  }
  return line;
}

inline void sweep(const SweepSpec& spec, std::ostream& out) {
  out << sweep_header << '\n';
  for (std::size_t i = 0; i < spec.steps; ++i) out << sweep_row(spec, i) << '\n';
}

}  // namespace lsd::cli
