#include "archinf/model_io.hpp"

#include <cerrno>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "archinf/errors.hpp"

namespace archinf {

namespace {

using nlohmann::json;

const json& need(const json& j, const std::string& key, const std::string& path) {
  auto it = j.find(key);
  if (it == j.end()) throw config_error(path + ": missing");
  return *it;
}

double need_number(const json& j, const std::string& key, const std::string& path) {
  const json& v = need(j, key, path);
  if (!v.is_number()) throw config_error(path + ": expected a number");
  return v.get<double>();
}

long need_integer(const json& j, const std::string& key, const std::string& path) {
  const json& v = need(j, key, path);
  if (!v.is_number_integer()) throw config_error(path + ": expected an integer");
  return v.get<long>();
}

std::vector<double> need_number_array(const json& j, const std::string& key,
                                      const std::string& path, std::size_t size) {
  const json& v = need(j, key, path);
  if (!v.is_array()) throw config_error(path + ": expected an array");
  if (v.size() != size)
    throw config_error(path + ": expected " + std::to_string(size) + " entries");
  std::vector<double> out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (!v[i].is_number())
      throw config_error(path + "[" + std::to_string(i) + "]: expected a number");
    out.push_back(v[i].get<double>());
  }
  return out;
}

std::pair<double, double> need_pair(const json& v, const std::string& path) {
  if (!v.is_array() || v.size() != 2 || !v[0].is_number() || !v[1].is_number())
    throw config_error(path + ": expected [lo, hi]");
  return {v[0].get<double>(), v[1].get<double>()};
}

}  // namespace

ModelFile parse_model_json(const json& doc) {
  if (!doc.is_object()) throw config_error("model: expected a JSON object");

  ModelFile mf;
  const json& fam = need(doc, "family", "family");
  if (!fam.is_string()) throw config_error("family: expected a string");
  try {
    mf.spec.family = family_from_name(fam.get<std::string>());
  } catch (const std::domain_error& e) {
    throw config_error(std::string("family: ") + e.what());
  }

  if (doc.contains("m")) mf.spec.m = static_cast<int>(need_integer(doc, "m", "m"));
  if (doc.contains("n")) mf.spec.n = static_cast<int>(need_integer(doc, "n", "n"));
  if (doc.contains("free_f")) {
    const json& v = doc["free_f"];
    if (!v.is_boolean()) throw config_error("free_f: expected a boolean");
    mf.spec.free_f = v.get<bool>();
  }

  const bool kernel_family =
      mf.spec.family == Family::Gexp || mf.spec.family == Family::Ghyp;
  const bool rational_family = mf.spec.family == Family::Garch ||
                               mf.spec.family == Family::Fgarch ||
                               mf.spec.family == Family::Figarch;

  const json& params = need(doc, "params", "params");
  if (!params.is_object()) throw config_error("params: expected an object");
  mf.theta.omega = need_number(params, "omega", "params.omega");
  mf.theta.mu = need_number(params, "mu", "params.mu");

  if (kernel_family && !mf.spec.free_f)
    mf.spec.fixed_f = need_number_array(params, "f", "params.f",
                                        static_cast<std::size_t>(mf.spec.m));
  try {
    mf.spec.validate();
  } catch (const std::domain_error& e) {
    throw config_error(std::string("model: ") + e.what());
  }

  std::vector<double>& z = mf.theta.zeta;
  if (rational_family) {
    const auto a = mf.spec.m > 0 ? need_number_array(params, "a", "params.a",
                                                     static_cast<std::size_t>(mf.spec.m))
                                 : std::vector<double>{};
    const auto b = mf.spec.n > 0 ? need_number_array(params, "b", "params.b",
                                                     static_cast<std::size_t>(mf.spec.n))
                                 : std::vector<double>{};
    z.insert(z.end(), a.begin(), a.end());
    z.insert(z.end(), b.begin(), b.end());
    if (mf.spec.family != Family::Garch)
      z.push_back(need_number(params, "d", "params.d"));
  } else if (kernel_family) {
    const auto e = need_number_array(params, "e", "params.e",
                                     static_cast<std::size_t>(mf.spec.m));
    z.insert(z.end(), e.begin(), e.end());
    if (mf.spec.free_f) {
      const auto f = need_number_array(params, "f", "params.f",
                                       static_cast<std::size_t>(mf.spec.m));
      z.insert(z.end(), f.begin(), f.end());
    }
    z.push_back(need_number(params, "d", "params.d"));
  }
  try {
    mf.spec.validate_zeta(z);
  } catch (const std::exception& e) {
    throw config_error(std::string("params: ") + e.what());
  }

  if (doc.contains("innovation")) {
    const json& innov = doc["innovation"];
    if (!innov.is_object()) throw config_error("innovation: expected an object");
    mf.gamma = need_number(innov, "gamma", "innovation.gamma");
    if (!(mf.gamma > 0.0)) throw config_error("innovation.gamma: must be positive");
  }

  if (doc.contains("bounds")) {
    const json& b = doc["bounds"];
    if (!b.is_object()) throw config_error("bounds: expected an object");
    Bounds& bounds = mf.theta.bounds;
    auto push_pair = [&](const json& v, const std::string& path) {
      auto [lo, hi] = need_pair(v, path);
      bounds.lo.push_back(lo);
      bounds.hi.push_back(hi);
    };
    push_pair(need(b, "omega", "bounds.omega"), "bounds.omega");
    push_pair(need(b, "mu", "bounds.mu"), "bounds.mu");
    auto push_list = [&](const std::string& key, int count) {
      if (count == 0) return;
      const json& arr = need(b, key, "bounds." + key);
      if (!arr.is_array() || static_cast<int>(arr.size()) != count)
        throw config_error("bounds." + key + ": expected " + std::to_string(count) +
                           " [lo, hi] pairs");
      for (int i = 0; i < count; ++i)
        push_pair(arr[i], "bounds." + key + "[" + std::to_string(i) + "]");
    };
    if (rational_family) {
      push_list("a", mf.spec.m);
      push_list("b", mf.spec.n);
      if (mf.spec.family != Family::Garch)
        push_pair(need(b, "d", "bounds.d"), "bounds.d");
    } else if (kernel_family) {
      push_list("e", mf.spec.m);
      if (mf.spec.free_f) push_list("f", mf.spec.m);
      push_pair(need(b, "d", "bounds.d"), "bounds.d");
    }
    try {
      bounds.validate(mf.spec);
    } catch (const std::domain_error& e) {
      throw config_error(std::string("bounds: ") + e.what());
    }
    if (!bounds.contains(mf.theta.flat()))
      throw config_error("bounds: params lie outside the box");
    mf.has_bounds = true;
  }
  return mf;
}

ModelFile load_model_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw config_error("cannot open model file: " + path);
  json doc;
  try {
    in >> doc;
  } catch (const json::parse_error& e) {
    throw config_error("model file " + path + ": " + e.what());
  }
  return parse_model_json(doc);
}

MCConfig parse_mc_config_json(const json& doc) {
  if (!doc.is_object()) throw config_error("mc config: expected a JSON object");
  ModelFile mf = parse_model_json(need(doc, "model", "model"));
  if (!mf.has_bounds) throw config_error("model.bounds: missing (required for mc)");

  MCConfig cfg;
  cfg.spec = mf.spec;
  cfg.theta0 = mf.theta;
  cfg.gamma = mf.gamma;

  const json& ts = need(doc, "T", "T");
  if (!ts.is_array() || ts.empty()) throw config_error("T: expected a nonempty array");
  for (std::size_t i = 0; i < ts.size(); ++i) {
    if (!ts[i].is_number_integer())
      throw config_error("T[" + std::to_string(i) + "]: expected an integer");
    cfg.sample_sizes.push_back(ts[i].get<long>());
  }
  cfg.replications = static_cast<int>(need_integer(doc, "R", "R"));
  cfg.seed = static_cast<std::uint64_t>(need_integer(doc, "seed", "seed"));
  if (doc.contains("burn_in")) cfg.burn_in = need_integer(doc, "burn_in", "burn_in");
  if (doc.contains("nw")) cfg.n_weights = need_integer(doc, "nw", "nw");
  if (doc.contains("ci_level")) cfg.ci_level = need_number(doc, "ci_level", "ci_level");
  if (doc.contains("threads"))
    cfg.threads = static_cast<int>(need_integer(doc, "threads", "threads"));
  if (doc.contains("fit")) {
    const json& f = doc["fit"];
    if (!f.is_object()) throw config_error("fit: expected an object");
    if (f.contains("n_starts"))
      cfg.fit_options.n_starts = static_cast<int>(need_integer(f, "n_starts", "fit.n_starts"));
    if (f.contains("max_iter"))
      cfg.fit_options.max_iter = static_cast<int>(need_integer(f, "max_iter", "fit.max_iter"));
    if (f.contains("grad_tol"))
      cfg.fit_options.grad_tol = need_number(f, "grad_tol", "fit.grad_tol");
    if (f.contains("n_weights"))
      cfg.fit_options.n_weights = need_integer(f, "n_weights", "fit.n_weights");
  }
  try {
    cfg.validate();
  } catch (const std::domain_error& e) {
    throw config_error(std::string("mc config: ") + e.what());
  }
  return cfg;
}

MCConfig load_mc_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw config_error("cannot open mc config file: " + path);
  json doc;
  try {
    in >> doc;
  } catch (const json::parse_error& e) {
    throw config_error("mc config file " + path + ": " + e.what());
  }
  return parse_mc_config_json(doc);
}

std::string format_g17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

void write_text_atomic(const std::string& path, const std::string& contents) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw config_error("cannot write file: " + tmp);
    out << contents;
    if (!out) throw config_error("write failed: " + tmp);
  }
  std::filesystem::rename(tmp, path);
}

void write_series_csv(const std::string& path, const Series& y) {
  std::ostringstream os;
  os << "t,y\n";
  for (std::size_t i = 0; i < y.size(); ++i)
    os << (i + 1) << ',' << format_g17(y[i]) << '\n';
  write_text_atomic(path, os.str());
}

Series read_series_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw config_error("cannot open data file: " + path);
  std::string line;
  if (!std::getline(in, line)) throw config_error(path + ": empty file");
  if (!line.empty() && line.back() == '\r') line.pop_back();

  int y_col = -1;
  {
    std::stringstream header(line);
    std::string cell;
    int idx = 0;
    while (std::getline(header, cell, ',')) {
      if (cell == "y") y_col = idx;
      ++idx;
    }
  }
  if (y_col < 0) throw config_error(path + ": header has no 'y' column");

  Series y;
  long lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::stringstream row(line);
    std::string cell;
    int idx = 0;
    bool found = false;
    while (std::getline(row, cell, ',')) {
      if (idx == y_col) {
        const char* begin = cell.c_str();
        char* end = nullptr;
        const double v = std::strtod(begin, &end);  // stod rejects subnormals
        if (end == begin || (end && *end != '\0'))
          throw config_error(path + ": line " + std::to_string(lineno) +
                             ": cannot parse y value '" + cell + "'");
        y.push_back(v);
        found = true;
        break;
      }
      ++idx;
    }
    if (!found)
      throw config_error(path + ": line " + std::to_string(lineno) + ": missing y column");
  }
  if (y.empty()) throw config_error(path + ": no observations");
  return y;
}

namespace {

json named_vector(const std::vector<std::string>& names, const std::vector<double>& v) {
  json out = json::object();
  for (std::size_t i = 0; i < names.size(); ++i) out[names[i]] = v[i];
  return out;
}

json matrix_row_major(const Matrix& m) {
  json out = json::array();
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) out.push_back(m(i, j));
  return out;
}

}  // namespace

json moment_record_to_json(const MomentConditionRecord& rec) {
  json j;
  j["rho"] = rec.rho;
  j["moment_factor"] = rec.moment_factor;
  j["weight_sum"] = rec.weight_sum;
  j["value"] = rec.value;
  j["tail_bound"] = std::isfinite(rec.tail_bound) ? json(rec.tail_bound) : json();
  j["verdict"] = verdict_name(rec.verdict);
  return j;
}

json fit_to_json(const FitResult& fit, const InferenceResult* inference) {
  const std::vector<std::string> names = fit.spec.coord_names();
  json j;
  j["family"] = family_name(fit.spec.family);
  j["theta_hat"] = named_vector(names, fit.theta.flat());
  j["qll"] = fit.qll;
  json diag;
  diag["converged"] = fit.converged;
  diag["iterations"] = fit.iterations;
  diag["projected_grad_norm"] = fit.projected_grad_norm;
  json bf = json::object();
  for (std::size_t i = 0; i < fit.boundary_flags.size(); ++i)
    bf[names[i]] = static_cast<bool>(fit.boundary_flags[i]);
  diag["boundary_flags"] = bf;
  if (inference) {
    diag["clt_safe"] = inference->clt_safe;
    diag["condition_number"] = inference->condition_number;
    diag["boundary_warning"] = inference->boundary_warning;
    j["std_errors"] = named_vector(names, inference->std_errors);
    json ci = json::object();
    for (std::size_t i = 0; i < names.size(); ++i)
      ci[names[i]] = json::array({inference->ci[i].first, inference->ci[i].second});
    j["ci"] = ci;
    j["ci_level"] = inference->ci_level;
    j["covariance"] = matrix_row_major(inference->covariance);
  }
  j["diagnostics"] = diag;
  return j;
}

json mc_report_to_json(const MCReport& report, const MCConfig& cfg) {
  json j;
  json echo;
  echo["family"] = family_name(cfg.spec.family);
  echo["gamma"] = cfg.gamma;
  echo["R"] = cfg.replications;
  echo["seed"] = cfg.seed;
  echo["ci_level"] = cfg.ci_level;
  json ts = json::array();
  for (long t : cfg.sample_sizes) ts.push_back(t);
  echo["T"] = ts;
  j["config"] = echo;
  j["moment_check"] =
      report.moment_check ? moment_record_to_json(*report.moment_check) : json();
  json sizes = json::array();
  for (const auto& sr : report.by_size) {
    json s;
    s["T"] = sr.sample_size;
    s["n_converged"] = sr.n_converged;
    s["n_sandwich_ok"] = sr.n_sandwich_ok;
    s["frac_converged"] = sr.frac_converged;
    s["frac_boundary"] = sr.frac_boundary;
    s["coverage_band"] = json::array({sr.coverage_band_lo, sr.coverage_band_hi});
    json coords = json::array();
    for (const auto& c : sr.coords) {
      json cj;
      cj["name"] = c.name;
      cj["bias"] = c.bias;
      cj["bias_mcse"] = c.bias_mcse;
      cj["rmse"] = c.rmse;
      cj["coverage"] = c.coverage;
      cj["ad_stat"] = c.ad_stat;
      coords.push_back(cj);
    }
    s["coords"] = coords;
    sizes.push_back(s);
  }
  j["by_size"] = sizes;
  return j;
}

}  // namespace archinf
