#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "loj/loj.h"

namespace {

using nlohmann::json;

constexpr int kExitOk = 0;
constexpr int kExitCertificate = 1;
constexpr int kExitInput = 2;

/// Carries a C API status out to main.
struct Failure {
  int code;
  std::string message;
};

void check(loj_status s) {
  if (s != LOJ_OK) throw Failure{static_cast<int>(s), loj_last_error()};
}

void input_error(const std::string& msg) { throw Failure{kExitInput, msg}; }

struct PolyDeleter {
  void operator()(loj_poly* p) const { loj_poly_free(p); }
};
struct CurveDeleter {
  void operator()(loj_curve* c) const { loj_curve_free(c); }
};
struct ConfigDeleter {
  void operator()(loj_config* c) const { loj_config_free(c); }
};
using PolyPtr = std::unique_ptr<loj_poly, PolyDeleter>;
using CurvePtr = std::unique_ptr<loj_curve, CurveDeleter>;
using ConfigPtr = std::unique_ptr<loj_config, ConfigDeleter>;

std::string take(char* s) {
  std::string out = s ? s : "";
  loj_string_free(s);
  return out;
}

json take_json(char* s) { return json::parse(take(s)); }

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  return s.substr(b, s.find_last_not_of(" \t\r\n") - b + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, sep)) out.push_back(trim(item));
  return out;
}

double to_double(const std::string& s, const std::string& what) {
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (s.empty() || end != s.c_str() + s.size()) input_error("bad number for " + what + ": '" + s + "'");
  return v;
}

int to_int(const std::string& s, const std::string& what) {
  const double v = to_double(s, what);
  if (v != static_cast<int>(v)) input_error("expected an integer for " + what + ": '" + s + "'");
  return static_cast<int>(v);
}

std::pair<int, int> parse_pair(const std::string& s, const std::string& what) {
  const auto parts = split(s, ',');
  if (parts.size() != 2) input_error(what + " expects N,Q");
  return {to_int(parts[0], what), to_int(parts[1], what)};
}

std::pair<int, int> parse_range(const std::string& s, const std::string& what) {
  const auto dots = s.find("..");
  if (dots == std::string::npos) {
    const int v = to_int(trim(s), what);
    return {v, v};
  }
  return {to_int(trim(s.substr(0, dots)), what), to_int(trim(s.substr(dots + 2)), what)};
}

std::vector<double> parse_list(const std::string& s, const std::string& what) {
  std::vector<double> out;
  for (const auto& p : split(s, ',')) out.push_back(to_double(p, what));
  if (out.empty()) input_error(what + " must be nonempty");
  return out;
}

// "re,im; re,im; ..." -> interleaved coordinates.
std::vector<double> parse_seed(const std::string& s) {
  std::vector<double> out;
  for (const auto& c : split(s, ';')) {
    const auto parts = split(c, ',');
    if (parts.empty() || parts.size() > 2) input_error("seed coordinate must be 're' or 're,im': '" + c + "'");
    out.push_back(to_double(parts[0], "seed"));
    out.push_back(parts.size() == 2 ? to_double(parts[1], "seed") : 0.0);
  }
  return out;
}

/// Numeric options. Precedence: defaults, LOJ_SEED, config file, flags.
struct NumericOptions {
  std::string config_file;
  std::vector<std::pair<std::string, std::string>> flags;
  std::vector<std::string> seeds;

  void add(CLI::App* app) {
    app->add_option("--config", config_file, "key=value file with numeric defaults")->check(CLI::ExistingFile);
    auto flag = [&](const char* name, const char* key, const char* help) {
      app->add_option_function<std::string>(name, [this, key](const std::string& v) { flags.emplace_back(key, v); },
                                            help);
    };
    flag("--starts", "starts", "start points per radius (64)");
    flag("--max-iters", "max_iters", "iterations per start (2000)");
    flag("--step-tol", "step_tol", "relative step tolerance (1e-12)");
    flag("--grad-tol", "grad_tol", "stationarity tolerance (1e-10)");
    flag("--seed", "seed", "RNG seed (0, or LOJ_SEED)");
    flag("--mu", "mu", "Malgrange penalty weight (1e6)");
    flag("--threads", "threads", "worker threads (1)");
    app->add_option("--extra-seed", seeds, "warm start 're,im; re,im; ...' (repeatable)");
  }

  ConfigPtr build() const {
    loj_config* raw = nullptr;
    check(loj_config_new(&raw));
    ConfigPtr cfg(raw);
    auto set = [&](const std::string& key, const std::string& value) {
      if (key == "extra_seed") {
        const auto c = parse_seed(value);
        check(loj_config_add_seed(cfg.get(), c.data(), c.size() / 2));
      } else {
        check(loj_config_set(cfg.get(), key.c_str(), value.c_str()));
      }
    };
    if (const char* env = std::getenv("LOJ_SEED")) set("seed", trim(env));
    if (!config_file.empty()) {
      std::ifstream in(config_file);
      std::string line;
      int lineno = 0;
      while (std::getline(in, line)) {
        ++lineno;
        line = trim(line.substr(0, line.find('#')));
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) input_error(config_file + ":" + std::to_string(lineno) + ": expected key = value");
        set(trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
      }
    }
    for (const auto& [k, v] : flags) set(k, v);
    for (const auto& s : seeds) set("extra_seed", s);
    return cfg;
  }
};

/// Exactly one of --poly, --poly-file, --family.
struct PolySource {
  std::string text, file, family, vars;

  void add(CLI::App* app) {
    auto* g = app->add_option_group("polynomial", "polynomial source (exactly one)");
    g->add_option("-p,--poly", text, "polynomial text, e.g. 'x^2*y + x'");
    g->add_option("--poly-file", file, "file holding the polynomial text")->check(CLI::ExistingFile);
    g->add_option("--family", family, "the family member f_{n,q}, given as N,Q");
    g->require_option(1);
    app->add_option("--vars", vars, "comma-separated variable order (default: names in the text, x,y,z first)");
  }

  PolyPtr load() const {
    loj_poly* raw = nullptr;
    if (!family.empty()) {
      if (!vars.empty()) input_error("--vars does not apply to --family");
      const auto [n, q] = parse_pair(family, "--family");
      check(loj_poly_family(n, q, &raw));
      return PolyPtr(raw);
    }
    std::string src = text;
    if (!file.empty()) {
      std::ifstream in(file);
      std::stringstream ss;
      ss << in.rdbuf();
      src = trim(ss.str());
    }
    check(loj_poly_parse(src.c_str(), vars.empty() ? nullptr : vars.c_str(), &raw));
    return PolyPtr(raw);
  }
};

std::string poly_text(const loj_poly* p) {
  char* s = nullptr;
  check(loj_poly_to_string(p, &s));
  return take(s);
}

json poly_input(const loj_poly* p) {
  char* v = nullptr;
  check(loj_poly_vars(p, &v));
  return {{"polynomial", poly_text(p)}, {"vars", split(take(v), ',')}};
}

json numeric_input(const loj_poly* g, const loj_config* cfg) {
  json in = poly_input(g);
  char* c = nullptr;
  check(loj_config_json(cfg, &c));
  in["config"] = take_json(c);
  return in;
}

std::string num(double v, int digits = 10) {
  std::ostringstream os;
  os << std::setprecision(digits) << v;
  return os.str();
}

std::string complex_text(const json& z) {
  const double re = z.at("re"), im = z.at("im");
  if (im == 0) return num(re, 17);
  return num(re, 17) + (im < 0 ? " - " : " + ") + num(std::fabs(im), 17) + "i";
}

std::string point_text(const json& pt) {
  std::string s = "(";
  for (std::size_t i = 0; i < pt.size(); ++i) s += (i ? ", " : "") + complex_text(pt[i]);
  return s + ")";
}

/// One finished command: the payload plus its text and csv renderings.
struct Result {
  std::string subcommand;
  json input = json::object();
  json payload;
  std::string text;
  std::string csv;
  int exit_code = kExitOk;
};

Result run_family(int n, int q, bool verify) {
  Result r;
  char* out = nullptr;
  check(loj_family_report(n, q, verify ? 1 : 0, &out));
  r.payload = take_json(out);
  r.input = {{"n", n}, {"q", q}};
  std::ostringstream t, c;
  t << r.payload["polynomial"].get<std::string>() << "\n";
  c << "n,q,polynomial" << (verify ? ",euler,automorphism,cubic,pass" : "") << "\n";
  c << n << "," << q << ",\"" << r.payload["polynomial"].get<std::string>() << "\"";
  if (verify) {
    const json& ch = r.payload["checks"];
    const bool cubic = ch["cubic"][0]["pass"].get<bool>() && ch["cubic"][1]["pass"].get<bool>();
    auto pf = [](bool b) { return b ? "pass" : "FAIL"; };
    t << "euler identity: " << pf(ch["euler"]["pass"]) << "\n";
    t << "coordinate change: " << pf(ch["automorphism"]["pass"]) << " (f in new coordinates: "
      << ch["automorphism"]["in_z_coordinates"].get<std::string>() << ")\n";
    for (const auto& cu : ch["cubic"])
      t << "cubic " << cu["cubic"].get<std::string>() << ": T = 1 " << (cu["one_is_root"].get<bool>() ? "is" : "is NOT")
        << " a root; other roots residual " << num(cu["max_root_residual"]) << " " << pf(cu["pass"]) << "\n";
    t << "all checks: " << pf(r.payload["pass"]) << "\n";
    c << "," << ch["euler"]["pass"] << "," << ch["automorphism"]["pass"] << "," << (cubic ? "true" : "false") << ","
      << r.payload["pass"];
    if (!r.payload["pass"].get<bool>()) r.exit_code = kExitCertificate;
  }
  c << "\n";
  r.text = t.str();
  r.csv = c.str();
  return r;
}

Result run_curve(const loj_poly* g, const loj_curve* p) {
  Result r;
  char* out = nullptr;
  check(loj_curve_report(g, p, &out));
  r.payload = take_json(out);
  r.input = poly_input(g);
  r.input["curve"] = r.payload["curve"];
  std::ostringstream t, c;
  t << "polynomial: " << r.input["polynomial"].get<std::string>() << "\n";
  t << "curve: " << r.payload["curve"].get<std::string>();
  const std::string label = r.payload["label"];
  if (!label.empty() && label != r.payload["curve"].get<std::string>()) t << "  [" << r.payload["label"].get<std::string>() << "]";
  t << "\n" << r.payload["key_value"].get<std::string>();
  t << "malgrange: " << r.payload["malgrange"]["verdict"].get<std::string>() << "\n";
  t << "quasitame: " << r.payload["quasitame"]["verdict"].get<std::string>() << "\n";
  t << "mset: " << r.payload["mset"]["verdict"].get<std::string>() << "\n";
  c << "key,value\n";
  for (const auto& line : split(r.payload["key_value"].get<std::string>(), '\n')) {
    const auto eq = line.find(" = ");
    if (eq != std::string::npos) c << line.substr(0, eq) << ",\"" << line.substr(eq + 3) << "\"\n";
  }
  for (const char* k : {"malgrange", "quasitame", "mset"})
    c << k << ",\"" << r.payload[k]["verdict"].get<std::string>() << "\"\n";
  r.text = t.str();
  r.csv = c.str();
  return r;
}

Result run_exponent(const loj_poly* g, double rmin, double rmax, int count, const loj_config* cfg) {
  Result r;
  char* out = nullptr;
  check(loj_estimate_linfty(g, rmin, rmax, count, cfg, &out));
  r.payload = take_json(out);
  r.input = numeric_input(g, cfg);
  r.input["r_min"] = rmin;
  r.input["r_max"] = rmax;
  r.input["count"] = count;
  std::ostringstream t, c;
  t << "polynomial: " << r.input["polynomial"].get<std::string>() << "\n";
  t << "slope = " << num(r.payload["slope"], 8) << " ± " << num(r.payload["residual"], 3)
    << " (rms log residual), intercept " << num(r.payload["intercept"], 6) << ", " << r.payload["used"] << "/"
    << r.payload["samples"].size() << " radii used\n";
  t << std::setw(14) << "r" << std::setw(24) << "phi" << std::setw(12) << "converged\n";
  c << "r,phi,converged_starts\n";
  for (const auto& s : r.payload["samples"]) {
    t << std::setw(14) << num(s["r"], 8) << std::setw(24) << num(s["phi"], 15) << std::setw(8)
      << s["converged_starts"].get<int>() << "/" << s["total_starts"].get<int>() << "\n";
    c << num(s["r"], 17) << "," << num(s["phi"], 17) << "," << s["converged_starts"].get<int>() << "\n";
  }
  t << "phi values are best found (upper bounds); the slope estimates an upper envelope\n";
  r.text = t.str();
  r.csv = c.str();
  return r;
}

Result run_malgrange(const loj_poly* g, double t0re, double t0im, const std::vector<double>& radii, double eps,
                     const loj_config* cfg) {
  Result r;
  char* out = nullptr;
  check(loj_malgrange_probe(g, t0re, t0im, radii.data(), radii.size(), eps, cfg, &out));
  r.payload = take_json(out);
  r.input = numeric_input(g, cfg);
  r.input["radii"] = radii;
  r.input["eps"] = eps;
  std::ostringstream t, c;
  t << "polynomial: " << r.input["polynomial"].get<std::string>() << "\n";
  t << "t0 = " << complex_text(r.payload["t0"]) << ", eps = " << num(eps) << ", mu = " << num(r.payload["mu"]) << "\n";
  t << std::setw(12) << "r" << std::setw(22) << "|x|*|grad g|" << std::setw(14) << "|g - t0|" << "  feasible\n";
  c << "r,product,value_gap,feasible,converged_starts\n";
  for (const auto& row : r.payload["rows"]) {
    t << std::setw(12) << num(row["r"], 8) << std::setw(22) << num(row["product"], 12) << std::setw(14)
      << num(row["value_gap"], 4) << "  " << (row["feasible"].get<bool>() ? "yes" : "no") << "\n";
    c << num(row["r"], 17) << "," << num(row["product"], 17) << "," << num(row["value_gap"], 17) << ","
      << row["feasible"] << "," << row["converged_starts"].get<int>() << "\n";
  }
  t << "trend slope (log-log) = " << num(r.payload["trend_slope"], 6) << "\n";
  t << "verdict: " << r.payload["verdict"].get<std::string>() << "\n";
  r.text = t.str();
  r.csv = c.str();
  return r;
}

Result run_mtame(const loj_poly* g, const std::vector<double>& radii, const loj_config* cfg) {
  Result r;
  char* out = nullptr;
  check(loj_mtame_probe(g, radii.data(), radii.size(), cfg, &out));
  r.payload = take_json(out);
  r.input = numeric_input(g, cfg);
  r.input["radii"] = radii;
  std::ostringstream t, c;
  t << "polynomial: " << r.input["polynomial"].get<std::string>() << "\n";
  t << std::setw(12) << "r" << std::setw(11) << "collected" << std::setw(22) << "min |g| on M(g)" << "  point\n";
  c << "r,collected,min_abs_g,best_residual,flagged\n";
  auto val = [](const json& v) { return v.is_null() ? std::string("") : num(v.get<double>(), 17); };
  for (const auto& row : r.payload["rows"]) {
    t << std::setw(12) << num(row["r"], 8) << std::setw(11) << row["collected"].get<int>() << std::setw(22)
      << (row["flagged"].get<bool>() ? std::string("(flagged)") : num(row["min_abs_g"], 12)) << "  "
      << point_text(row["argmin"]) << "\n";
    c << num(row["r"], 17) << "," << row["collected"].get<int>() << "," << val(row["min_abs_g"]) << ","
      << val(row["best_residual"]) << "," << row["flagged"] << "\n";
  }
  t << "verdict: " << r.payload["verdict"].get<std::string>() << "\n";
  r.text = t.str();
  r.csv = c.str();
  return r;
}

Result run_verify(const std::string& nrange, const std::string& qrange, const std::string& mutation) {
  const auto [nlo, nhi] = parse_range(nrange, "--n-range");
  const auto [qlo, qhi] = parse_range(qrange, "--q-range");
  Result r;
  char* out = nullptr;
  check(loj_verify(nlo, nhi, qlo, qhi, mutation.empty() ? nullptr : mutation.c_str(), &out));
  r.payload = take_json(out);
  r.input = {{"n_range", {nlo, nhi}}, {"q_range", {qlo, qhi}}};
  std::ostringstream t, c;
  static const char* kChecks[] = {"exponent", "euler", "automorphism", "cubic", "malgrange", "quasitame", "trace"};
  t << std::setw(4) << "n" << std::setw(4) << "q";
  for (const char* k : kChecks) t << std::setw(14) << k;
  t << "\n";
  c << "n,q,exponent,euler,automorphism,cubic,malgrange,quasitame,trace,pass\n";
  for (const auto& cell : r.payload["cells"]) {
    t << std::setw(4) << cell["n"].get<int>() << std::setw(4) << cell["q"].get<int>();
    c << cell["n"].get<int>() << "," << cell["q"].get<int>();
    for (const char* k : kChecks) {
      const bool pass = cell["checks"][k]["pass"];
      std::string mark = pass ? "pass" : "FAIL";
      if (std::string(k) == "exponent" && cell["checks"][k]["L"].is_string())
        mark += " " + cell["checks"][k]["L"].get<std::string>();
      t << std::setw(14) << mark;
      c << "," << (pass ? "true" : "false");
    }
    t << "\n";
    c << "," << cell["pass"] << "\n";
  }
  t << r.payload["passed"].get<int>() << "/" << r.payload["total"].get<int>() << " pass\n";
  for (const auto& cell : r.payload["cells"])
    if (!cell["pass"].get<bool>()) {
      t << "failed at n=" << cell["n"].get<int>() << " q=" << cell["q"].get<int>() << ":";
      for (const auto& f : cell["failed"]) t << " " << f.get<std::string>();
      t << "\n";
    }
  if (!r.payload["pass"].get<bool>()) r.exit_code = kExitCertificate;
  r.text = t.str();
  r.csv = c.str();
  return r;
}

void emit(const Result& r, const std::string& format, const std::string& path, double seconds) {
  std::string body;
  if (format == "json") {
    json env{{"tool", "loj"},
             {"version", loj_version()},
             {"subcommand", r.subcommand},
             {"input", r.input},
             {"payload", r.payload},
             {"wall_time_s", seconds}};
    body = env.dump(2) + "\n";
  } else if (format == "csv") {
    body = r.csv;
  } else {
    body = r.text;
  }
  if (path.empty()) {
    std::cout << body << std::flush;
    return;
  }
  std::ofstream out(path);
  if (!out) input_error("cannot write " + path);
  out << body;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Lojasiewicz exponent at infinity: curve certificates and numeric probes"};
  app.set_version_flag("--version", std::string(loj_version()));
  app.require_subcommand(1);

  std::string format = "text", output;
  auto add_output = [&](CLI::App* sub) {
    sub->add_option("--format", format, "text, json or csv")->check(CLI::IsMember({"text", "json", "csv"}));
    sub->add_option("-o,--output", output, "write the result here instead of stdout");
  };

  int fam_n = 0, fam_q = 0;
  bool fam_verify = false;
  auto* family = app.add_subcommand("family", "print f_{n,q}, optionally with its exact identity checks");
  family->add_option("-n", fam_n, "n >= 1")->required();
  family->add_option("-q", fam_q, "q >= 1")->required();
  family->add_flag("--verify", fam_verify, "run the Euler identity, coordinate change and cubic checks");
  add_output(family);

  PolySource curve_src;
  std::string curve_text, psi;
  std::size_t window = 0;
  auto* curve = app.add_subcommand("curve", "exact certificates of a polynomial along a Laurent curve");
  curve_src.add(curve);
  auto* curve_grp = curve->add_option_group("curve", "curve (exactly one)");
  curve_grp->add_option("--curve", curve_text, "curve literal, e.g. '(t, -1/2*t^-1)'");
  curve_grp->add_option("--psi", psi, "the curve (t^-q, t^n, 0), N,Q (default: from --family)")
      ->expected(0, 1);
  curve_grp->require_option(1);
  curve->add_option("--window", window, "series window (default 64)");
  add_output(curve);

  PolySource exp_src;
  NumericOptions exp_num;
  double rmin = 10, rmax = 1e4;
  int count = 12;
  auto* exponent = app.add_subcommand("exponent", "estimate the exponent from phi(r) on a geometric radius grid");
  exp_src.add(exponent);
  exp_num.add(exponent);
  exponent->add_option("--r-min", rmin, "smallest radius")->capture_default_str();
  exponent->add_option("--r-max", rmax, "largest radius")->capture_default_str();
  exponent->add_option("--count", count, "number of radii (>= 3)")->capture_default_str();
  add_output(exponent);

  PolySource mal_src;
  NumericOptions mal_num;
  std::string t0 = "0", mal_radii = "10,100,1000";
  double eps = 1e-3;
  auto* malgrange = app.add_subcommand("malgrange", "numeric probe of Malgrange's condition at t0");
  mal_src.add(malgrange);
  mal_num.add(malgrange);
  malgrange->add_option("--t0", t0, "target value 're' or 're,im'")->capture_default_str();
  malgrange->add_option("--radii", mal_radii, "comma-separated radii")->capture_default_str();
  malgrange->add_option("--eps", eps, "allowed |g - t0|")->capture_default_str();
  add_output(malgrange);

  PolySource mt_src;
  NumericOptions mt_num;
  std::string mt_radii = "10,100,1000";
  auto* mtame = app.add_subcommand("mtame", "numeric probe of M-tameness (evidence only)");
  mt_src.add(mtame);
  mt_num.add(mtame);
  mtame->add_option("--radii", mt_radii, "comma-separated radii")->capture_default_str();
  add_output(mtame);

  std::string nrange = "1..4", qrange = "1..4", mutation;
  auto* verify = app.add_subcommand("verify", "certificate matrix over ranges of n and q");
  verify->add_option("--n-range", nrange, "lo..hi within 1..8")->capture_default_str();
  verify->add_option("--q-range", qrange, "lo..hi within 1..8")->capture_default_str();
  // Negative control for tests: replaces the -3 coefficient of the family.
  verify->add_option("--mutate", mutation)->group("");
  add_output(verify);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitInput;
  }

  const auto t_start = std::chrono::steady_clock::now();
  try {
    Result r;
    if (family->parsed()) {
      r = run_family(fam_n, fam_q, fam_verify);
    } else if (curve->parsed()) {
      PolyPtr g = curve_src.load();
      loj_curve* raw = nullptr;
      if (!curve_text.empty()) {
        check(loj_curve_parse(curve_text.c_str(), window, &raw));
      } else {
        std::string nq = psi;
        if (nq.empty()) nq = curve_src.family;
        if (nq.empty()) input_error("--psi needs N,Q unless the polynomial comes from --family");
        const auto [n, q] = parse_pair(nq, "--psi");
        check(loj_curve_psi(n, q, &raw));
      }
      CurvePtr p(raw);
      r = run_curve(g.get(), p.get());
    } else if (exponent->parsed()) {
      PolyPtr g = exp_src.load();
      ConfigPtr cfg = exp_num.build();
      r = run_exponent(g.get(), rmin, rmax, count, cfg.get());
    } else if (malgrange->parsed()) {
      PolyPtr g = mal_src.load();
      ConfigPtr cfg = mal_num.build();
      const auto parts = split(t0, ',');
      if (parts.empty() || parts.size() > 2) input_error("--t0 expects 're' or 're,im'");
      const double re = to_double(parts[0], "--t0");
      const double im = parts.size() == 2 ? to_double(parts[1], "--t0") : 0.0;
      r = run_malgrange(g.get(), re, im, parse_list(mal_radii, "--radii"), eps, cfg.get());
    } else if (mtame->parsed()) {
      PolyPtr g = mt_src.load();
      ConfigPtr cfg = mt_num.build();
      r = run_mtame(g.get(), parse_list(mt_radii, "--radii"), cfg.get());
    } else {
      r = run_verify(nrange, qrange, mutation);
    }
    r.subcommand = app.get_subcommands().front()->get_name();
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start).count();
    emit(r, format, output, seconds);
    return r.exit_code;
  } catch (const Failure& f) {
    std::cerr << "error: " << f.message << "\n";
    return f.code;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return static_cast<int>(LOJ_ERR_INTERNAL);
  }
}
