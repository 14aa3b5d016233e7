#include "cavesim/config.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include "cavesim/log.hpp"

namespace cavesim {

LogLevel log_level() {
  static const LogLevel level = [] {
    const char* env = std::getenv("CAVESIM_LOG");
    if (env == nullptr) return LogLevel::Info;
    const std::string v(env);
    if (v == "debug") return LogLevel::Debug;
    if (v == "warn") return LogLevel::Warn;
    if (v == "quiet") return LogLevel::Quiet;
    return LogLevel::Info;
  }();
  return level;
}

void log_debug(const std::string& msg) {
  if (log_level() <= LogLevel::Debug) std::cerr << "[debug] " << msg << "\n";
}
void log_info(const std::string& msg) {
  if (log_level() <= LogLevel::Info) std::cerr << "[info] " << msg << "\n";
}
void log_warn(const std::string& msg) {
  if (log_level() <= LogLevel::Warn) std::cerr << "[warn] " << msg << "\n";
}

namespace {

std::string trim(const std::string& s) {
  const auto begin = s.find_first_not_of(" \t\r");
  if (begin == std::string::npos) return "";
  const auto end = s.find_last_not_of(" \t\r");
  return s.substr(begin, end - begin + 1);
}

[[noreturn]] void fail(const std::string& source, int line, const std::string& msg) {
  throw ConfigError(source + ":" + std::to_string(line) + ": " + msg);
}

double parse_double(const std::string& source, int line, const std::string& key,
                    const std::string& value) {
  try {
    std::size_t pos = 0;
    const double v = std::stod(value, &pos);
    if (pos != value.size()) throw std::invalid_argument("trailing characters");
    return v;
  } catch (const std::exception&) {
    fail(source, line, "invalid number '" + value + "' for key '" + key + "'");
  }
}

int parse_int(const std::string& source, int line, const std::string& key,
              const std::string& value) {
  try {
    std::size_t pos = 0;
    const int v = std::stoi(value, &pos);
    if (pos != value.size()) throw std::invalid_argument("trailing characters");
    return v;
  } catch (const std::exception&) {
    fail(source, line, "invalid integer '" + value + "' for key '" + key + "'");
  }
}

bool parse_bool(const std::string& source, int line, const std::string& key,
                const std::string& value) {
  if (value == "true" || value == "1") return true;
  if (value == "false" || value == "0") return false;
  fail(source, line, "invalid boolean '" + value + "' for key '" + key + "'");
}

DamageModel parse_model(const std::string& source, int line, const std::string& value) {
  if (value == "isotropic") return DamageModel::Isotropic;
  if (value == "shear") return DamageModel::Shear;
  if (value == "shear-compression") return DamageModel::ShearCompression;
  fail(source, line,
       "invalid model '" + value + "' (expected isotropic, shear or shear-compression)");
}

BcMode parse_bc(const std::string& source, int line, const std::string& value) {
  if (value == "rollers") return BcMode::BottomClampedLateralRollers;
  if (value == "clamped") return BcMode::BottomAndLateralClamped;
  fail(source, line, "invalid bc '" + value + "' (expected rollers or clamped)");
}

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace

Config parse_config(const std::string& text, const std::string& source_name) {
  Config cfg;
  std::istringstream in(text);
  std::string raw;
  int line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    const auto hash = raw.find('#');
    if (hash != std::string::npos) raw.erase(hash);
    const std::string line = trim(raw);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      fail(source_name, line_no, "expected 'key = value', got '" + line + "'");
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty()) fail(source_name, line_no, "empty key");

    if (key == "model") cfg.model = parse_model(source_name, line_no, value);
    else if (key == "E") cfg.youngs = parse_double(source_name, line_no, key, value);
    else if (key == "nu") cfg.poisson = parse_double(source_name, line_no, key, value);
    else if (key == "rho") cfg.density = parse_double(source_name, line_no, key, value);
    else if (key == "gx") cfg.gravity.x = parse_double(source_name, line_no, key, value);
    else if (key == "gy") cfg.gravity.y = parse_double(source_name, line_no, key, value);
    else if (key == "w1") cfg.w1 = parse_double(source_name, line_no, key, value);
    else if (key == "ell") cfg.ell = parse_double(source_name, line_no, key, value);
    else if (key == "kappa") cfg.kappa = parse_double(source_name, line_no, key, value);
    else if (key == "xmin") cfg.domain.xmin = parse_double(source_name, line_no, key, value);
    else if (key == "xmax") cfg.domain.xmax = parse_double(source_name, line_no, key, value);
    else if (key == "ymin") cfg.domain.ymin = parse_double(source_name, line_no, key, value);
    else if (key == "ymax") cfg.domain.ymax = parse_double(source_name, line_no, key, value);
    else if (key == "cavity_x0") cfg.cavity.x_start = parse_double(source_name, line_no, key, value);
    else if (key == "cavity_rate") cfg.cavity.rate = parse_double(source_name, line_no, key, value);
    else if (key == "cavity_half_height") cfg.cavity.half_height = parse_double(source_name, line_no, key, value);
    else if (key == "cavity_y_center") cfg.cavity.y_center = parse_double(source_name, line_no, key, value);
    else if (key == "h") cfg.h = parse_double(source_name, line_no, key, value);
    else if (key == "steps") cfg.steps = parse_int(source_name, line_no, key, value);
    else if (key == "am_tol") cfg.solver.am_tol = parse_double(source_name, line_no, key, value);
    else if (key == "am_max_iter") cfg.solver.am_max_iter = parse_int(source_name, line_no, key, value);
    else if (key == "linear_tol") cfg.solver.linear_tol = parse_double(source_name, line_no, key, value);
    else if (key == "kkt_tol") cfg.solver.kkt_tol = parse_double(source_name, line_no, key, value);
    else if (key == "kkt_max_iter") cfg.solver.kkt_max_iter = parse_int(source_name, line_no, key, value);
    else if (key == "bc") cfg.solver.bc = parse_bc(source_name, line_no, value);
    else if (key == "out_dir") cfg.out_dir = value;
    else if (key == "checkpoints") cfg.checkpoints = parse_bool(source_name, line_no, key, value);
    else if (key == "continue_on_failure") cfg.continue_on_failure = parse_bool(source_name, line_no, key, value);
    else fail(source_name, line_no, "unknown key '" + key + "'");
  }
  cfg.validate();
  return cfg;
}

Config load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str(), path);
}

void Config::validate() const {
  const auto require = [](bool ok, const std::string& msg) {
    if (!ok) throw ConfigError("config: " + msg);
  };
  require(youngs > 0.0, "E must be positive");
  require(poisson > -1.0 && poisson < 0.5, "nu must lie in (-1, 0.5)");
  require(density > 0.0, "rho must be positive");
  require(w1 > 0.0, "w1 must be positive");
  require(ell > 0.0, "ell must be positive");
  require(kappa >= 0.0, "kappa must be nonnegative");
  require(domain.width() > 0.0 && domain.height() > 0.0,
          "domain (xmin, xmax, ymin, ymax) must be nonempty");
  require(h > 0.0, "h must be positive");
  require(steps >= 0, "steps must be nonnegative");
  require(cavity.half_height > 0.0, "cavity_half_height must be positive");
  require(cavity.rate >= 0.0, "cavity_rate must be nonnegative");
  require(solver.am_tol > 0.0, "am_tol must be positive");
  require(solver.am_max_iter >= 1, "am_max_iter must be at least 1");
  require(solver.linear_tol > 0.0, "linear_tol must be positive");
  require(solver.kkt_tol > 0.0, "kkt_tol must be positive");
  require(solver.kkt_max_iter >= 1, "kkt_max_iter must be at least 1");
  require(!out_dir.empty(), "out_dir must not be empty");
  if (h > ell / 3.0) {
    log_warn("h = " + fmt(h) + " exceeds ell/3 = " + fmt(ell / 3.0) +
             "; the localization band spans fewer than 3 elements");
  }
}

std::string format_config(const Config& c) {
  std::ostringstream out;
  out << "# cavesim run configuration\n";
  out << "model = " << to_string(c.model) << "\n";
  out << "E = " << fmt(c.youngs) << "\n";
  out << "nu = " << fmt(c.poisson) << "\n";
  out << "rho = " << fmt(c.density) << "\n";
  out << "gx = " << fmt(c.gravity.x) << "\n";
  out << "gy = " << fmt(c.gravity.y) << "\n";
  out << "w1 = " << fmt(c.w1) << "\n";
  out << "ell = " << fmt(c.ell) << "\n";
  out << "kappa = " << fmt(c.kappa) << "\n";
  out << "xmin = " << fmt(c.domain.xmin) << "\n";
  out << "xmax = " << fmt(c.domain.xmax) << "\n";
  out << "ymin = " << fmt(c.domain.ymin) << "\n";
  out << "ymax = " << fmt(c.domain.ymax) << "\n";
  out << "cavity_x0 = " << fmt(c.cavity.x_start) << "\n";
  out << "cavity_rate = " << fmt(c.cavity.rate) << "\n";
  out << "cavity_half_height = " << fmt(c.cavity.half_height) << "\n";
  out << "cavity_y_center = " << fmt(c.cavity.y_center) << "\n";
  out << "h = " << fmt(c.h) << "\n";
  out << "steps = " << c.steps << "\n";
  out << "am_tol = " << fmt(c.solver.am_tol) << "\n";
  out << "am_max_iter = " << c.solver.am_max_iter << "\n";
  out << "linear_tol = " << fmt(c.solver.linear_tol) << "\n";
  out << "kkt_tol = " << fmt(c.solver.kkt_tol) << "\n";
  out << "kkt_max_iter = " << c.solver.kkt_max_iter << "\n";
  out << "bc = "
      << (c.solver.bc == BcMode::BottomClampedLateralRollers ? "rollers" : "clamped")
      << "\n";
  out << "out_dir = " << c.out_dir << "\n";
  out << "checkpoints = " << (c.checkpoints ? "true" : "false") << "\n";
  out << "continue_on_failure = " << (c.continue_on_failure ? "true" : "false") << "\n";
  return out.str();
}

void save_config(const Config& config, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot write config file '" + path + "'");
  out << format_config(config);
  if (!out) throw ConfigError("write failed for config file '" + path + "'");
}

}  // namespace cavesim
