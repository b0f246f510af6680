#include "lieprob/experiment/config.hpp"

#include <cerrno>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

namespace lieprob::experiment {

namespace pt = boost::property_tree;

namespace {

const std::map<std::string, std::set<std::string>>& known_keys() {
  static const std::map<std::string, std::set<std::string>> keys{
      {"problem", {"builtin", "F", "x_T", "y0", "r_max", "y_min", "y_max"}},
      {"model", {"n_design", "n_knots", "kernel_variance", "lengthscale_factor", "jitter"}},
      {"sampler", {"n_samples", "burn_in", "thin"}},
      {"run", {"seed", "out"}},
      {"baseline", {"n", "sigma", "kernel_variance", "kernel_lengthscale", "delta"}},
      {"verify", {"field", "points", "seed"}},
  };
  return keys;
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

double to_double(const std::string& key, const std::string& raw) {
  const std::string text = trim(raw);
  if (text.empty()) throw ConfigError(key + ": empty value");
  char* end = nullptr;
  errno = 0;
  const double v = std::strtod(text.c_str(), &end);
  if (end != text.c_str() + text.size() || errno == ERANGE) {
    throw ConfigError(key + ": not a number: '" + text + "'");
  }
  return v;
}

std::uint64_t to_unsigned(const std::string& key, const std::string& raw) {
  const std::string text = trim(raw);
  std::uint64_t v = 0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (text.empty() || ec != std::errc{} || ptr != text.data() + text.size()) {
    throw ConfigError(key + ": not a non-negative integer: '" + text + "'");
  }
  return v;
}

class Reader {
 public:
  explicit Reader(const pt::ptree& tree) : tree_(tree) {}

  template <class T>
  void get(const std::string& section, const std::string& key, T& target) const {
    const auto child = tree_.get_child_optional(pt::ptree::path_type(section + "." + key, '.'));
    if (!child) return;
    const std::string raw = child->get_value<std::string>();
    const std::string name = section + "." + key;
    if constexpr (std::is_same_v<T, double>) {
      target = to_double(name, raw);
    } else if constexpr (std::is_same_v<T, std::string>) {
      target = trim(raw);
    } else {
      target = static_cast<T>(to_unsigned(name, raw));
    }
  }

 private:
  const pt::ptree& tree_;
};

}  // namespace

std::string format_double(double value) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", value);
  return buf;
}

LaurentProfile LaurentProfile::parse(const std::string& text) {
  LaurentProfile out;
  std::string spaced = text;
  for (char& c : spaced) {
    if (c == ',') c = ' ';
  }
  std::istringstream in(spaced);
  std::string token;
  while (in >> token) {
    const auto colon = token.find(':');
    if (colon == std::string::npos) throw ConfigError("F term '" + token + "' is not power:coefficient");
    const std::string p = token.substr(0, colon);
    int power = 0;
    const auto [ptr, ec] = std::from_chars(p.data() + (p.size() > 0 && p[0] == '+'), p.data() + p.size(), power);
    if (p.empty() || ec != std::errc{} || ptr != p.data() + p.size()) {
      throw ConfigError("F term '" + token + "' has a bad power");
    }
    if (out.terms.count(power)) throw ConfigError("F lists power " + p + " twice");
    out.terms[power] = to_double("F", token.substr(colon + 1));
  }
  if (out.terms.empty()) throw ConfigError("F has no terms");
  return out;
}

std::string LaurentProfile::str() const {
  std::string s;
  for (const auto& [power, coef] : terms) {
    if (!s.empty()) s += ' ';
    s += std::to_string(power) + ":" + format_double(coef);
  }
  return s;
}

std::size_t RunConfig::knots_for(std::size_t n_design) const {
  if (model.n_knots > 0) return model.n_knots;
  return std::max<std::size_t>(3, kKnotsPerDesignPoint * n_design);
}

void RunConfig::validate() const {
  const ProblemConfig& p = problem;
  if (p.F.terms.empty()) throw ConfigError("problem.F is empty");
  for (const auto& [power, coef] : p.F.terms) {
    if (!std::isfinite(coef)) throw ConfigError("problem.F has a non-finite coefficient");
  }
  if (!(p.x_T > 1.0) || !std::isfinite(p.x_T)) throw ConfigError("problem.x_T must be finite and > 1");
  if (!(p.y0 > 0.0)) throw ConfigError("problem.y0 must be > 0");
  if (!(p.r_max > p.y0) || !std::isfinite(p.r_max)) throw ConfigError("problem.r_max must exceed r0 = y0");
  if (!(p.y_min > 0.0 && p.y_min < p.y_max && std::isfinite(p.y_max))) {
    throw ConfigError("problem.y_min/y_max must satisfy 0 < y_min < y_max");
  }
  if (model.n_knots != 0 && model.n_knots < 3) throw ConfigError("model.n_knots must be 0 (auto) or >= 3");
  if (!(model.kernel_variance > 0.0)) throw ConfigError("model.kernel_variance must be > 0");
  if (!(model.lengthscale_factor > 0.0)) throw ConfigError("model.lengthscale_factor must be > 0");
  if (!(model.jitter >= 0.0)) throw ConfigError("model.jitter must be >= 0");
  if (sampler.n_samples == 0) throw ConfigError("sampler.n_samples must be >= 1");
  if (sampler.thin == 0) throw ConfigError("sampler.thin must be >= 1");
  if (baseline.n == 0) throw ConfigError("baseline.n must be >= 1");
  if (!(baseline.sigma > 0.0)) throw ConfigError("baseline.sigma must be > 0");
  if (!(baseline.kernel_variance > 0.0) || !(baseline.kernel_lengthscale > 0.0)) {
    throw ConfigError("baseline kernel parameters must be > 0");
  }
  if (!std::isfinite(baseline.delta)) throw ConfigError("baseline.delta must be finite");
  static const std::set<std::string> fields{"scaling", "x_translation", "y_translation", "rotation"};
  if (!fields.count(verify.field)) throw ConfigError("verify.field '" + verify.field + "' is unknown");
  if (verify.points == 0) throw ConfigError("verify.points must be >= 1");
}

bool RunConfig::operator==(const RunConfig& o) const {
  return problem == o.problem && model == o.model && sampler.n_samples == o.sampler.n_samples &&
         sampler.burn_in == o.sampler.burn_in && sampler.thin == o.sampler.thin && seed == o.seed &&
         out == o.out && baseline == o.baseline && verify == o.verify;
}

RunConfig builtin_config(const std::string& name) {
  if (name != kDefaultBuiltin) throw ConfigError("unknown builtin problem '" + name + "'");
  RunConfig c;
  c.problem.builtin = name;
  c.problem.F.terms = {{-1, 1.0}, {1, 1.0}};
  c.problem.x_T = std::exp(1.0);
  c.problem.y0 = 0.1;
  c.problem.r_max = 1.5;
  return c;
}

RunConfig parse_config(const std::string& text) {
  pt::ptree tree;
  try {
    std::istringstream in(text);
    pt::ini_parser::read_ini(in, tree);
  } catch (const pt::ini_parser_error& e) {
    throw ConfigError(std::string("config parse error: ") + e.what());
  }
  for (const auto& [section, child] : tree) {
    const auto known = known_keys().find(section);
    if (known == known_keys().end() || child.empty()) {
      throw ConfigError("unknown config section or top-level key '" + section + "'");
    }
    for (const auto& [key, value] : child) {
      if (!known->second.count(key)) throw ConfigError("unknown key '" + section + "." + key + "'");
    }
  }

  const Reader r(tree);
  std::string builtin;
  r.get("problem", "builtin", builtin);
  RunConfig c = builtin.empty() ? RunConfig{} : builtin_config(builtin);

  std::string F;
  r.get("problem", "F", F);
  if (!F.empty()) c.problem.F = LaurentProfile::parse(F);
  r.get("problem", "x_T", c.problem.x_T);
  r.get("problem", "y0", c.problem.y0);
  r.get("problem", "r_max", c.problem.r_max);
  r.get("problem", "y_min", c.problem.y_min);
  r.get("problem", "y_max", c.problem.y_max);
  r.get("model", "n_design", c.model.n_design);
  r.get("model", "n_knots", c.model.n_knots);
  r.get("model", "kernel_variance", c.model.kernel_variance);
  r.get("model", "lengthscale_factor", c.model.lengthscale_factor);
  r.get("model", "jitter", c.model.jitter);
  r.get("sampler", "n_samples", c.sampler.n_samples);
  r.get("sampler", "burn_in", c.sampler.burn_in);
  r.get("sampler", "thin", c.sampler.thin);
  r.get("run", "seed", c.seed);
  r.get("run", "out", c.out);
  r.get("baseline", "n", c.baseline.n);
  r.get("baseline", "sigma", c.baseline.sigma);
  r.get("baseline", "kernel_variance", c.baseline.kernel_variance);
  r.get("baseline", "kernel_lengthscale", c.baseline.kernel_lengthscale);
  r.get("baseline", "delta", c.baseline.delta);
  r.get("verify", "field", c.verify.field);
  r.get("verify", "points", c.verify.points);
  r.get("verify", "seed", c.verify.seed);
  return c;
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot read config file " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

std::string serialize_config(const RunConfig& c) {
  std::ostringstream os;
  const auto num = [](double v) { return format_double(v); };
  os << "[problem]\n";
  if (!c.problem.builtin.empty()) os << "builtin = " << c.problem.builtin << "\n";
  os << "F = " << c.problem.F.str() << "\n"
     << "x_T = " << num(c.problem.x_T) << "\n"
     << "y0 = " << num(c.problem.y0) << "\n"
     << "r_max = " << num(c.problem.r_max) << "\n"
     << "y_min = " << num(c.problem.y_min) << "\n"
     << "y_max = " << num(c.problem.y_max) << "\n\n";
  os << "[model]\n"
     << "n_design = " << c.model.n_design << "\n"
     << "n_knots = " << c.model.n_knots << "\n"
     << "kernel_variance = " << num(c.model.kernel_variance) << "\n"
     << "lengthscale_factor = " << num(c.model.lengthscale_factor) << "\n"
     << "jitter = " << num(c.model.jitter) << "\n\n";
  os << "[sampler]\n"
     << "n_samples = " << c.sampler.n_samples << "\n"
     << "burn_in = " << c.sampler.burn_in << "\n"
     << "thin = " << c.sampler.thin << "\n\n";
  os << "[run]\n"
     << "seed = " << c.seed << "\n";
  if (!c.out.empty()) os << "out = " << c.out << "\n";
  os << "\n[baseline]\n"
     << "n = " << c.baseline.n << "\n"
     << "sigma = " << num(c.baseline.sigma) << "\n"
     << "kernel_variance = " << num(c.baseline.kernel_variance) << "\n"
     << "kernel_lengthscale = " << num(c.baseline.kernel_lengthscale) << "\n"
     << "delta = " << num(c.baseline.delta) << "\n\n";
  os << "[verify]\n"
     << "field = " << c.verify.field << "\n"
     << "points = " << c.verify.points << "\n"
     << "seed = " << c.verify.seed << "\n";
  return os.str();
}

}  // namespace lieprob::experiment
