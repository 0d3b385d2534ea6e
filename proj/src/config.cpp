#include "horoflow/config.hpp"

#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include <toml.hpp>

#include "horoflow/errors.hpp"
#include "horoflow/mass.hpp"

namespace horoflow {

namespace {

using Schema = std::map<std::string, std::set<std::string>>;

const Schema& schema() {
  static const Schema s = {
      {"ambient", {"m", "r_max", "tol_ode"}},
      {"initial", {"r0", "f_kind", "coefficients", "a", "path"}},
      {"grid", {"n"}},
      {"flow", {"t_end", "dt_init", "tol_step", "safety", "cadence"}},
      {"shitam", {"enabled", "tol_R"}},
      {"inequality", {"enabled", "l_max", "iters"}},
      {"output", {"dir", "emit_svg", "seed"}},
  };
  return s;
}

class Reader {
 public:
  explicit Reader(const toml::table& root) : root_(root) {}

  void real(const char* table, const char* key, double& out, bool required = false) {
    const toml::node* n = find(table, key, required);
    if (!n) return;
    if (auto v = n->value<double>(); v && (n->is_floating_point() || n->is_integer())) {
      out = *v;
      return;
    }
    fail(table, key, "expected a number");
  }
  void integer(const char* table, const char* key, int& out) {
    const toml::node* n = find(table, key, false);
    if (!n) return;
    if (n->is_integer()) {
      out = static_cast<int>(*n->value<std::int64_t>());
      return;
    }
    fail(table, key, "expected an integer");
  }
  void unsigned64(const char* table, const char* key, std::uint64_t& out) {
    const toml::node* n = find(table, key, false);
    if (!n) return;
    if (n->is_integer() && *n->value<std::int64_t>() >= 0) {
      out = static_cast<std::uint64_t>(*n->value<std::int64_t>());
      return;
    }
    fail(table, key, "expected a non-negative integer");
  }
  void boolean(const char* table, const char* key, bool& out) {
    const toml::node* n = find(table, key, false);
    if (!n) return;
    if (n->is_boolean()) {
      out = *n->value<bool>();
      return;
    }
    fail(table, key, "expected true or false");
  }
  void string(const char* table, const char* key, std::string& out) {
    const toml::node* n = find(table, key, false);
    if (!n) return;
    if (n->is_string()) {
      out = *n->value<std::string>();
      return;
    }
    fail(table, key, "expected a string");
  }
  void reals(const char* table, const char* key, std::vector<double>& out) {
    const toml::node* n = find(table, key, false);
    if (!n) return;
    const toml::array* arr = n->as_array();
    if (!arr) fail(table, key, "expected an array of numbers");
    out.clear();
    for (const toml::node& e : *arr) {
      if (!(e.is_floating_point() || e.is_integer())) fail(table, key, "expected an array of numbers");
      out.push_back(*e.value<double>());
    }
  }

  [[noreturn]] static void fail(const std::string& table, const std::string& key,
                                const std::string& what) {
    throw ConfigError(table + "." + key + ": " + what);
  }

 private:
  const toml::node* find(const char* table, const char* key, bool required) {
    const toml::table* t = root_[table].as_table();
    const toml::node* n = t ? t->get(key) : nullptr;
    if (!n && required) fail(table, key, "required key is missing");
    return n;
  }
  const toml::table& root_;
};

void reject_unknown(const toml::table& root) {
  for (auto&& [k, v] : root) {
    const std::string name(k.str());
    auto it = schema().find(name);
    if (it == schema().end()) throw ConfigError(name + ": unknown table or key");
    const toml::table* t = v.as_table();
    if (!t) throw ConfigError(name + ": expected a table");
    for (auto&& [kk, vv] : *t) {
      const std::string key(kk.str());
      if (!it->second.count(key)) throw ConfigError(name + "." + key + ": unknown key");
    }
  }
}

void validate(const RunConfig& c) {
  auto positive = [](double v, const char* path) {
    if (!(v > 0.0)) throw ConfigError(std::string(path) + ": must be positive");
  };
  positive(c.ambient.m, "ambient.m");
  positive(c.ambient.r_max, "ambient.r_max");
  positive(c.ambient.tol_ode, "ambient.tol_ode");
  positive(c.initial.r0, "initial.r0");
  positive(c.flow.t_end, "flow.t_end");
  positive(c.flow.dt_init, "flow.dt_init");
  positive(c.flow.tol_step, "flow.tol_step");
  positive(c.flow.safety, "flow.safety");
  positive(c.shitam.tol_R, "shitam.tol_R");
  if (c.flow.safety > 1.0) throw ConfigError("flow.safety: must not exceed 1");
  if (c.flow.cadence < 1) throw ConfigError("flow.cadence: must be at least 1");
  if (c.n < 8 || c.n % 2) throw ConfigError("grid.n: must be even and at least 8");
  if (c.inequality.l_max < 1 || 2 * c.inequality.l_max >= c.n)
    throw ConfigError("inequality.l_max: must satisfy 1 <= l_max < n/2");
  if (c.inequality.iters < 0) throw ConfigError("inequality.iters: must be non-negative");
  const std::string& k = c.initial.f_kind;
  if (k == "legendre") {
    if (c.initial.coefficients.empty())
      throw ConfigError("initial.coefficients: required for f_kind = \"legendre\"");
    if (2 * static_cast<int>(c.initial.coefficients.size()) > c.n)
      throw ConfigError("initial.coefficients: more modes than the grid resolves");
  } else if (k == "mobius") {
    if (!(std::abs(c.initial.a) < 1.0)) throw ConfigError("initial.a: must satisfy |a| < 1");
  } else if (k == "file") {
    if (c.initial.path.empty()) throw ConfigError("initial.path: required for f_kind = \"file\"");
    if (!std::filesystem::exists(c.initial.path))
      throw ConfigError("initial.path: file not found: " + c.initial.path);
  } else if (k != "zero") {
    throw ConfigError("initial.f_kind: must be one of zero, legendre, mobius, file");
  }
}

RunConfig from_table(const toml::table& root, const std::filesystem::path& base_dir) {
  reject_unknown(root);
  RunConfig c;
  Reader r(root);
  r.real("ambient", "m", c.ambient.m, true);
  r.real("ambient", "r_max", c.ambient.r_max);
  r.real("ambient", "tol_ode", c.ambient.tol_ode);
  r.real("initial", "r0", c.initial.r0, true);
  r.string("initial", "f_kind", c.initial.f_kind);
  r.reals("initial", "coefficients", c.initial.coefficients);
  r.real("initial", "a", c.initial.a);
  r.string("initial", "path", c.initial.path);
  r.integer("grid", "n", c.n);
  r.real("flow", "t_end", c.flow.t_end);
  r.real("flow", "dt_init", c.flow.dt_init);
  r.real("flow", "tol_step", c.flow.tol_step);
  r.real("flow", "safety", c.flow.safety);
  r.integer("flow", "cadence", c.flow.cadence);
  r.boolean("shitam", "enabled", c.shitam.enabled);
  r.real("shitam", "tol_R", c.shitam.tol_R);
  r.boolean("inequality", "enabled", c.inequality.enabled);
  r.integer("inequality", "l_max", c.inequality.l_max);
  r.integer("inequality", "iters", c.inequality.iters);
  r.string("output", "dir", c.output.dir);
  r.boolean("output", "emit_svg", c.output.emit_svg);
  r.unsigned64("output", "seed", c.output.seed);
  if (!c.initial.path.empty() && std::filesystem::path(c.initial.path).is_relative())
    c.initial.path = (base_dir / c.initial.path).string();
  validate(c);
  return c;
}

}  // namespace

RunConfig parse_config_text(const std::string& text, const std::filesystem::path& base_dir) {
  toml::table root;
  try {
    root = toml::parse(text);
  } catch (const toml::parse_error& e) {
    std::ostringstream msg;
    msg << "TOML syntax error at line " << e.source().begin.line << ": " << e.description();
    throw ConfigError(msg.str());
  }
  return from_table(root, base_dir);
}

RunConfig parse_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  RunConfig c = parse_config_text(ss.str(), path.parent_path().empty() ? "." : path.parent_path());
  c.source = path;
  return c;
}

Field initial_profile(const RunConfig& config, const ColatitudeGrid& grid) {
  const auto& init = config.initial;
  auto from_coeffs = [&](const std::vector<double>& c) {
    Eigen::VectorXd v = Eigen::Map<const Eigen::VectorXd>(c.data(), c.size());
    return normalize_profile(grid, grid.legendre_synth(v));
  };
  if (init.f_kind == "zero") return Field::Zero(grid.size());
  if (init.f_kind == "legendre") return from_coeffs(init.coefficients);
  if (init.f_kind == "mobius") return mobius_profile(grid, init.a);
  // Whitespace or comma separated Legendre coefficients, '#' starts a comment.
  std::ifstream in(init.path);
  if (!in) throw ConfigError("initial.path: cannot read " + init.path);
  std::vector<double> c;
  std::string line;
  while (std::getline(in, line)) {
    line = line.substr(0, line.find('#'));
    for (char& ch : line)
      if (ch == ',') ch = ' ';
    std::istringstream ls(line);
    std::string tok;
    while (ls >> tok) {
      try {
        std::size_t used = 0;
        c.push_back(std::stod(tok, &used));
        if (used != tok.size()) throw std::invalid_argument(tok);
      } catch (const std::exception&) {
        throw ConfigError("initial.path: not a number: " + tok);
      }
    }
  }
  if (c.empty()) throw ConfigError("initial.path: no coefficients in " + init.path);
  if (2 * static_cast<int>(c.size()) > grid.size())
    throw ConfigError("initial.path: more modes than the grid resolves");
  return from_coeffs(c);
}

}  // namespace horoflow
