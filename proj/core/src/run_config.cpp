#include "rq/run_config.hpp"

#include <charconv>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

#include "rq/error.hpp"

namespace rq {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  return s.substr(b, s.find_last_not_of(" \t\r") - b + 1);
}

template <typename T>
T parse_number(const std::string& key, const std::string& value) {
  T out{};
  const char* end = value.data() + value.size();
  const auto [ptr, ec] = std::from_chars(value.data(), end, out);
  require(ec == std::errc() && ptr == end, ErrorCode::Config,
          "bad value '" + value + "' for key " + key);
  return out;
}

struct Field {
  std::function<void(RunConfig&, const std::string&)> set;
  std::function<std::string(const RunConfig&)> get;
};

template <typename T>
Field numeric(T RunConfig::*member) {
  return {[member](RunConfig& c, const std::string& v) { c.*member = parse_number<T>("", v); },
          [member](const RunConfig& c) {
            // shortest text that parses back to the same value
            char buf[64];
            const auto res = std::to_chars(buf, buf + sizeof buf, c.*member);
            return std::string(buf, res.ptr);
          }};
}

Field text(std::string RunConfig::*member) {
  return {[member](RunConfig& c, const std::string& v) { c.*member = v; },
          [member](const RunConfig& c) { return c.*member; }};
}

const std::map<std::string, Field>& fields() {
  static const std::map<std::string, Field> table = {
      {"seed", numeric(&RunConfig::seed)},
      {"gamma", numeric(&RunConfig::gamma)},
      {"riesz_order", numeric(&RunConfig::riesz_order)},
      {"scales", numeric(&RunConfig::scales)},
      {"alias_radius", numeric(&RunConfig::alias_radius)},
      {"prox", text(&RunConfig::prox)},
      {"mu", numeric(&RunConfig::mu)},
      {"iters", numeric(&RunConfig::iters)},
      {"beta", numeric(&RunConfig::beta)},
      {"filter", text(&RunConfig::filter)},
      {"tau1", numeric(&RunConfig::tau1)},
      {"tau2", numeric(&RunConfig::tau2)},
      {"scheme", numeric(&RunConfig::scheme)},
      {"mu_spatial", numeric(&RunConfig::mu_spatial)},
      {"mu_time", numeric(&RunConfig::mu_time)},
      {"time_scales", numeric(&RunConfig::time_scales)},
      {"order", text(&RunConfig::order)},
      {"levels", numeric(&RunConfig::levels)},
      {"channels", numeric(&RunConfig::channels)},
      {"latent_dim", numeric(&RunConfig::latent_dim)},
      {"kernel", numeric(&RunConfig::kernel)},
      {"epochs", numeric(&RunConfig::epochs)},
      {"batch", numeric(&RunConfig::batch)},
      {"learning_rate", numeric(&RunConfig::learning_rate)},
      {"sigma", numeric(&RunConfig::sigma)},
      {"runs", numeric(&RunConfig::runs)},
  };
  return table;
}

}  // namespace

void RunConfig::set(const std::string& key, const std::string& value) {
  const auto it = fields().find(key);
  require(it != fields().end(), ErrorCode::Config, "unknown config key '" + key + "'");
  try {
    it->second.set(*this, value);
  } catch (const Error&) {
    fail(ErrorCode::Config, "bad value '" + value + "' for key " + key);
  }
}

void RunConfig::validate() const {
  auto check = [](bool ok, const std::string& what) { require(ok, ErrorCode::Config, what); };
  check(gamma > 1.0, "gamma must exceed 1");
  check(riesz_order >= 0, "riesz_order must be non-negative");
  check(scales >= 1, "scales must be at least 1");
  check(alias_radius >= 1, "alias_radius must be at least 1");
  check(prox == "soft" || prox == "hard" || prox == "relu" || prox == "identity",
        "prox must be soft, hard, relu or identity");
  check(mu >= 0.0, "mu must be non-negative");
  check(iters >= 1, "iters must be at least 1");
  check(beta > 0.0, "beta must be positive");
  check(filter == "low" || filter == "high" || filter == "band" || filter == "stop" || filter == "all",
        "filter must be low, high, band, stop or all");
  check(tau1 >= 0 && tau2 >= tau1, "thresholds need 0 <= tau1 <= tau2");
  check(scheme == 1 || scheme == 2, "scheme must be 1 or 2");
  check(mu_spatial >= 0.0 && mu_time >= 0.0, "series mu values must be non-negative");
  check(time_scales >= 1, "time_scales must be at least 1");
  check(order == "spatial-first" || order == "temporal-first",
        "order must be spatial-first or temporal-first");
  check(levels >= 1 && channels >= 1 && latent_dim >= 1, "model sizes must be positive");
  check(kernel >= 1 && kernel % 2 == 1, "kernel must be a positive odd size");
  check(epochs >= 1 && batch >= 1, "epochs and batch must be positive");
  check(learning_rate > 0.0, "learning_rate must be positive");
  check(sigma > 0.0, "sigma must be positive");
  check(runs >= 1, "runs must be positive");
}

std::string RunConfig::to_text() const {
  std::string out;
  for (const auto& [key, field] : fields()) out += key + " = " + field.get(*this) + "\n";
  return out;
}

std::vector<std::string> RunConfig::keys() {
  std::vector<std::string> out;
  for (const auto& entry : fields()) out.push_back(entry.first);
  return out;
}

RunConfig parse_run_config(const std::string& text) {
  RunConfig cfg;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    require(eq != std::string::npos, ErrorCode::Config,
            "line " + std::to_string(lineno) + ": expected key = value");
    cfg.set(trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
  }
  cfg.validate();
  return cfg;
}

RunConfig load_run_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  require(static_cast<bool>(in), ErrorCode::Io, "cannot open config " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_run_config(buf.str());
}

}  // namespace rq
