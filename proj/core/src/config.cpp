#include "scalepaint/config.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

#include "scalepaint/errors.hpp"

namespace scalepaint {

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

double to_double(std::string_view key, std::string_view v) {
  const std::string s(trim(v));
  std::size_t used = 0;
  double out = 0.0;
  try {
    out = std::stod(s, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (s.empty() || used != s.size() || !std::isfinite(out)) {
    throw ConfigError("config key '" + std::string(key) + "': expected a number, got '" + s + "'");
  }
  return out;
}

template <typename Int>
Int to_int(std::string_view key, std::string_view v) {
  const auto s = trim(v);
  Int out{};
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  if (s.empty() || ec != std::errc() || ptr != s.data() + s.size()) {
    throw ConfigError("config key '" + std::string(key) + "': expected an integer, got '" +
                      std::string(s) + "'");
  }
  return out;
}

// "4,4; 2,2; 1,1"
std::vector<BlurParams> to_schedule(std::string_view v) {
  std::vector<BlurParams> out;
  std::string_view rest = v;
  while (!rest.empty()) {
    const auto semi = rest.find(';');
    const auto item = trim(rest.substr(0, semi));
    rest = semi == std::string_view::npos ? std::string_view{} : rest.substr(semi + 1);
    if (item.empty()) continue;
    const auto comma = item.find(',');
    if (comma == std::string_view::npos) {
      throw ConfigError("config key 'schedule': expected 'mu,sigma' pairs separated by ';'");
    }
    out.push_back({to_double("schedule", item.substr(0, comma)),
                   to_double("schedule", item.substr(comma + 1))});
  }
  return out;
}

std::string num(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

}  // namespace

void PipelineConfig::validate() const {
  validate_schedule(schedule);
  if (!(w_g >= 0.0) || !(w_l >= 0.0)) throw ConfigError("w_g and w_l must be >= 0");
  if (!(tau_seg > 0.0)) throw ConfigError("tau_seg must be > 0");
  if (min_area < 1) throw ConfigError("min_area must be >= 1");
  if (!(tau_new > 0.0)) throw ConfigError("tau_new must be > 0");
  if (!(diff_threshold > 0.0)) throw ConfigError("diff_threshold must be > 0");
  if (k_init < 2) throw ConfigError("k_init must be >= 2");
  if (max_refinements_per_component < 0) {
    throw ConfigError("max_refinements_per_component must be >= 0");
  }
  if (!(gamma_decay > 0.0 && gamma_decay <= 1.0)) {
    throw ConfigError("gamma_decay must lie in (0, 1]");
  }
  optim.validate();
}

PipelineConfig parse_config(std::string_view text) {
  PipelineConfig cfg;
  using Setter = std::function<void(std::string_view)>;
  const std::map<std::string, Setter, std::less<>> setters = {
      {"schedule", [&](std::string_view v) { cfg.schedule = to_schedule(v); }},
      {"w_g", [&](std::string_view v) { cfg.w_g = to_double("w_g", v); }},
      {"w_l", [&](std::string_view v) { cfg.w_l = to_double("w_l", v); }},
      {"tau_seg", [&](std::string_view v) { cfg.tau_seg = to_double("tau_seg", v); }},
      {"min_area", [&](std::string_view v) { cfg.min_area = to_int<int>("min_area", v); }},
      {"tau_new", [&](std::string_view v) { cfg.tau_new = to_double("tau_new", v); }},
      {"diff_threshold",
       [&](std::string_view v) { cfg.diff_threshold = to_double("diff_threshold", v); }},
      {"k_init", [&](std::string_view v) { cfg.k_init = to_int<int>("k_init", v); }},
      {"max_refinements_per_component",
       [&](std::string_view v) {
         cfg.max_refinements_per_component = to_int<int>("max_refinements_per_component", v);
       }},
      {"gamma_decay", [&](std::string_view v) { cfg.gamma_decay = to_double("gamma_decay", v); }},
      {"alpha", [&](std::string_view v) { cfg.optim.alpha = to_double("alpha", v); }},
      {"beta", [&](std::string_view v) { cfg.optim.beta = to_double("beta", v); }},
      {"lambda", [&](std::string_view v) { cfg.optim.lambda = to_double("lambda", v); }},
      {"t_max", [&](std::string_view v) { cfg.optim.t_max = to_int<int>("t_max", v); }},
      {"gamma", [&](std::string_view v) { cfg.optim.gamma = to_double("gamma", v); }},
      {"samples_per_segment",
       [&](std::string_view v) {
         cfg.optim.samples_per_segment = to_int<int>("samples_per_segment", v);
       }},
      {"adam_beta1", [&](std::string_view v) { cfg.optim.adam_beta1 = to_double("adam_beta1", v); }},
      {"adam_beta2", [&](std::string_view v) { cfg.optim.adam_beta2 = to_double("adam_beta2", v); }},
      {"adam_epsilon",
       [&](std::string_view v) { cfg.optim.adam_epsilon = to_double("adam_epsilon", v); }},
      {"seed", [&](std::string_view v) { cfg.optim.seed = to_int<std::uint64_t>("seed", v); }},
      {"dump_dir",
       [&](std::string_view v) {
         const auto s = trim(v);
         if (s.empty()) {
           cfg.dump_dir.reset();
         } else {
           cfg.dump_dir = std::filesystem::path(std::string(s));
         }
       }},
  };

  int line_no = 0;
  std::string_view rest = text;
  while (!rest.empty()) {
    const auto nl = rest.find('\n');
    std::string_view line = rest.substr(0, nl);
    rest = nl == std::string_view::npos ? std::string_view{} : rest.substr(nl + 1);
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) {
      line = line.substr(0, hash);
    }
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw ConfigError("config line " + std::to_string(line_no) + ": expected 'key = value'");
    }
    const auto key = trim(line.substr(0, eq));
    const auto it = setters.find(key);
    if (it == setters.end()) {
      throw ConfigError("config line " + std::to_string(line_no) + ": unknown key '" +
                        std::string(key) + "'");
    }
    it->second(line.substr(eq + 1));
  }
  cfg.validate();
  return cfg;
}

PipelineConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open config '" + path.string() + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

std::string format_config(const PipelineConfig& cfg) {
  std::ostringstream os;
  os << "schedule = ";
  for (std::size_t i = 0; i < cfg.schedule.size(); ++i) {
    if (i) os << "; ";
    os << num(cfg.schedule[i].mu) << ',' << num(cfg.schedule[i].sigma);
  }
  os << '\n'
     << "w_g = " << num(cfg.w_g) << '\n'
     << "w_l = " << num(cfg.w_l) << '\n'
     << "tau_seg = " << num(cfg.tau_seg) << '\n'
     << "min_area = " << cfg.min_area << '\n'
     << "tau_new = " << num(cfg.tau_new) << '\n'
     << "diff_threshold = " << num(cfg.diff_threshold) << '\n'
     << "k_init = " << cfg.k_init << '\n'
     << "max_refinements_per_component = " << cfg.max_refinements_per_component << '\n'
     << "gamma_decay = " << num(cfg.gamma_decay) << '\n'
     << "alpha = " << num(cfg.optim.alpha) << '\n'
     << "beta = " << num(cfg.optim.beta) << '\n'
     << "lambda = " << num(cfg.optim.lambda) << '\n'
     << "t_max = " << cfg.optim.t_max << '\n'
     << "gamma = " << num(cfg.optim.gamma) << '\n'
     << "samples_per_segment = " << cfg.optim.samples_per_segment << '\n'
     << "adam_beta1 = " << num(cfg.optim.adam_beta1) << '\n'
     << "adam_beta2 = " << num(cfg.optim.adam_beta2) << '\n'
     << "adam_epsilon = " << num(cfg.optim.adam_epsilon) << '\n'
     << "seed = " << cfg.optim.seed << '\n';
  if (cfg.dump_dir) os << "dump_dir = " << cfg.dump_dir->string() << '\n';
  return os.str();
}

}  // namespace scalepaint
