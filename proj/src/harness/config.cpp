#include "cdasim/harness/config.hpp"

#include <fmt/format.h>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>
#include <charconv>
#include <fstream>
#include <functional>
#include <map>

#include "cdasim/error.hpp"

namespace cdasim {

namespace {

namespace pt = boost::property_tree;

[[noreturn]] void bad(const std::string& key, const std::string& what) {
  throw SimError(ErrorCode::ConfigInvalid, fmt::format("{}: {}", key, what));
}

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t");
  return std::string(s.substr(b, e - b + 1));
}

template <class T>
T number(const std::string& key, const std::string& raw) {
  const std::string v = trim(raw);
  T out{};
  const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (v.empty() || ec != std::errc{} || ptr != v.data() + v.size()) {
    bad(key, fmt::format("not a number: '{}'", raw));
  }
  return out;
}

std::vector<std::string> split_list(const std::string& raw) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (start <= raw.size()) {
    const auto comma = raw.find(',', start);
    const auto end = comma == std::string::npos ? raw.size() : comma;
    out.push_back(trim(std::string_view(raw).substr(start, end - start)));
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return out;
}

Algo algo_value(const std::string& key, const std::string& raw) {
  auto a = parse_algo(trim(raw));
  if (!a) bad(key, fmt::format("unknown algorithm '{}'", raw));
  return *a;
}

using Setter = std::function<void(ExperimentConfig&, const std::string& key, const std::string&)>;

template <class T, class F>
Setter num(F field) {
  return [field](ExperimentConfig& c, const std::string& k, const std::string& v) {
    field(c) = number<T>(k, v);
  };
}

#define NUM(T, expr) num<T>([](ExperimentConfig& c) -> T& { return expr; })

const std::map<std::string, Setter>& setters() {
  static const std::map<std::string, Setter> table = [] {
    std::map<std::string, Setter> m;
    // schedule
    m["schedule.price_floor"] = NUM(Price, c.sweep.engine.session.schedule.price_floor);
    m["schedule.price_ceil"] = NUM(Price, c.sweep.engine.session.schedule.price_ceil);
    m["schedule.offset_amplitude"] = NUM(double, c.sweep.engine.session.schedule.offset.amplitude);
    m["schedule.offset_wavelength"] =
        NUM(double, c.sweep.engine.session.schedule.offset.wavelength);
    m["schedule.offset_drift"] = NUM(double, c.sweep.engine.session.schedule.offset.drift);
    m["schedule.replenish_interval"] =
        NUM(double, c.sweep.engine.session.schedule.replenish_interval);

    // traders
    m["traders.zip.beta_min"] = NUM(double, c.sweep.engine.session.traders.zip.beta_min);
    m["traders.zip.beta_max"] = NUM(double, c.sweep.engine.session.traders.zip.beta_max);
    m["traders.zip.momentum_min"] = NUM(double, c.sweep.engine.session.traders.zip.momentum_min);
    m["traders.zip.momentum_max"] = NUM(double, c.sweep.engine.session.traders.zip.momentum_max);
    m["traders.zip.margin_min"] = NUM(double, c.sweep.engine.session.traders.zip.margin_min);
    m["traders.zip.margin_max"] = NUM(double, c.sweep.engine.session.traders.zip.margin_max);
    m["traders.zip.rel_max"] = NUM(double, c.sweep.engine.session.traders.zip.rel_max);
    m["traders.zip.abs_max"] = NUM(double, c.sweep.engine.session.traders.zip.abs_max);
    m["traders.gdx.gamma"] = NUM(double, c.sweep.engine.session.traders.gdx.gamma);
    m["traders.gdx.horizon"] = NUM(int, c.sweep.engine.session.traders.gdx.horizon);
    m["traders.gdx.history"] = NUM(int, c.sweep.engine.session.traders.gdx.history);
    m["traders.aa.rho"] = NUM(double, c.sweep.engine.session.traders.aa.rho);
    m["traders.aa.window"] = NUM(int, c.sweep.engine.session.traders.aa.window);
    m["traders.aa.theta_min"] = NUM(double, c.sweep.engine.session.traders.aa.theta_min);
    m["traders.aa.theta_max"] = NUM(double, c.sweep.engine.session.traders.aa.theta_max);
    m["traders.aa.theta_init"] = NUM(double, c.sweep.engine.session.traders.aa.theta_init);
    m["traders.aa.r_init"] = NUM(double, c.sweep.engine.session.traders.aa.r_init);
    m["traders.aa.beta1"] = NUM(double, c.sweep.engine.session.traders.aa.beta1);
    m["traders.aa.beta2"] = NUM(double, c.sweep.engine.session.traders.aa.beta2);
    m["traders.aa.lambda_r"] = NUM(double, c.sweep.engine.session.traders.aa.lambda_r);
    m["traders.aa.lambda_a"] = NUM(double, c.sweep.engine.session.traders.aa.lambda_a);
    m["traders.aa.alpha_max"] = NUM(double, c.sweep.engine.session.traders.aa.alpha_max);
    m["traders.aa.eta"] = NUM(double, c.sweep.engine.session.traders.aa.eta);

    // engine
    m["engine.duration"] = NUM(double, c.sweep.engine.session.duration);
    m["engine.wall_duration"] = NUM(double, c.sweep.engine.wall_duration);
    m["engine.time_scale"] = NUM(double, c.sweep.engine.time_scale);
    m["engine.queue_capacity"] = NUM(std::size_t, c.sweep.engine.queue_capacity);
    m["engine.slice_ms"] = NUM(double, c.sweep.engine.slice_ms);
    m["engine.max_events_per_respond"] = NUM(std::size_t, c.sweep.engine.max_events_per_respond);
    m["engine.drain_timeout"] = NUM(double, c.sweep.engine.drain_timeout);
    m["engine.parallelism"] = [](ExperimentConfig& c, const std::string& k, const std::string& v) {
      auto p = parse_parallelism(trim(v));
      if (!p) bad(k, "expected serialized or full");
      c.sweep.engine.parallelism = *p;
    };
    m["engine.delay_kind"] = [](ExperimentConfig& c, const std::string& k, const std::string& v) {
      auto d = parse_delay_kind(trim(v));
      if (!d) bad(k, "expected sleep or spin");
      c.sweep.engine.delay_kind = *d;
    };
    for (Algo a : kAllAlgos) {
      m[fmt::format("engine.delay.{}", to_string(a))] =
          [a](ExperimentConfig& c, const std::string& k, const std::string& v) {
            c.sweep.engine.delay_ms[a] = number<double>(k, v);
          };
    }

    // sweep
    m["sweep.algos"] = [](ExperimentConfig& c, const std::string& k, const std::string& v) {
      const auto parts = split_list(v);
      if (parts.size() != 2) bad(k, "expected two algorithms, e.g. AA,ZIC");
      c.sweep.algo_a = algo_value(k, parts[0]);
      c.sweep.algo_b = algo_value(k, parts[1]);
    };
    m["sweep.n_per_ratio"] = NUM(int, c.sweep.n_per_ratio);
    m["sweep.per_side"] = NUM(int, c.sweep.per_side);
    m["sweep.seed"] = NUM(std::uint64_t, c.sweep.master_seed);
    m["sweep.jobs"] = NUM(unsigned, c.sweep.jobs);
    m["sweep.mode"] = [](ExperimentConfig& c, const std::string& k, const std::string& v) {
      auto mode = parse_engine_mode(trim(v));
      if (!mode) bad(k, "expected seq or threaded");
      c.sweep.mode = *mode;
    };
    m["sweep.ratios"] = [](ExperimentConfig& c, const std::string& k, const std::string& v) {
      c.sweep.ratios.clear();
      if (trim(v).empty()) return;
      for (const auto& part : split_list(v)) c.sweep.ratios.push_back(number<int>(k, part));
    };
    m["sweep.out"] = [](ExperimentConfig& c, const std::string&, const std::string& v) {
      c.out_dir = trim(v);
    };
    return m;
  }();
  return table;
}

#undef NUM

}  // namespace

void apply_config(std::istream& in, ExperimentConfig& cfg) {
  pt::ptree tree;
  try {
    pt::read_ini(in, tree);
  } catch (const pt::ini_parser_error& e) {
    throw SimError(ErrorCode::ConfigInvalid, e.what());
  }

  bool wavelength_set = false;
  for (const auto& [section, body] : tree) {
    if (body.empty()) bad(section, "keys must live inside a [section]");
    for (const auto& [key, value] : body) {
      const std::string full = section + "." + key;
      auto it = setters().find(full);
      if (it == setters().end()) bad(full, "unknown key");
      it->second(cfg, full, value.data());
      if (full == "schedule.offset_wavelength") wavelength_set = true;
    }
  }
  if (!wavelength_set) {
    cfg.sweep.engine.session.schedule.offset.wavelength = cfg.sweep.engine.session.duration;
  }
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream f(path);
  if (!f) throw SimError(ErrorCode::Io, "cannot open " + path.string());
  ExperimentConfig cfg;
  apply_config(f, cfg);
  return cfg;
}

}  // namespace cdasim
