#include "cdasim/engine/session.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <unordered_set>

#include "cdasim/error.hpp"

namespace cdasim {

namespace {

void require(bool ok, const std::string& what) {
  if (!ok) throw SimError(ErrorCode::ConfigInvalid, what);
}

void validate_params(const TraderParams& p) {
  require(p.zip.beta_min > 0.0 && p.zip.beta_min <= p.zip.beta_max && p.zip.beta_max <= 1.0,
          "zip.beta_min/max must satisfy 0 < min <= max <= 1");
  require(p.zip.momentum_min >= 0.0 && p.zip.momentum_min <= p.zip.momentum_max &&
              p.zip.momentum_max < 1.0,
          "zip.momentum_min/max must satisfy 0 <= min <= max < 1");
  require(p.zip.margin_min >= 0.0 && p.zip.margin_min <= p.zip.margin_max &&
              p.zip.margin_max <= 1.0,
          "zip.margin_min/max must satisfy 0 <= min <= max <= 1");
  require(p.zip.rel_max >= 0.0 && p.zip.abs_max >= 0.0, "zip perturbation bounds must be >= 0");
  require(p.gdx.gamma >= 0.0 && p.gdx.gamma <= 1.0, "gdx.gamma must lie in [0, 1]");
  require(p.gdx.horizon >= 1, "gdx.horizon must be >= 1");
  require(p.gdx.history >= 1, "gdx.history must be >= 1");
  require(p.aa.theta_min < p.aa.theta_max, "aa.theta_min must be below aa.theta_max");
  require(p.aa.eta >= 1.0, "aa.eta must be >= 1");
  require(p.aa.rho > 0.0 && p.aa.rho <= 1.0, "aa.rho must lie in (0, 1]");
  require(p.aa.window >= 1, "aa.window must be >= 1");
  require(p.aa.alpha_max > 0.0, "aa.alpha_max must be positive");
  require(p.aa.beta1 >= 0.0 && p.aa.beta1 <= 1.0 && p.aa.beta2 >= 0.0 && p.aa.beta2 <= 1.0,
          "aa.beta1/beta2 must lie in [0, 1]");
}

}  // namespace

std::string_view to_string(EngineMode m) noexcept {
  return m == EngineMode::Sequential ? "seq" : "threaded";
}
std::string_view to_string(Parallelism p) noexcept {
  return p == Parallelism::Serialized ? "serialized" : "full";
}
std::string_view to_string(DelayKind k) noexcept { return k == DelayKind::Sleep ? "sleep" : "spin"; }

std::optional<EngineMode> parse_engine_mode(std::string_view s) {
  if (s == "seq" || s == "sequential") return EngineMode::Sequential;
  if (s == "threaded" || s == "thr") return EngineMode::Threaded;
  return std::nullopt;
}
std::optional<Parallelism> parse_parallelism(std::string_view s) {
  if (s == "serialized") return Parallelism::Serialized;
  if (s == "full") return Parallelism::Full;
  return std::nullopt;
}
std::optional<DelayKind> parse_delay_kind(std::string_view s) {
  if (s == "sleep") return DelayKind::Sleep;
  if (s == "spin") return DelayKind::Spin;
  return std::nullopt;
}

void SessionConfig::validate() const {
  require(duration > 0.0, "duration must be positive");
  require(!roster.empty(), "roster is empty");
  std::unordered_set<TraderId> ids;
  for (const auto& e : roster) {
    require(ids.insert(e.id).second, "duplicate trader id " + std::to_string(e.id));
    require(!e.delay_ms || *e.delay_ms >= 0.0, "per-trader delay must be >= 0");
  }
  const auto nb = buyers().size();
  const auto ns = sellers().size();
  require(nb == ns, "roster must have equal buyer and seller counts");
  require(nb == static_cast<std::size_t>(schedule.n_per_side),
          "roster size per side must equal n_per_side");
  schedule.validate();
  validate_params(traders);
}

std::vector<TraderId> SessionConfig::buyers() const {
  std::vector<TraderId> out;
  for (const auto& e : roster)
    if (e.side == Side::Bid) out.push_back(e.id);
  return out;
}

std::vector<TraderId> SessionConfig::sellers() const {
  std::vector<TraderId> out;
  for (const auto& e : roster)
    if (e.side == Side::Ask) out.push_back(e.id);
  return out;
}

void ThreadedConfig::validate() const {
  session.validate();
  require(wall_duration > 0.0, "wall_duration must be positive");
  require(time_scale > 0.0, "time_scale must be positive");
  require(queue_capacity >= 1, "queue_capacity must be >= 1");
  require(slice_ms > 0.0, "slice_ms must be positive");
  require(max_events_per_respond >= 1, "max_events_per_respond must be >= 1");
  require(drain_timeout > 0.0, "drain_timeout must be positive");
  for (const auto& [algo, d] : delay_ms) {
    require(d >= 0.0, "delay for " + std::string(to_string(algo)) + " must be >= 0");
  }
}

double ThreadedConfig::delay_for(const RosterEntry& e) const {
  if (e.delay_ms) return *e.delay_ms;
  auto it = delay_ms.find(e.algo);
  return it == delay_ms.end() ? 0.0 : it->second;
}

const TraderOutcome* SessionResult::trader(TraderId id) const {
  auto it = std::find_if(traders.begin(), traders.end(),
                         [id](const TraderOutcome& t) { return t.id == id; });
  return it == traders.end() ? nullptr : &*it;
}

Price SessionResult::total_profit() const {
  Price sum = 0;
  for (const auto& t : traders) sum += t.profit;
  return sum;
}

std::string SessionResult::canonical() const {
  std::string out = fmt::format("mode={} seed={} polls={} changes={} rejected={} stale={}\n",
                                to_string(mode), seed, polls, market_changes, rejected_orders,
                                stale_orders);
  out += kTapeCsvHeader;
  out += '\n';
  for (const auto& t : tape) {
    out += tape_csv_row(t);
    out += '\n';
  }
  for (const auto& t : traders) {
    out += fmt::format("trader {} {} {} profit={} quotes={} responds={} orders={} fills=", t.id,
                       to_string(t.algo), to_string(t.side), t.profit, t.quote_calls,
                       t.respond_calls, t.orders_emitted);
    for (const auto& f : t.fills) out += fmt::format("{}@{}/{};", f.txn.price, f.limit, f.assignment_id);
    out += '\n';
  }
  for (const auto& [algo, v] : appt_by_algo) out += fmt::format("appt {} {:.9f}\n", to_string(algo), v);
  return out;
}

void compute_appt(SessionResult& r) {
  std::map<Algo, std::pair<double, int>> acc;
  for (const auto& t : r.traders) {
    auto& [sum, n] = acc[t.algo];
    sum += t.profit;
    ++n;
  }
  r.appt_by_algo.clear();
  for (const auto& [algo, sn] : acc) r.appt_by_algo[algo] = sn.first / sn.second;
}

}  // namespace cdasim
