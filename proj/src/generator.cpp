#include "fundnet/generator.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <set>

#include "fundnet/errors.hpp"

namespace fundnet {

namespace {

using Rng = std::mt19937_64;

std::string padded_id(char prefix, int index, int width) {
  std::string digits = std::to_string(index + 1);
  if (static_cast<int>(digits.size()) < width)
    digits.insert(0, width - digits.size(), '0');
  return prefix + digits;
}

int id_width(int count) {
  int width = 1;
  for (int v = count; v >= 10; v /= 10) ++width;
  return std::max(width, 4);
}

double uniform(Rng& rng, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

int uniform_int(Rng& rng, int lo, int hi) {
  return std::uniform_int_distribution<int>(lo, hi)(rng);
}

bool bernoulli(Rng& rng, double p) {
  if (p <= 0.0) return false;
  if (p >= 1.0) return true;
  return std::bernoulli_distribution(p)(rng);
}

double beta_draw(Rng& rng, double a, double b) {
  std::gamma_distribution<double> ga(a, 1.0), gb(b, 1.0);
  const double x = ga(rng), y = gb(rng);
  return x + y > 0.0 ? x / (x + y) : 0.5;
}

void check_config(const GeneratorConfig& c) {
  const auto fail = [](const std::string& why) {
    throw InfeasibleTargets(why);
  };
  if (c.n_funds < 1) fail("n_funds must be at least 1");
  if (c.n_assets < 3) fail("n_assets must be at least 3");
  if (c.mean_cross_degree < 0.0) fail("mean_cross_degree must be >= 0");
  if (c.mean_cross_degree >= c.n_funds - 1 && c.n_funds > 1)
    fail("mean cross-holdings degree >= n_funds - 1 cannot be met");
  if (c.n_funds > 1 &&
      c.mean_cross_degree > 0.5 * (c.n_funds - 1))
    fail("mean cross-holdings degree too dense for rejection sampling");
  if (c.mean_asset_degree < 1.0) fail("mean_asset_degree must be >= 1");
  if (c.mean_asset_degree > c.n_assets)
    fail("mean fund-asset degree exceeds asset count");
  for (double p :
       {c.pa_strength, c.admin_affinity, c.dominant_participation,
        c.cash_participation, c.open_fraction})
    if (p < 0.0 || p > 1.0) fail("probability parameter outside [0, 1]");
  if (c.dominant_share < 0.0 || c.dominant_share >= 1.0)
    fail("dominant_share must be in [0, 1)");
  if (!(c.dominant_weight_low > 0.0) ||
      c.dominant_weight_high <= c.dominant_weight_low ||
      c.dominant_weight_high >= 1.0)
    fail("dominant weight range must satisfy 0 < low < high < 1");
  if (!(c.fraction_low > 0.0) || c.fraction_high < c.fraction_low ||
      c.fraction_high > 1.0)
    fail("cross-holding fraction range must satisfy 0 < low <= high <= 1");
  if (c.class_weights.empty()) fail("class_weights must not be empty");
}

/// Caps every investee column at a 0.9 internal share, scaling the whole
/// column when the drawn fractions overshoot. The tolerance keeps the cap
/// idempotent: a column scaled to 0.9 once is not rescaled over rounding
/// noise.
void cap_columns(std::vector<CrossHoldingEntry>& entries, int n_funds) {
  std::vector<double> col_sums(n_funds, 0.0);
  for (const CrossHoldingEntry& e : entries) col_sums[e.investee] += e.fraction;
  for (CrossHoldingEntry& e : entries) {
    if (col_sums[e.investee] > 0.9 * (1.0 + 1e-9))
      e.fraction *= 0.9 / col_sums[e.investee];
  }
}

std::vector<CrossHoldingEntry> draw_cross_edges(
    const GeneratorConfig& c, Rng& rng,
    const std::vector<std::vector<std::int32_t>>& admin_members,
    const std::vector<int>& fund_admin) {
  std::vector<CrossHoldingEntry> entries;
  if (c.n_funds < 2) return entries;
  const long long target =
      std::llround(c.mean_cross_degree * static_cast<double>(c.n_funds));
  std::set<std::pair<std::int32_t, std::int32_t>> seen;
  std::vector<std::int32_t> pa_pool;  // one entry per received investment
  pa_pool.reserve(static_cast<size_t>(target));

  for (long long k = 0; k < target; ++k) {
    for (int attempt = 0; attempt < 200; ++attempt) {
      const std::int32_t investor = uniform_int(rng, 0, c.n_funds - 1);
      std::int32_t investee;
      const auto& peers = admin_members[fund_admin[investor]];
      if (bernoulli(rng, c.admin_affinity) && peers.size() > 1) {
        investee = peers[uniform_int(rng, 0, static_cast<int>(peers.size()) - 1)];
      } else if (!pa_pool.empty() && bernoulli(rng, c.pa_strength)) {
        investee =
            pa_pool[uniform_int(rng, 0, static_cast<int>(pa_pool.size()) - 1)];
      } else {
        investee = uniform_int(rng, 0, c.n_funds - 1);
      }
      if (investee == investor) continue;
      if (!seen.emplace(investor, investee).second) continue;
      entries.push_back(
          {investor, investee, uniform(rng, c.fraction_low, c.fraction_high)});
      pa_pool.push_back(investee);
      break;
    }
  }
  cap_columns(entries, c.n_funds);
  return entries;
}

std::string next_month(const std::string& label) {
  // YYYY-MM labels advance by a month; anything else gets a counter suffix.
  if (label.size() == 7 && label[4] == '-' &&
      std::all_of(label.begin(), label.begin() + 4, ::isdigit) &&
      std::isdigit(label[5]) && std::isdigit(label[6])) {
    int year = std::stoi(label.substr(0, 4));
    int month = std::stoi(label.substr(5, 2));
    if (month >= 1 && month <= 12) {
      ++month;
      if (month == 13) {
        month = 1;
        ++year;
      }
      char buf[8];
      std::snprintf(buf, sizeof(buf), "%04d-%02d", year, month);
      return buf;
    }
  }
  return label + "+1";
}

}  // namespace

MarketSnapshot generate_market(const GeneratorConfig& config) {
  check_config(config);
  Rng rng(config.seed);

  MarketSnapshot snapshot;
  snapshot.date = config.date;

  // fund table
  const int n = config.n_funds;
  const int n_admins = config.n_administrators > 0
                           ? config.n_administrators
                           : std::max(1, n / 25);
  const int fund_width = id_width(n);
  const int admin_width = id_width(n_admins);
  std::vector<double> admin_weights(n_admins);
  for (int k = 0; k < n_admins; ++k) admin_weights[k] = 1.0 / (k + 1.0);
  std::discrete_distribution<int> admin_dist(admin_weights.begin(),
                                             admin_weights.end());
  std::vector<double> class_probs;
  for (const auto& [name, w] : config.class_weights) class_probs.push_back(w);
  std::discrete_distribution<int> class_dist(class_probs.begin(),
                                             class_probs.end());

  std::vector<int> fund_admin(n);
  std::vector<std::vector<std::int32_t>> admin_members(n_admins);
  for (int i = 0; i < n; ++i) {
    FundInfo f;
    f.id = padded_id('F', i, fund_width);
    f.fund_class = config.class_weights[class_dist(rng)].first;
    fund_admin[i] = admin_dist(rng);
    f.administrator = padded_id('M', fund_admin[i], admin_width);
    f.open_ended = bernoulli(rng, config.open_fraction);
    admin_members[fund_admin[i]].push_back(i);
    snapshot.funds.push_back(std::move(f));
  }

  // asset table: GOV and CASH first, then ordinary assets
  const int m = config.n_assets;
  const int asset_width = id_width(m);
  static const char* kAssetClasses[] = {"corporate_bond", "equity",
                                        "derivative", "foreign"};
  Vec prices(m);
  snapshot.assets.push_back({"GOV", "government_bond"});
  prices[0] = 100.0;
  snapshot.assets.push_back({"CASH", "cash"});
  prices[1] = 1.0;
  for (int a = 2; a < m; ++a) {
    snapshot.assets.push_back(
        {padded_id('A', a, asset_width), kAssetClasses[uniform_int(rng, 0, 3)]});
    prices[a] = std::pow(10.0, uniform(rng, 0.0, 2.0));
  }

  // cross-holdings
  std::vector<CrossHoldingEntry> cross_entries =
      draw_cross_edges(config, rng, admin_members, fund_admin);

  // portfolios: dominant asset + cash + preferential picks of the rest
  const double extra_mean = std::max(
      0.0, config.mean_asset_degree - config.dominant_participation -
               config.cash_participation);
  std::vector<BipartiteEdge> positions;
  std::vector<double> asset_popularity;  // PA pool over ordinary assets
  std::vector<std::int32_t> asset_pool;
  std::vector<double> fund_size(n);
  std::normal_distribution<double> size_dist(std::log(1e6), 1.0);

  for (int i = 0; i < n; ++i) {
    fund_size[i] = std::exp(size_dist(rng));
    double gov_w = 0.0, cash_w = 0.0;
    if (bernoulli(rng, config.dominant_participation))
      gov_w = config.dominant_weight_low +
              (config.dominant_weight_high - config.dominant_weight_low) *
                  beta_draw(rng, 2.0, 3.0);
    if (bernoulli(rng, config.cash_participation))
      cash_w = uniform(rng, 0.01, 0.05);

    int k_extra =
        extra_mean > 0.0
            ? static_cast<int>(std::poisson_distribution<int>(extra_mean)(rng))
            : 0;
    k_extra = std::min(k_extra, m - 2);
    if (gov_w + cash_w <= 0.0) k_extra = std::max(k_extra, 1);

    std::set<std::int32_t> picked;
    for (int s = 0; s < k_extra; ++s) {
      for (int attempt = 0; attempt < 100; ++attempt) {
        std::int32_t a;
        if (!asset_pool.empty() && bernoulli(rng, config.pa_strength)) {
          a = asset_pool[uniform_int(rng, 0,
                                     static_cast<int>(asset_pool.size()) - 1)];
        } else {
          a = uniform_int(rng, 2, m - 1);
        }
        if (picked.insert(a).second) {
          asset_pool.push_back(a);
          break;
        }
      }
    }

    std::vector<double> slot_weights;
    for (size_t s = 0; s < picked.size(); ++s)
      slot_weights.push_back(uniform(rng, 0.2, 1.0));
    const double total_slots =
        std::accumulate(slot_weights.begin(), slot_weights.end(), 0.0);
    const double rest_w = std::max(0.0, 1.0 - gov_w - cash_w);

    if (gov_w > 0.0) positions.push_back({i, 0, gov_w * fund_size[i]});
    if (cash_w > 0.0) positions.push_back({i, 1, cash_w * fund_size[i]});
    size_t s = 0;
    for (std::int32_t a : picked) {
      const double w = rest_w * slot_weights[s++] / total_slots;
      if (w > 0.0) positions.push_back({i, a, w * fund_size[i]});
    }
  }

  // every asset needs at least one holder
  {
    std::vector<double> held(m, 0.0);
    for (const BipartiteEdge& e : positions) held[e.asset] += e.value;
    for (int a = 0; a < m; ++a) {
      if (!(held[a] > 0.0)) {
        const int f = uniform_int(rng, 0, n - 1);
        positions.push_back({f, a, uniform(rng, 0.001, 0.01) * fund_size[f]});
      }
    }
  }

  // pin the dominant asset's share of total value exactly
  if (config.dominant_share > 0.0) {
    double dominant_total = 0.0, rest_total = 0.0;
    for (const BipartiteEdge& e : positions)
      (e.asset == 0 ? dominant_total : rest_total) += e.value;
    if (dominant_total > 0.0) {
      const double scale = config.dominant_share * rest_total /
                           ((1.0 - config.dominant_share) * dominant_total);
      for (BipartiteEdge& e : positions)
        if (e.asset == 0) e.value *= scale;
    }
  }

  snapshot.cross = build_cross_holdings(n, std::move(cross_entries));
  snapshot.holdings =
      build_bipartite_holdings(n, m, std::move(positions), prices);
  rebuild_indices(snapshot);
  validate_snapshot(snapshot);
  return snapshot;
}

std::vector<MarketSnapshot> snapshot_series(const GeneratorConfig& config,
                                            int periods, double churn) {
  if (periods < 1) throw InfeasibleTargets("periods must be at least 1");
  if (churn < 0.0 || churn > 1.0)
    throw InfeasibleTargets("churn must be in [0, 1]");

  std::vector<MarketSnapshot> series;
  series.push_back(generate_market(config));
  Rng rng(config.seed ^ 0x9e3779b97f4a7c15ull);  // independent rewiring stream

  for (int p = 1; p < periods; ++p) {
    const MarketSnapshot& prev = series.back();
    MarketSnapshot next;
    next.date = next_month(prev.date);
    next.funds = prev.funds;
    next.assets = prev.assets;
    next.holdings = prev.holdings;

    std::vector<CrossHoldingEntry> entries = prev.cross.entries();
    const int rewired =
        static_cast<int>(std::llround(churn * static_cast<double>(entries.size())));
    if (rewired == 0) {
      next.cross = prev.cross;
      rebuild_indices(next);
      validate_snapshot(next);
      series.push_back(std::move(next));
      continue;
    }
    std::vector<size_t> order(entries.size());
    std::iota(order.begin(), order.end(), size_t{0});
    std::shuffle(order.begin(), order.end(), rng);

    std::vector<CrossHoldingEntry> kept;
    std::set<std::pair<std::int32_t, std::int32_t>> seen;
    for (size_t k = static_cast<size_t>(rewired); k < order.size(); ++k) {
      kept.push_back(entries[order[k]]);
      seen.emplace(kept.back().investor, kept.back().investee);
    }
    for (int k = 0; k < rewired; ++k) {
      for (int attempt = 0; attempt < 1000; ++attempt) {
        const std::int32_t investor = uniform_int(rng, 0, config.n_funds - 1);
        const std::int32_t investee = uniform_int(rng, 0, config.n_funds - 1);
        if (investor == investee) continue;
        if (!seen.emplace(investor, investee).second) continue;
        kept.push_back({investor, investee,
                        uniform(rng, config.fraction_low, config.fraction_high)});
        break;
      }
    }
    cap_columns(kept, config.n_funds);
    next.cross = build_cross_holdings(config.n_funds, std::move(kept));
    rebuild_indices(next);
    validate_snapshot(next);
    series.push_back(std::move(next));
  }
  return series;
}

}  // namespace fundnet
