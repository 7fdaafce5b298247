#include "greedyicl/icl.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "greedyicl/errors.hpp"

namespace greedyicl {
namespace {

constexpr std::size_t kTableLimit = std::size_t{1} << 20;

std::vector<double> lgamma_table(double offset, std::size_t size) {
  std::vector<double> table(std::max<std::size_t>(std::min(size, kTableLimit), 1));
  for (std::size_t n = 0; n < table.size(); ++n) table[n] = std::lgamma(offset + static_cast<double>(n));
  return table;
}

// Initial-state term split into its finite part and the count of first-frame
// nodes sitting in groups with zero initial mass.
struct InitialTerm {
  double finite = 0.0;
  std::int64_t stranded = 0;
};

InitialTerm initial_term(const BlockStats& s, int k_active) {
  InitialTerm term;
  if (s.num_times == 1) {
    term.finite = -s.num_nodes * std::log(static_cast<double>(k_active));
    return term;
  }
  const double total_later = static_cast<double>(s.num_nodes) * (s.num_times - 1);
  for (int g = 0; g < s.capacity; ++g) {
    if (s.first_counts[g] == 0) continue;
    if (s.later_counts[g] == 0) {
      term.stranded += s.first_counts[g];
    } else {
      term.finite += static_cast<double>(s.first_counts[g]) * std::log(static_cast<double>(s.later_counts[g]));
    }
  }
  term.finite -= s.num_nodes * std::log(total_later);
  return term;
}

double transition_term(const BlockStats& s, const IclTerms& terms, std::span<const int> active) {
  const int k = static_cast<int>(active.size());
  double sum = 0.0;
  for (int g : active) {
    std::int64_t row = 0;
    for (int h : active) {
      const std::int64_t r = s.trans[s.cell(g, h)];
      sum += terms.dirichlet_cell(r);
      row += r;
    }
    sum += terms.dirichlet_row(k, row);
  }
  return sum;
}

double likelihood_term(const BlockStats& s, const IclTerms& terms, std::span<const int> active) {
  double sum = 0.0;
  for (std::size_t x = 0; x < active.size(); ++x) {
    for (std::size_t y = s.directed ? 0 : x; y < active.size(); ++y) {
      const std::size_t c = s.cell(active[x], active[y]);
      sum += terms.block(s.eta[c], s.npairs[c]);
    }
  }
  return sum;
}

void check_matching(const DynamicNetwork& net, const Partition& p) {
  if (net.num_nodes() != p.num_nodes() || net.num_times() != p.num_times())
    throw DataError("partition is " + std::to_string(p.num_times()) + "x" + std::to_string(p.num_nodes()) +
                    " but network is " + std::to_string(net.num_times()) + "x" +
                    std::to_string(net.num_nodes()));
}

}  // namespace

void Hyperparameters::validate() const {
  for (double v : {a, b, delta})
    if (!(v > 0.0) || !std::isfinite(v)) throw ConfigError("hyperparameters must be positive and finite");
}

bool icl_improves(const IclValue& x, const IclValue& y, double tol) {
  if (x.stranded != y.stranded) return x.stranded < y.stranded;
  return x.finite_total() > y.finite_total() + tol;
}

std::vector<int> BlockStats::nonempty_groups() const {
  std::vector<int> groups;
  for (int g = 0; g < capacity; ++g)
    if (group_size(g) > 0) groups.push_back(g);
  return groups;
}

int BlockStats::num_nonempty() const {
  int k = 0;
  for (int g = 0; g < capacity; ++g) k += group_size(g) > 0;
  return k;
}

// ---------------------------------------------------------------------------
// IclTerms

IclTerms::IclTerms(const Hyperparameters& hyper, int num_nodes, int num_times, bool directed)
    : hyper_(hyper), num_nodes_(num_nodes), num_times_(num_times) {
  hyper_.validate();
  const auto n = static_cast<std::size_t>(num_nodes);
  const auto t = static_cast<std::size_t>(num_times);
  const std::size_t max_pairs = directed ? t * n * (n - 1) : t * n * (n - 1) / 2;
  beta_norm_ = std::lgamma(hyper.a + hyper.b) - std::lgamma(hyper.a) - std::lgamma(hyper.b);
  lg_a_ = lgamma_table(hyper.a, max_pairs + 1);
  lg_b_ = lgamma_table(hyper.b, max_pairs + 1);
  lg_ab_ = lgamma_table(hyper.a + hyper.b, max_pairs + 1);
  lg_delta_ = lgamma_table(hyper.delta, n * (t - 1) + 1);
  if (hyper.delta == 1.0) lg_int_ = lgamma_table(0.0, n * t + n * t + 2);
}

double IclTerms::lg(const std::vector<double>& table, double offset, std::int64_t n) {
  if (static_cast<std::size_t>(n) < table.size()) return table[n];
  return std::lgamma(offset + static_cast<double>(n));
}

double IclTerms::dirichlet_row(int k, std::int64_t r) const {
  if (r == 0) return 0.0;
  if (!lg_int_.empty()) return lg(lg_int_, 0.0, k) - lg(lg_int_, 0.0, k + r);
  const double kd = k * hyper_.delta;
  return std::lgamma(kd) - std::lgamma(kd + static_cast<double>(r));
}

// ---------------------------------------------------------------------------
// Statistics

BlockStats build_stats(const DynamicNetwork& net, const Partition& p) {
  check_matching(net, p);
  BlockStats s;
  const int cap = p.capacity();
  const int n = p.num_nodes();
  const int tt = p.num_times();
  s.capacity = cap;
  s.num_nodes = n;
  s.num_times = tt;
  s.directed = net.directed();
  const auto cells = static_cast<std::size_t>(cap) * cap;
  s.eta.assign(cells, 0);
  s.npairs.assign(cells, 0);
  s.trans.assign(cells, 0);
  s.trans_rows.assign(cap, 0);
  s.occupancy.assign(static_cast<std::size_t>(tt) * cap, 0);
  s.first_counts.assign(cap, 0);
  s.later_counts.assign(cap, 0);

  for (int t = 0; t < tt; ++t) {
    const auto labels = p.frame(t);
    int* occ = s.occupancy.data() + static_cast<std::size_t>(t) * cap;
    for (int g : labels) ++occ[g];
    for (const auto& [i, j] : net.frame(t)) ++s.eta[s.block(labels[i], labels[j])];

    std::vector<int> present;
    for (int g = 0; g < cap; ++g)
      if (occ[g] > 0) present.push_back(g);
    for (int g : present) {
      for (int h : present) {
        const std::int64_t og = occ[g], oh = occ[h];
        if (s.directed) {
          s.npairs[s.cell(g, h)] += g == h ? og * (og - 1) : og * oh;
        } else if (g < h) {
          s.npairs[s.cell(g, h)] += og * oh;
        } else if (g == h) {
          s.npairs[s.cell(g, g)] += og * (og - 1) / 2;
        }
      }
    }
  }

  for (int i = 0; i < n; ++i) {
    ++s.first_counts[p(0, i)];
    for (int t = 1; t < tt; ++t) {
      ++s.later_counts[p(t, i)];
      ++s.trans[s.cell(p(t - 1, i), p(t, i))];
      ++s.trans_rows[p(t - 1, i)];
    }
  }
  return s;
}

double log_marginal_likelihood(const BlockStats& stats, const Hyperparameters& hyper,
                               std::span<const int> active) {
  const IclTerms terms(hyper, stats.num_nodes, stats.num_times, stats.directed);
  return likelihood_term(stats, terms, active);
}

double log_transition_prior(const BlockStats& stats, const Hyperparameters& hyper,
                            std::span<const int> active) {
  const IclTerms terms(hyper, stats.num_nodes, stats.num_times, stats.directed);
  return transition_term(stats, terms, active);
}

double log_initial_prior(const BlockStats& stats, std::span<const int> first_frame_labels,
                         std::span<const int> active) {
  if (first_frame_labels.size() != static_cast<std::size_t>(stats.num_nodes))
    throw DataError("first-frame labels do not cover every node");
  if (stats.num_times == 1)
    return -static_cast<double>(first_frame_labels.size()) * std::log(static_cast<double>(active.size()));
  const double total_later = static_cast<double>(stats.num_nodes) * (stats.num_times - 1);
  double sum = 0.0;
  for (int g : first_frame_labels) {
    if (stats.later_counts[g] == 0) return -std::numeric_limits<double>::infinity();
    sum += std::log(static_cast<double>(stats.later_counts[g]) / total_later);
  }
  return sum;
}

double log_marginal_prior(const BlockStats& stats, const Hyperparameters& hyper,
                          std::span<const int> first_frame_labels, std::span<const int> active) {
  return log_initial_prior(stats, first_frame_labels, active) + log_transition_prior(stats, hyper, active);
}

IclValue icl_from_stats(const BlockStats& stats, const IclTerms& terms) {
  const auto active = stats.nonempty_groups();
  IclValue v;
  v.log_lik = likelihood_term(stats, terms, active);
  const InitialTerm init = initial_term(stats, static_cast<int>(active.size()));
  v.log_prior_finite = init.finite + transition_term(stats, terms, active);
  v.stranded = init.stranded;
  v.log_prior = v.stranded > 0 ? -std::numeric_limits<double>::infinity() : v.log_prior_finite;
  v.total = v.log_lik + v.log_prior;
  return v;
}

IclValue icl(const DynamicNetwork& net, const Partition& p, const Hyperparameters& hyper) {
  const IclTerms terms(hyper, net.num_nodes(), net.num_times(), net.directed());
  return icl_from_stats(build_stats(net, p), terms);
}

void apply_move(BlockStats& s, const DynamicNetwork& net, Partition& p, int t, int i, int g_new) {
  const int g_old = p(t, i);
  if (g_new == g_old) return;
  const int cap = s.capacity;
  const auto labels = p.frame(t);

  for (int j : net.out_neighbors(t, i)) {
    const int h = labels[j];
    --s.eta[s.block(g_old, h)];
    ++s.eta[s.block(g_new, h)];
  }
  if (s.directed) {
    for (int j : net.in_neighbors(t, i)) {
      const int h = labels[j];
      --s.eta[s.cell(h, g_old)];
      ++s.eta[s.cell(h, g_new)];
    }
  }

  int* occ = s.occupancy.data() + static_cast<std::size_t>(t) * cap;
  --occ[g_old];
  for (int h = 0; h < cap; ++h) {
    const std::int64_t o = occ[h];
    if (o == 0) continue;
    if (s.directed) {
      s.npairs[s.cell(g_old, h)] -= o;
      s.npairs[s.cell(h, g_old)] -= o;
      s.npairs[s.cell(g_new, h)] += o;
      s.npairs[s.cell(h, g_new)] += o;
    } else {
      s.npairs[s.block(g_old, h)] -= o;
      s.npairs[s.block(g_new, h)] += o;
    }
  }
  ++occ[g_new];

  if (t > 0) {
    const int prev = p(t - 1, i);
    --s.trans[s.cell(prev, g_old)];
    ++s.trans[s.cell(prev, g_new)];
    --s.later_counts[g_old];
    ++s.later_counts[g_new];
  } else {
    --s.first_counts[g_old];
    ++s.first_counts[g_new];
  }
  if (t + 1 < s.num_times) {
    const int next = p(t + 1, i);
    --s.trans[s.cell(g_old, next)];
    ++s.trans[s.cell(g_new, next)];
    --s.trans_rows[g_old];
    ++s.trans_rows[g_new];
  }
  p.set(t, i, g_new);
}

BlockStats merge_groups(const BlockStats& s, int keep, int drop) {
  BlockStats m = s;
  const int cap = s.capacity;
  std::fill(m.eta.begin(), m.eta.end(), 0);
  std::fill(m.npairs.begin(), m.npairs.end(), 0);
  std::fill(m.trans.begin(), m.trans.end(), 0);
  std::fill(m.trans_rows.begin(), m.trans_rows.end(), 0);
  auto map = [&](int g) { return g == drop ? keep : g; };
  for (int g = 0; g < cap; ++g) {
    for (int h = 0; h < cap; ++h) {
      const std::size_t c = s.cell(g, h);
      const std::size_t mc = s.directed ? m.cell(map(g), map(h)) : m.block(map(g), map(h));
      if (s.directed || g <= h) {
        m.eta[mc] += s.eta[c];
        m.npairs[mc] += s.npairs[c];
      }
      m.trans[m.cell(map(g), map(h))] += s.trans[c];
      m.trans_rows[map(g)] += s.trans[c];
    }
  }
  for (int t = 0; t < s.num_times; ++t) {
    int* occ = m.occupancy.data() + static_cast<std::size_t>(t) * cap;
    occ[keep] += occ[drop];
    occ[drop] = 0;
  }
  m.first_counts[keep] += m.first_counts[drop];
  m.first_counts[drop] = 0;
  m.later_counts[keep] += m.later_counts[drop];
  m.later_counts[drop] = 0;
  return m;
}

std::vector<std::vector<double>> posterior_mean_transitions(const BlockStats& stats,
                                                            const Hyperparameters& hyper,
                                                            std::span<const int> active) {
  const auto k = active.size();
  std::vector<std::vector<double>> means(k, std::vector<double>(k, 0.0));
  for (std::size_t x = 0; x < k; ++x) {
    std::int64_t row = 0;
    for (int h : active) row += stats.trans[stats.cell(active[x], h)];
    const double denom = static_cast<double>(k) * hyper.delta + static_cast<double>(row);
    for (std::size_t y = 0; y < k; ++y)
      means[x][y] = (hyper.delta + static_cast<double>(stats.trans[stats.cell(active[x], active[y])])) / denom;
  }
  return means;
}

std::vector<std::vector<std::optional<double>>> posterior_mean_connections(
    const BlockStats& stats, const Hyperparameters& hyper, std::span<const int> active,
    std::int64_t min_pairs) {
  const auto k = active.size();
  std::vector<std::vector<std::optional<double>>> means(k, std::vector<std::optional<double>>(k));
  for (std::size_t x = 0; x < k; ++x) {
    for (std::size_t y = 0; y < k; ++y) {
      const std::size_t c = stats.block(active[x], active[y]);
      if (stats.npairs[c] < min_pairs) continue;
      means[x][y] = (hyper.a + static_cast<double>(stats.eta[c])) /
                    (hyper.a + hyper.b + static_cast<double>(stats.npairs[c]));
    }
  }
  return means;
}

// ---------------------------------------------------------------------------
// MoveEvaluator

MoveEvaluator::MoveEvaluator(const IclTerms& terms) : terms_(terms) {}

void MoveEvaluator::scan_neighbours(const BlockStats& stats, const DynamicNetwork& net, const Partition& p,
                                    const Slot& s) {
  const int cap = stats.capacity;
  out_count_.assign(cap, 0);
  in_count_.assign(cap, 0);
  const auto labels = p.frame(s.t);
  for (int j : net.out_neighbors(s.t, s.i)) ++out_count_[labels[j]];
  if (stats.directed)
    for (int j : net.in_neighbors(s.t, s.i)) ++in_count_[labels[j]];

  const int* occ = stats.occupancy.data() + static_cast<std::size_t>(s.t) * cap;
  occ_det_.assign(occ, occ + cap);
  --occ_det_[s.g_old];
  present_.clear();
  for (int h = 0; h < cap; ++h)
    if (occ_det_[h] > 0) present_.push_back(h);
}

std::int64_t MoveEvaluator::eta_det(const BlockStats& stats, const Slot& s, int g, int h) const {
  if (stats.directed) {
    return stats.eta[stats.cell(g, h)] - (g == s.g_old ? out_count_[h] : 0) -
           (h == s.g_old ? in_count_[g] : 0);
  }
  if (g > h) std::swap(g, h);
  const std::int64_t removed = g == s.g_old ? out_count_[h] : (h == s.g_old ? out_count_[g] : 0);
  return stats.eta[stats.cell(g, h)] - removed;
}

std::int64_t MoveEvaluator::npairs_det(const BlockStats& stats, const Slot& s, int g, int h) const {
  if (stats.directed) {
    return stats.npairs[stats.cell(g, h)] - (g == s.g_old ? occ_det_[h] : 0) -
           (h == s.g_old ? occ_det_[g] : 0);
  }
  if (g > h) std::swap(g, h);
  const std::int64_t removed = g == s.g_old ? occ_det_[h] : (h == s.g_old ? occ_det_[g] : 0);
  return stats.npairs[stats.cell(g, h)] - removed;
}

double MoveEvaluator::likelihood_gain(const BlockStats& stats, const Slot& s, int g) const {
  auto change = [&](std::int64_t eta, std::int64_t n, std::int64_t d_eta, std::int64_t d_n) {
    return terms_.block(eta + d_eta, n + d_n) - terms_.block(eta, n);
  };
  double sum = 0.0;
  if (stats.directed) {
    for (int h : present_) {
      if (h == g) continue;
      sum += change(eta_det(stats, s, g, h), npairs_det(stats, s, g, h), out_count_[h], occ_det_[h]);
      sum += change(eta_det(stats, s, h, g), npairs_det(stats, s, h, g), in_count_[h], occ_det_[h]);
    }
    if (occ_det_[g] > 0)
      sum += change(eta_det(stats, s, g, g), npairs_det(stats, s, g, g), out_count_[g] + in_count_[g],
                    2 * static_cast<std::int64_t>(occ_det_[g]));
  } else {
    for (int h : present_)
      sum += change(eta_det(stats, s, g, h), npairs_det(stats, s, g, h), out_count_[h], occ_det_[h]);
  }
  return sum;
}

std::int64_t MoveEvaluator::trans_det(const BlockStats& stats, const Slot& s, int g, int h) const {
  return stats.trans[stats.cell(g, h)] - (s.prev >= 0 && g == s.prev && h == s.g_old) -
         (s.next >= 0 && g == s.g_old && h == s.next);
}

std::int64_t MoveEvaluator::row_det(const BlockStats& stats, const Slot& s, int g) const {
  return stats.trans_rows[g] - (s.prev >= 0 && g == s.prev) - (s.next >= 0 && g == s.g_old);
}

std::int64_t MoveEvaluator::size_det(const BlockStats& stats, const Slot& s, int g) const {
  return stats.group_size(g) - (g == s.g_old);
}

// Gains are relative to the detached state up to a constant shared by every
// target group; only their differences are meaningful.
MoveDelta MoveEvaluator::prior_gain(const BlockStats& stats, const Slot& s, int g) const {
  MoveDelta gain;
  const int k = k_det_ + (size_det(stats, s, g) == 0);
  if (stats.num_times == 1) {
    gain.value = -stats.num_nodes * std::log(static_cast<double>(k));
    return gain;
  }

  auto bump_cell = [&](int x, int y, int by) {
    const std::int64_t r = trans_det(stats, s, x, y);
    return terms_.dirichlet_cell(r + by) - terms_.dirichlet_cell(r);
  };
  if (s.prev >= 0 && s.next >= 0 && s.prev == g && g == s.next) {
    gain.value += bump_cell(g, g, 2);
  } else {
    if (s.prev >= 0) gain.value += bump_cell(s.prev, g, 1);
    if (s.next >= 0) gain.value += bump_cell(g, s.next, 1);
  }

  auto bump_row = [&](int x, int by) {
    const std::int64_t r = row_det(stats, s, x);
    return terms_.dirichlet_row(k, r + by) - terms_.dirichlet_row(k, r);
  };
  gain.value += k == k_det_ ? rows_det_same_k_ : rows_det_plus_k_;
  if (s.prev >= 0 && s.next >= 0 && s.prev == g) {
    gain.value += bump_row(g, 2);
  } else {
    if (s.prev >= 0) gain.value += bump_row(s.prev, 1);
    if (s.next >= 0) gain.value += bump_row(g, 1);
  }

  if (s.t == 0) {
    const std::int64_t later = stats.later_counts[g];
    if (later > 0)
      gain.value += std::log(static_cast<double>(later));
    else
      gain.stranded += 1;
  } else {
    const std::int64_t first = stats.first_counts[g];
    const std::int64_t later = stats.later_counts[g] - (g == s.g_old);
    if (later > 0)
      gain.value += static_cast<double>(first) *
                    (std::log(static_cast<double>(later + 1)) - std::log(static_cast<double>(later)));
    else
      gain.stranded -= first;
  }
  return gain;
}

void MoveEvaluator::evaluate(const BlockStats& stats, const DynamicNetwork& net, const Partition& p, int t,
                             int i) {
  const int cap = stats.capacity;
  Slot s{t, i, p(t, i), t > 0 ? p(t - 1, i) : -1, t + 1 < stats.num_times ? p(t + 1, i) : -1};
  scan_neighbours(stats, net, p, s);

  k_det_ = 0;
  for (int g = 0; g < cap; ++g) k_det_ += size_det(stats, s, g) > 0;
  rows_det_same_k_ = rows_det_plus_k_ = 0.0;
  if (stats.num_times > 1) {
    for (int g = 0; g < cap; ++g) {
      const std::int64_t r = row_det(stats, s, g);
      if (r == 0) continue;
      rows_det_same_k_ += terms_.dirichlet_row(k_det_, r);
      if (k_det_ < cap) rows_det_plus_k_ += terms_.dirichlet_row(k_det_ + 1, r);
    }
  }

  gains_.assign(cap, MoveDelta{});
  int empty_seen = -1;
  for (int g = 0; g < cap; ++g) {
    // Every group empty across all frames yields the same gain.
    if (size_det(stats, s, g) == 0) {
      if (empty_seen >= 0) {
        gains_[g] = gains_[empty_seen];
        continue;
      }
      empty_seen = g;
    }
    MoveDelta gain = prior_gain(stats, s, g);
    gain.value += likelihood_gain(stats, s, g);
    gains_[g] = gain;
  }

  deltas_.resize(cap);
  const MoveDelta base = gains_[s.g_old];
  for (int g = 0; g < cap; ++g)
    deltas_[g] = {gains_[g].stranded - base.stranded, gains_[g].value - base.value};
  deltas_[s.g_old] = MoveDelta{};
}

double delta_move(const BlockStats& stats, const DynamicNetwork& net, const Partition& p, int t, int i,
                  int g_new, const Hyperparameters& hyper) {
  if (g_new == p(t, i)) return 0.0;
  const IclTerms terms(hyper, net.num_nodes(), net.num_times(), net.directed());
  MoveEvaluator evaluator(terms);
  evaluator.evaluate(stats, net, p, t, i);
  const MoveDelta d = evaluator.deltas()[g_new];

  const std::int64_t before = initial_term(stats, stats.num_nonempty()).stranded;
  const std::int64_t after = before + d.stranded;
  constexpr double inf = std::numeric_limits<double>::infinity();
  if (before == 0 && after == 0) return d.value;
  if (before == 0) return -inf;
  if (after == 0) return inf;
  return std::numeric_limits<double>::quiet_NaN();
}

}  // namespace greedyicl
