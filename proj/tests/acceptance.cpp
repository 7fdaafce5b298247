// Acceptance suite: prints one PASS/FAIL line per criterion and exits nonzero
// if any criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "greedyicl/icl.hpp"
#include "greedyicl/metrics.hpp"
#include "greedyicl/optimizer.hpp"
#include "greedyicl/simulator.hpp"
#include "oracle.hpp"

using namespace greedyicl;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

bool monotone(const std::vector<double>& trace) {
  for (std::size_t k = 1; k < trace.size(); ++k)
    if (trace[k] < trace[k - 1] - 1e-9) return false;
  return true;
}

// Run-level bookkeeping shared by the criteria that fit models.
struct RunAudit {
  long runs = 0;
  long non_monotone = 0;
  long capped = 0;

  void add(const std::vector<double>& trace, bool hit_cap) {
    ++runs;
    non_monotone += !monotone(trace);
    capped += hit_cap;
  }
  void add(const FitReport& report) {
    for (const auto& run : report.runs) add(run.trace, run.hit_sweep_cap);
  }
};

RunAudit audit;
int failures = 0;

void report(int id, bool pass, const std::string& what) {
  std::printf("%s criterion %d: %s\n", pass ? "PASS" : "FAIL", id, what.c_str());
  std::fflush(stdout);
  failures += !pass;
}

std::string fmt(const char* format, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, format, args...);
  return buf;
}

// ---------------------------------------------------------------------------

void delta_oracle() {
  const auto start = Clock::now();
  Rng rng(1001);
  double max_err = 0.0;
  int finite = 0, feasibility_changes = 0, mismatched = 0, both_infeasible = 0;
  const Hyperparameters hyper{};
  for (int move = 0; move < 1000; ++move) {
    const int n = 2 + static_cast<int>(rng.below(19));
    const int t = 1 + static_cast<int>(rng.below(5));
    const int cap = 1 + static_cast<int>(rng.below(6));
    const auto inst = oracle::random_instance(rng, n, t, cap, 0.3, rng.bernoulli(0.5));
    const int ft = static_cast<int>(rng.below(t));
    const int fi = static_cast<int>(rng.below(n));
    const int g = static_cast<int>(rng.below(cap));

    const auto stats = build_stats(inst.net, inst.part);
    const double delta = delta_move(stats, inst.net, inst.part, ft, fi, g, hyper);
    Partition moved = inst.part;
    moved.set(ft, fi, g);
    const double before = oracle::naive_icl(inst.net, inst.part, hyper).total;
    const double after = oracle::naive_icl(inst.net, moved, hyper).total;

    if (std::isfinite(before) && std::isfinite(after)) {
      ++finite;
      max_err = std::max(max_err, std::abs(delta - (after - before)));
    } else if (std::isfinite(before) != std::isfinite(after)) {
      ++feasibility_changes;
      mismatched += !(std::isinf(delta) && (delta > 0) == std::isfinite(after));
    } else {
      // Both -inf: no finite reference exists; the identity move must still be 0.
      ++both_infeasible;
      if (g == inst.part(ft, fi)) mismatched += delta != 0.0;
      else mismatched += !std::isnan(delta);
    }
  }
  const double secs = seconds_since(start);
  report(1, max_err < 1e-8 && mismatched == 0 && secs < 30.0,
         fmt("delta oracle, 1000 moves: max |error| %.3g over %d finite pairs, %d feasibility changes, "
             "%d both infeasible, %d mismatches, %.2f s",
             max_err, finite, feasibility_changes, both_infeasible, mismatched, secs));
}

void likelihood_normalization() {
  const Hyperparameters hyper{};
  double worst = 0.0;
  for (int n : {2, 3}) {
    std::vector<std::pair<int, int>> pairs;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        if (i != j) pairs.emplace_back(i, j);
    const Partition p = Partition::constant(1, n, 1);
    const std::vector<int> active{0};
    double total = 0.0;
    for (unsigned mask = 0; mask < (1u << pairs.size()); ++mask) {
      std::vector<EdgeRow> rows;
      for (std::size_t k = 0; k < pairs.size(); ++k)
        if (mask >> k & 1u) rows.push_back({0, pairs[k].first, pairs[k].second});
      const DynamicNetwork net(rows, n, 1, true);
      total += std::exp(log_marginal_likelihood(build_stats(net, p), hyper, active));
    }
    worst = std::max(worst, std::abs(total - 1.0));
  }
  report(2, worst <= 1e-12, fmt("likelihood sums to one for N in {2, 3}: max deviation %.3g", worst));
}

void transition_normalization() {
  double worst = 0.0;
  for (double delta : {1.0, 0.5, 2.5}) {
    const Hyperparameters hyper{1.0, 1.0, delta};
    for (int k : {2, 3}) {
      std::vector<int> active(k);
      for (int g = 0; g < k; ++g) active[g] = g;
      for (int t : {3, 4}) {
        const DynamicNetwork net({}, 1, t, true);
        for (int z1 = 0; z1 < k; ++z1) {
          double total = 0.0;
          oracle::for_each_partition(t - 1, 1, k, [&](const Partition& tail) {
            std::vector<int> labels{z1};
            labels.insert(labels.end(), tail.labels().begin(), tail.labels().end());
            const Partition path(labels, t, 1, k);
            total += std::exp(log_transition_prior(build_stats(net, path), hyper, active));
          });
          worst = std::max(worst, std::abs(total - 1.0));
        }
      }
    }
  }
  report(3, worst <= 1e-10,
         fmt("transition prior sums to one over paths, K in {2, 3}, T in {3, 4}: max deviation %.3g", worst));
}

void exhaustive_map() {
  const auto start = Clock::now();
  Rng rng(4004);
  const Hyperparameters hyper{};
  int hits = 0;
  const int instances = 50;
  for (int rep = 0; rep < instances; ++rep) {
    const double density = 0.2 + 0.6 * rng.uniform();
    const auto inst = oracle::random_instance(rng, 4, 2, 2, density, rep % 2 == 0);
    double best = -INFINITY;
    oracle::for_each_partition(2, 4, 2, [&](const Partition& p) {
      best = std::max(best, oracle::naive_icl(inst.net, p, hyper).total);
    });
    double found = -INFINITY;
    for (int r = 0; r < 8; ++r) {
      std::vector<int> labels(8);
      for (int& g : labels) g = static_cast<int>(rng.below(2));
      const auto res = refine(inst.net, Partition(labels, 2, 4, 2), hyper, rng.next());
      audit.add(res.trace, res.hit_sweep_cap);
      found = std::max(found, res.icl.total);
    }
    hits += std::abs(found - best) < 1e-9;
  }
  const double secs = seconds_since(start);
  report(4, hits >= instances * 9 / 10 && secs < 60.0,
         fmt("exhaustive MAP, N=4 T=2 K_up=2, 8 random restarts: %d/%d instances reach the maximum, %.2f s", hits,
             instances, secs));
}

void simulation_study() {
  const auto start = Clock::now();
  const double pis[] = {0.9, 0.7};
  const double thetas[] = {0.9, 0.5, 0.2};
  const int reps = 20;
  double med[2][3];
  int k_hits = 0;
  std::string table;
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 3; ++b) {
      std::vector<double> scores;
      for (int r = 0; r < reps; ++r) {
        SimConfig cfg;
        cfg.pi = pis[a];
        cfg.theta0 = thetas[b];
        cfg.eps0 = 0.1;
        cfg.seed = derive_seed(5005, static_cast<std::uint64_t>(100 * (3 * a + b) + r));
        const auto sim = simulate(cfg);
        FitOptions opts;
        opts.seed = derive_seed(cfg.seed, 1);
        const auto fitted = fit(sim.network, {}, opts);
        audit.add(fitted);
        scores.push_back(nmi(fitted.best.partition, sim.truth));
        if (a == 0 && b == 0) k_hits += fitted.best.partition.num_nonempty() == 4;
      }
      med[a][b] = median(scores);
      table += fmt(" (pi=%.1f, theta0=%.1f): %.3f", pis[a], thetas[b], med[a][b]);
    }
  const double secs = seconds_since(start);
  const bool strong = med[0][0] >= 0.9 && med[1][0] >= 0.9;
  const bool trend = med[0][1] > med[0][2] && med[1][1] > med[1][2];
  report(5, strong && trend && secs <= 900.0, fmt("median NMI over %d replications;%s; %.1f s", reps, table.c_str(), secs));
  report(6, k_hits >= 14, fmt("K = 4 recovered in %d/%d replications at pi=0.9, theta0=0.9", k_hits, reps));
}

void throughput() {
  SimConfig cfg;
  cfg.seed = 7;
  const auto sim = simulate(cfg);
  FitOptions opts;
  opts.seed = 1;
  const auto start = Clock::now();
  const auto fitted = fit(sim.network, {}, opts);
  const double secs = seconds_since(start);
  audit.add(fitted);
  report(7, secs <= 10.0, fmt("fit with all four strategies at N=50, T=4: %.3f s", secs));
}

double sweep_seconds(int n, int capacity, double density, int reps) {
  std::vector<double> times;
  for (int r = 0; r < reps; ++r) {
    Rng rng(derive_seed(8008, static_cast<std::uint64_t>(n * 100 + r)));
    std::vector<EdgeRow> rows;
    for (int t = 0; t < 4; ++t)
      for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
          if (rng.bernoulli(density)) rows.push_back({t, i, j});
    const DynamicNetwork net(rows, n, 4, false);
    std::vector<int> labels(static_cast<std::size_t>(n) * 4);
    for (int& g : labels) g = static_cast<int>(rng.below(capacity));
    GreedySweeper sweeper(net, Partition(labels, 4, n, capacity), {}, rng.next());
    const auto start = Clock::now();
    sweeper.sweep();
    times.push_back(seconds_since(start));
  }
  return median(times);
}

void scaling() {
  const int capacity = 10;
  const double density = 0.1;
  sweep_seconds(100, capacity, density, 3);  // warm-up
  const double small = sweep_seconds(100, capacity, density, 15);
  const double large = sweep_seconds(200, capacity, density, 15);
  const double ratio = large / small;
  report(8, ratio <= 3.0,
         fmt("median first-sweep time, K_up=%d, density %.2f, T=4: N=100 %.3g s, N=200 %.3g s, ratio %.2f", capacity,
             density, small, large, ratio));
}

void invariants() {
  Rng rng(9009);
  const Hyperparameters hyper{};
  std::vector<std::string> failed;

  // Label permutation invariance.
  double perm_err = 0.0;
  for (int rep = 0; rep < 300; ++rep) {
    const int cap = 2 + static_cast<int>(rng.below(5));
    const auto inst = oracle::random_instance(rng, 3 + static_cast<int>(rng.below(12)),
                                              1 + static_cast<int>(rng.below(4)), cap, 0.3, rep % 2 == 0);
    std::vector<int> perm(cap);
    for (int g = 0; g < cap; ++g) perm[g] = g;
    rng.shuffle(std::span<int>(perm));
    std::vector<int> relabelled;
    for (int g : inst.part.labels()) relabelled.push_back(perm[g]);
    const auto a = icl(inst.net, inst.part, hyper);
    const auto b = icl(inst.net, Partition(relabelled, inst.part.num_times(), inst.part.num_nodes(), cap), hyper);
    if (a.stranded != b.stranded) perm_err = INFINITY;
    else perm_err = std::max(perm_err, std::abs(a.finite_total() - b.finite_total()));
  }
  if (!(perm_err <= 1e-10)) failed.push_back(fmt("permutation error %.3g", perm_err));

  // Greedy and merge monotonicity, plus the sweep cap, over every run above
  // and a fresh batch of directed fits.
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    SimConfig cfg;
    cfg.directed = true;
    cfg.seed = derive_seed(9010, seed);
    FitOptions opts;
    opts.seed = seed;
    audit.add(fit(simulate(cfg).network, hyper, opts));
  }
  if (audit.non_monotone) failed.push_back(fmt("%ld non-monotone runs", audit.non_monotone));
  if (audit.capped) failed.push_back(fmt("%ld runs hit the sweep cap", audit.capped));

  // NMI battery.
  const std::vector<int> u{0, 0, 1, 1}, w{0, 0, 1, 2};
  bool nmi_ok = std::abs(nmi(u, w) - 0.8165) < 1e-4;
  for (int rep = 0; rep < 500 && nmi_ok; ++rep) {
    const int n = 1 + static_cast<int>(rng.below(60));
    std::vector<int> a(n), b(n);
    const int ka = 1 + static_cast<int>(rng.below(7)), kb = 1 + static_cast<int>(rng.below(7));
    for (int& g : a) g = static_cast<int>(rng.below(ka));
    for (int& g : b) g = static_cast<int>(rng.below(kb));
    const double v = nmi(a, b);
    std::vector<int> perm(ka);
    for (int g = 0; g < ka; ++g) perm[g] = g;
    rng.shuffle(std::span<int>(perm));
    std::vector<int> pa;
    for (int g : a) pa.push_back(perm[g]);
    nmi_ok = v >= 0.0 && v <= 1.0 && std::abs(v - nmi(b, a)) < 1e-12 && std::abs(v - nmi(pa, b)) < 1e-12 &&
             std::abs(nmi(a, a) - 1.0) < 1e-12;
  }
  if (!nmi_ok) failed.push_back("NMI property violated");

  // Incremental statistics against rebuilt ones.
  int stats_bad = 0;
  for (int seq = 0; seq < 500; ++seq) {
    const int cap = 1 + static_cast<int>(rng.below(6));
    auto inst = oracle::random_instance(rng, 2 + static_cast<int>(rng.below(15)), 1 + static_cast<int>(rng.below(5)),
                                        cap, 0.3, seq % 2 == 0);
    auto stats = build_stats(inst.net, inst.part);
    const int moves = 1 + static_cast<int>(rng.below(30));
    for (int m = 0; m < moves; ++m) {
      const int t = static_cast<int>(rng.below(inst.part.num_times()));
      const int i = static_cast<int>(rng.below(inst.part.num_nodes()));
      apply_move(stats, inst.net, inst.part, t, i, static_cast<int>(rng.below(cap)));
    }
    stats_bad += !(stats == build_stats(inst.net, inst.part));
  }
  if (stats_bad) failed.push_back(fmt("%d move sequences diverged from rebuilt stats", stats_bad));

  std::string detail = fmt("permutation error %.3g; %ld logged runs monotone, none capped; NMI battery; "
                           "500 move sequences match rebuilt stats",
                           perm_err, audit.runs);
  if (!failed.empty()) {
    detail.clear();
    for (const auto& f : failed) detail += (detail.empty() ? "" : "; ") + f;
  }
  report(9, failed.empty(), "invariant suites: " + detail);
}

}  // namespace

int main() {
  const auto start = Clock::now();
  delta_oracle();
  likelihood_normalization();
  transition_normalization();
  exhaustive_map();
  simulation_study();
  throughput();
  scaling();
  invariants();
  std::printf("%d criteria failed, total %.1f s\n", failures, seconds_since(start));
  return failures == 0 ? 0 : 1;
}
