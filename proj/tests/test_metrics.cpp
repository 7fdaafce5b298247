#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <map>

#include "greedyicl/errors.hpp"
#include "greedyicl/metrics.hpp"
#include "greedyicl/random.hpp"

using namespace greedyicl;

namespace {

// Textbook NMI from the contingency table, no shortcuts.
double reference_nmi(const std::vector<int>& a, const std::vector<int>& b) {
  const double n = static_cast<double>(a.size());
  std::map<int, double> ca, cb;
  std::map<std::pair<int, int>, double> cab;
  for (std::size_t k = 0; k < a.size(); ++k) {
    ca[a[k]] += 1.0;
    cb[b[k]] += 1.0;
    cab[{a[k], b[k]}] += 1.0;
  }
  if (ca.size() == 1 && cb.size() == 1) return 1.0;
  if (ca.size() == 1 || cb.size() == 1) return 0.0;
  double mi = 0.0, ha = 0.0, hb = 0.0;
  for (const auto& [key, c] : cab) mi += c / n * std::log(c * n / (ca[key.first] * cb[key.second]));
  for (const auto& [g, c] : ca) ha -= c / n * std::log(c / n);
  for (const auto& [g, c] : cb) hb -= c / n * std::log(c / n);
  return mi / std::sqrt(ha * hb);
}

std::vector<int> random_labels(Rng& rng, int n, int k) {
  std::vector<int> v(n);
  for (int& g : v) g = static_cast<int>(rng.below(k));
  return v;
}

}  // namespace

TEST_CASE("nmi worked examples") {
  const std::vector<int> a{0, 0, 1, 1};
  CHECK(nmi(a, a) == doctest::Approx(1.0));
  CHECK(nmi(a, std::vector<int>{0, 1, 0, 1}) == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(std::abs(nmi(a, std::vector<int>{0, 0, 1, 2}) - 0.8165) < 1e-4);
}

TEST_CASE("nmi zero-entropy conventions") {
  const std::vector<int> one{3, 3, 3};
  const std::vector<int> other{1, 1, 1};
  const std::vector<int> split{0, 1, 1};
  CHECK(nmi(one, other) == 1.0);
  CHECK(nmi(one, split) == 0.0);
  CHECK(nmi(split, one) == 0.0);
}

TEST_CASE("nmi rejects mismatched or empty input") {
  const std::vector<int> a{0, 1}, b{0, 1, 2}, empty;
  CHECK_THROWS_AS(nmi(a, b), DataError);
  CHECK_THROWS_AS(nmi(empty, empty), DataError);
}

TEST_CASE("nmi property battery") {
  Rng rng(17);
  for (int rep = 0; rep < 300; ++rep) {
    const int n = 1 + static_cast<int>(rng.below(40));
    const auto a = random_labels(rng, n, 1 + static_cast<int>(rng.below(6)));
    const auto b = random_labels(rng, n, 1 + static_cast<int>(rng.below(6)));
    const double v = nmi(a, b);
    CHECK(std::abs(v - reference_nmi(a, b)) < 1e-12);
    CHECK(v == doctest::Approx(nmi(b, a)).epsilon(1e-14));
    CHECK((v >= 0.0 && v <= 1.0));
    std::vector<int> perm{4, 2, 0, 5, 1, 3};
    std::vector<int> relabelled(a.size());
    for (std::size_t k = 0; k < a.size(); ++k) relabelled[k] = perm[a[k]] + 10;
    CHECK(nmi(relabelled, b) == doctest::Approx(v).epsilon(1e-12));
  }
}

TEST_CASE("nmi against the compacted partition is one") {
  Rng rng(4);
  for (int rep = 0; rep < 50; ++rep) {
    std::vector<int> labels(3 * 7);
    for (int& g : labels) g = static_cast<int>(rng.below(9));
    const Partition p(labels, 3, 7, 9);
    CHECK(nmi(p, compact_labels(p)) == doctest::Approx(1.0));
  }
}

TEST_CASE("summary of a single group on an empty network") {
  const auto net = network_from_edge_list({}, 5, 3, true);
  const auto rep = summarize(net, Partition::constant(3, 5, 1), {});
  CHECK(rep.nonempty_per_frame == std::vector<int>{1, 1, 1});
  CHECK(rep.avg_out_degree == std::vector<double>{0.0});
  CHECK(rep.avg_in_degree == std::vector<double>{0.0});
  CHECK(rep.group_sizes == std::vector<std::vector<int>>{{5}, {5}, {5}});
}

TEST_CASE("a group that empties shows in the per-frame count") {
  const auto net = network_from_edge_list(std::vector<EdgeRow>{{0, 0, 1}}, 3, 2, false);
  const Partition p({0, 0, 1, 0, 0, 0}, 2, 3, 2);
  const auto rep = summarize(net, p, {});
  CHECK(rep.nonempty_per_frame == std::vector<int>{2, 1});
  CHECK(rep.group_sizes[1] == std::vector<int>{3, 0});
  // Group 0 memberships: (0,0) degree 1, (0,1) degree 1, three at t=1 with degree 0.
  CHECK(rep.avg_out_degree[0] == doctest::Approx(2.0 / 5.0));
}

TEST_CASE("hub group sends far more than it receives") {
  // Nodes 0..2 broadcast to everyone; the rest exchange sparse random edges.
  Rng rng(5);
  const int n = 40, t = 3;
  std::vector<EdgeRow> rows;
  for (int f = 0; f < t; ++f)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        if (i == j) continue;
        if (i < 3 || (j >= 3 && rng.bernoulli(0.05))) rows.push_back({f, i, j});
      }
  const DynamicNetwork net(rows, n, t, true);
  std::vector<int> labels(n * t);
  for (int f = 0; f < t; ++f)
    for (int i = 0; i < n; ++i) labels[f * n + i] = i < 3 ? 0 : 1;
  const auto rep = summarize(net, Partition(labels, t, n, 2), {});
  CHECK(rep.avg_out_degree[0] == doctest::Approx(n - 1));
  CHECK(rep.avg_in_degree[0] == doctest::Approx(2.0));
  CHECK(rep.avg_out_degree[0] > 10.0 * rep.avg_in_degree[0]);
}

TEST_CASE("summary agrees with the engine and sums to N") {
  Rng rng(8);
  for (int rep = 0; rep < 30; ++rep) {
    const int n = 9, t = 3, cap = 6;
    std::vector<EdgeRow> rows;
    for (int f = 0; f < t; ++f)
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
          if (i != j && rng.bernoulli(0.3)) rows.push_back({f, i, j});
    const bool directed = rep % 2 == 0;
    const DynamicNetwork net(rows, n, t, directed);
    std::vector<int> labels(n * t);
    for (int& g : labels) g = static_cast<int>(rng.below(cap));
    const Partition p(labels, t, n, cap);
    const auto s = summarize(net, p, {});
    const auto direct = icl(net, p, {});
    CHECK(s.icl.stranded == direct.stranded);
    CHECK(s.icl.finite_total() == doctest::Approx(direct.finite_total()).epsilon(1e-12));
    const int k = p.num_nonempty();
    CHECK(s.avg_out_degree.size() == static_cast<std::size_t>(k));
    CHECK(s.transition_means.size() == static_cast<std::size_t>(k));
    for (int f = 0; f < t; ++f) {
      int total = 0, present = 0;
      for (int g : s.group_sizes[f]) {
        total += g;
        present += g > 0;
      }
      CHECK(total == n);
      CHECK(present == s.nonempty_per_frame[f]);
    }
    for (int g = 0; g < k; ++g) {
      CHECK(s.avg_out_degree[g] >= 0.0);
      if (!directed) CHECK(s.avg_out_degree[g] == s.avg_in_degree[g]);
      for (int h = 0; h < k; ++h) REQUIRE(s.connection_means[g][h].has_value());
    }
  }
}

TEST_CASE("sparse blocks can be blanked") {
  const auto net = network_from_edge_list(std::vector<EdgeRow>{{0, 0, 1}}, 4, 1, true);
  const Partition p({0, 0, 0, 1}, 1, 4, 2);
  const auto s = summarize(net, p, {}, 4);
  CHECK(s.connection_means[0][0].has_value());   // 6 ordered pairs
  CHECK_FALSE(s.connection_means[1][1].has_value());  // none
  CHECK_FALSE(s.connection_means[0][1].has_value());  // 3 pairs
  CHECK(*s.connection_means[0][0] == doctest::Approx(2.0 / 8.0));
}
