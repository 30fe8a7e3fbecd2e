#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "clbp/fusion.hpp"
#include "support/synth.hpp"

using namespace clbp;

namespace {

std::vector<double> random_pdf(int bins, uint64_t& state) {
  std::vector<double> p(bins);
  double sum = 0.0;
  for (double& v : p) {
    v = synth::uniform(state) + 1e-6;
    sum += v;
  }
  for (double& v : p) v /= sum;
  return p;
}

// direct evaluation of the symmetrized, eps-floored divergence
double kld_oracle(const std::vector<double>& p, const std::vector<double>& q) {
  const double eps = 1e-10;
  auto directed = [&](const std::vector<double>& a,
                      const std::vector<double>& b) {
    bool floored = false;
    for (double v : b) floored |= v < eps;
    double bsum = 1.0;
    if (floored) {
      bsum = 0.0;
      for (double v : b) bsum += std::max(v, eps);
    }
    double d = 0.0;
    for (size_t i = 0; i < a.size(); ++i)
      if (a[i] > 0.0) d += a[i] * std::log(a[i] * bsum / std::max(b[i], eps));
    return d;
  };
  return directed(p, q) + directed(q, p);
}

Signature make_signature(const std::vector<double>& values, int bins,
                         Channel ch = Channel::GRAY) {
  Signature s;
  s.channel = ch;
  s.grid_rows = 1;
  s.grid_cols = static_cast<int>(values.size()) / bins;
  s.bins = bins;
  s.values = values;
  s.region_weights.assign(values.size() / bins, 1.0);
  return s;
}

Gallery toy_gallery(uint64_t& state, int subjects, int samples, int bins = 8) {
  Gallery g;
  g.config.channels = {Channel::GRAY};
  g.config.grid_rows = 1;
  g.config.grid_cols = 1;
  g.config.bins = bins;
  for (int s = 0; s < subjects; ++s) {
    std::string id = "s" + std::to_string(s);
    for (int k = 0; k < samples; ++k)
      g.subjects[id].push_back({make_signature(random_pdf(bins, state), bins)});
  }
  return g;
}

}  // namespace

TEST_CASE("kld identity, symmetry, nonnegativity") {
  uint64_t state = 1;
  for (int trial = 0; trial < 100; ++trial) {
    auto p = random_pdf(64, state);
    auto q = random_pdf(64, state);
    CHECK(kld(p, p, 64) == 0.0);
    double pq = kld(p, q, 64), qp = kld(q, p, 64);
    CHECK(pq >= 0.0);
    CHECK(pq == doctest::Approx(qp).epsilon(1e-12));
  }
}

TEST_CASE("kld hand-computed value with the eps policy") {
  std::vector<double> p = {1.0, 0.0}, q = {0.5, 0.5};
  CHECK(kld(p, q, 2) == doctest::Approx(kld_oracle(p, q)).epsilon(1e-12));
  // spelled out: D(p||q) = ln 2; D(q||p~) with p floored at 1e-10
  double eps = 1e-10;
  double psum = 1.0 + eps;
  double expected = std::log(2.0) + 0.5 * std::log(0.5 * psum / 1.0) +
                    0.5 * std::log(0.5 * psum / eps);
  CHECK(kld(p, q, 2) == doctest::Approx(expected).epsilon(1e-12));
}

TEST_CASE("kld rejects length mismatches") {
  std::vector<double> p = {1.0, 0.0}, q = {1.0, 0.0, 0.0};
  CHECK_THROWS_AS(kld(p, q, 2), Error);
}

TEST_CASE("weighted region blocks combine linearly") {
  uint64_t state = 2;
  auto p1 = random_pdf(16, state), p2 = random_pdf(16, state);
  auto q1 = random_pdf(16, state), q2 = random_pdf(16, state);
  std::vector<double> p(p1), q(q1);
  p.insert(p.end(), p2.begin(), p2.end());
  q.insert(q.end(), q2.begin(), q2.end());
  std::vector<double> w = {0.5, 1.5};
  double combined = kld(p, q, 16, w);
  CHECK(combined ==
        doctest::Approx(0.5 * kld(p1, q1, 16) + 1.5 * kld(p2, q2, 16))
            .epsilon(1e-12));
}

TEST_CASE("metric distances: identical vectors give zero") {
  uint64_t state = 3;
  auto p = random_pdf(32, state);
  for (Metric m : {Metric::KLD, Metric::L1, Metric::L2, Metric::XCORR})
    CHECK(metric_distance(p, p, m) == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("metric distances: orthogonal point masses") {
  std::vector<double> p = {1.0, 0.0}, q = {0.0, 1.0};
  CHECK(metric_distance(p, q, Metric::L1) == 2.0);
  CHECK(metric_distance(p, q, Metric::L2) ==
        doctest::Approx(std::sqrt(2.0)).epsilon(1e-12));
}

TEST_CASE("metric distances match independent oracles") {
  uint64_t state = 4;
  for (int trial = 0; trial < 50; ++trial) {
    auto p = random_pdf(48, state);
    auto q = random_pdf(48, state);
    double l1 = 0.0, l2 = 0.0;
    for (size_t i = 0; i < p.size(); ++i) {
      l1 += std::abs(p[i] - q[i]);
      l2 += (p[i] - q[i]) * (p[i] - q[i]);
    }
    CHECK(metric_distance(p, q, Metric::L1) ==
          doctest::Approx(l1).epsilon(1e-12));
    CHECK(metric_distance(p, q, Metric::L2) ==
          doctest::Approx(std::sqrt(l2)).epsilon(1e-12));
    CHECK(metric_distance(p, q, Metric::KLD) ==
          doctest::Approx(kld_oracle(p, q)).epsilon(1e-12));
    // centered normalized cross-correlation oracle
    double mp = 0.0, mq = 0.0;
    for (double v : p) mp += v;
    for (double v : q) mq += v;
    mp /= p.size();
    mq /= q.size();
    double num = 0.0, vp = 0.0, vq = 0.0;
    for (size_t i = 0; i < p.size(); ++i) {
      num += (p[i] - mp) * (q[i] - mq);
      vp += (p[i] - mp) * (p[i] - mp);
      vq += (q[i] - mq) * (q[i] - mq);
    }
    CHECK(metric_distance(p, q, Metric::XCORR) ==
          doctest::Approx(1.0 - num / std::sqrt(vp * vq)).epsilon(1e-12));
  }
}

TEST_CASE("xcorr rejects zero-variance vectors") {
  std::vector<double> flat = {0.25, 0.25, 0.25, 0.25};
  std::vector<double> q = {0.1, 0.2, 0.3, 0.4};
  CHECK_THROWS_AS(metric_distance(flat, q, Metric::XCORR), Error);
}

TEST_CASE("nearest_subject: enrolled probe self-matches at distance 0") {
  uint64_t state = 5;
  Gallery g = toy_gallery(state, 4, 2);
  const auto& sample = g.subjects.at("s2")[1];
  RankedResult res = nearest_subject(sample, g, Metric::KLD, 0);
  CHECK(res.decision == "s2");
  CHECK(res.ranking.front().score == 0.0);
}

TEST_CASE("nearest_subject: single-subject gallery always answers it") {
  uint64_t state = 6;
  Gallery g = toy_gallery(state, 1, 3);
  auto probe = std::vector<Signature>{make_signature(random_pdf(8, state), 8)};
  CHECK(nearest_subject(probe, g, Metric::KLD, 1).decision == "s0");
}

TEST_CASE("nearest_subject matches an exhaustive pairwise oracle") {
  uint64_t state = 7;
  Gallery g = toy_gallery(state, 5, 3);
  for (int trial = 0; trial < 20; ++trial) {
    auto probe = std::vector<Signature>{make_signature(random_pdf(8, state), 8)};
    RankedResult res = nearest_subject(probe, g, Metric::KLD, 0);
    // brute force over all gallery samples
    std::string best_id;
    double best = 1e300;
    for (const auto& [id, samples] : g.subjects)
      for (const auto& s : samples) {
        double d = kld(probe[0].values, s[0].values, 8);
        if (d < best) {
          best = d;
          best_id = id;
        }
      }
    CHECK(res.decision == best_id);
    CHECK(res.ranking.front().score == doctest::Approx(best).epsilon(1e-12));
  }
}

TEST_CASE("nearest_subject decision is argmin-invariant under monotone maps") {
  uint64_t state = 8;
  Gallery g = toy_gallery(state, 5, 2);
  auto probe = std::vector<Signature>{make_signature(random_pdf(8, state), 8)};
  RankedResult base = nearest_subject(probe, g, Metric::KLD, 0);
  // applying exp (strictly increasing) to all scores keeps the order
  for (size_t i = 1; i < base.ranking.size(); ++i)
    CHECK(std::exp(base.ranking[i - 1].score) <=
          std::exp(base.ranking[i].score));
}

TEST_CASE("nearest_subject rejects incompatible probes") {
  uint64_t state = 9;
  Gallery g = toy_gallery(state, 2, 2);
  auto probe = std::vector<Signature>{make_signature(random_pdf(8, state), 8),
                                      make_signature(random_pdf(8, state), 8)};
  CHECK_THROWS_AS(nearest_subject(probe, g, Metric::KLD, 0), Error);
}

TEST_CASE("normalize_scores affine map and degenerate rule") {
  DistanceTable t;
  t.entries[Channel::GRAY] = {{"a", 2.0}, {"b", 4.0}, {"c", 6.0}};
  ChannelScores s = normalize_scores(t);
  CHECK(s.scores[Channel::GRAY]["a"] == 0.0);
  CHECK(s.scores[Channel::GRAY]["b"] == doctest::Approx(0.5));
  CHECK(s.scores[Channel::GRAY]["c"] == 1.0);

  DistanceTable flat;
  flat.entries[Channel::GRAY] = {{"a", 3.0}, {"b", 3.0}};
  ChannelScores fs = normalize_scores(flat);
  CHECK(fs.scores[Channel::GRAY]["a"] == 0.0);
  CHECK(fs.scores[Channel::GRAY]["b"] == 0.0);
}

TEST_CASE("normalize_scores matches a direct formula oracle") {
  uint64_t state = 10;
  DistanceTable t;
  std::map<std::string, double> raw;
  for (int i = 0; i < 6; ++i)
    raw["s" + std::to_string(i)] = 10.0 * synth::uniform(state);
  t.entries[Channel::H] = raw;
  double lo = 1e300, hi = -1e300;
  for (auto& [_, d] : raw) {
    lo = std::min(lo, d);
    hi = std::max(hi, d);
  }
  ChannelScores s = normalize_scores(t);
  for (auto& [id, d] : raw)
    CHECK(s.scores[Channel::H][id] ==
          doctest::Approx((d - lo) / (hi - lo)).epsilon(1e-12));
}

TEST_CASE("normalize_scores rejects an empty table") {
  CHECK_THROWS_AS(normalize_scores(DistanceTable{}), Error);
}

TEST_CASE("fusion rules: single channel collapse and unanimity") {
  ChannelScores s;
  s.scores[Channel::H] = {{"a", 0.4}, {"b", 0.1}, {"c", 1.0}};
  CHECK(sum_rule(s) == "b");
  CHECK(median_rule(s) == "b");
  CHECK(majority_vote(channel_decisions(s), s) == "b");

  s.scores[Channel::S] = {{"a", 0.9}, {"b", 0.0}, {"c", 0.5}};
  s.scores[Channel::I] = {{"a", 0.7}, {"b", 0.2}, {"c", 0.6}};
  CHECK(sum_rule(s) == "b");
  CHECK(median_rule(s) == "b");
  CHECK(majority_vote(channel_decisions(s), s) == "b");
}

TEST_CASE("median rule overrules a single outlier channel") {
  ChannelScores s;
  // two channels prefer "a", one outlier channel strongly prefers "b"
  s.scores[Channel::H] = {{"a", 0.0}, {"b", 0.8}};
  s.scores[Channel::S] = {{"a", 0.1}, {"b", 0.9}};
  s.scores[Channel::I] = {{"a", 1.0}, {"b", 0.0}};
  CHECK(median_rule(s) == "a");
}

TEST_CASE("sum rule matches an exhaustive oracle on random tables") {
  uint64_t state = 11;
  for (int trial = 0; trial < 20; ++trial) {
    ChannelScores s;
    std::vector<std::string> ids = {"a", "b", "c", "d"};
    for (Channel ch : {Channel::H, Channel::S, Channel::I})
      for (const auto& id : ids)
        s.scores[ch][id] = synth::uniform(state);
    std::string best;
    double best_sum = 1e300;
    for (const auto& id : ids) {
      double total = 0.0;
      for (Channel ch : {Channel::H, Channel::S, Channel::I})
        total += s.scores[ch][id];
      if (total < best_sum) {
        best_sum = total;
        best = id;
      }
    }
    CHECK(sum_rule(s) == best);
  }
}

TEST_CASE("majority vote: strict majority and tie fallback") {
  ChannelScores fb;
  fb.scores[Channel::H] = {{"A", 0.2}, {"B", 0.6}, {"C", 0.9}};
  fb.scores[Channel::S] = {{"A", 0.8}, {"B", 0.1}, {"C", 0.7}};
  fb.scores[Channel::I] = {{"A", 0.3}, {"B", 0.9}, {"C", 0.2}};
  CHECK(majority_vote({"A", "A", "B"}, fb) == "A");
  CHECK(majority_vote({"A"}, fb) == "A");
  // three-way tie falls back to the sum rule (A: 1.3, B: 1.6, C: 1.8)
  CHECK(majority_vote({"A", "B", "C"}, fb) == "A");
}

TEST_CASE("fusion decisions absorb per-channel affine distance maps") {
  uint64_t state = 12;
  DistanceTable t;
  for (Channel ch : {Channel::H, Channel::S, Channel::I})
    for (int i = 0; i < 5; ++i)
      t.entries[ch]["s" + std::to_string(i)] = 5.0 * synth::uniform(state);
  DistanceTable mapped = t;
  double a = 3.7, b = 11.0;
  for (auto& [ch, per] : mapped.entries)
    for (auto& [_, d] : per) d = a * d + b;
  ChannelScores s1 = normalize_scores(t), s2 = normalize_scores(mapped);
  CHECK(sum_rule(s1) == sum_rule(s2));
  CHECK(median_rule(s1) == median_rule(s2));
  for (auto& [ch, per] : s1.scores)
    for (auto& [id, v] : per)
      CHECK(v == doctest::Approx(s2.scores[ch][id]).epsilon(1e-12));
}
