#include "clbp/matching.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace clbp {

namespace {
constexpr double kEps = 1e-10;

// D(p || q~) with q floored at eps and renormalized; flooring (and the
// renormalization it forces) only kicks in when a bin actually sits
// below eps, so D(p || p) is exactly zero
double directed_kl(std::span<const double> p, std::span<const double> q) {
  // a divergence of a block from itself is zero by definition; the
  // epsilon flooring below would otherwise leave a ~eps residue when the
  // (identical) blocks contain empty bins
  if (std::equal(p.begin(), p.end(), q.begin())) return 0.0;
  bool floored = false;
  for (double v : q)
    if (v < kEps) {
      floored = true;
      break;
    }
  double qsum = 1.0;
  if (floored) {
    qsum = 0.0;
    for (double v : q) qsum += std::max(v, kEps);
  }
  double d = 0.0;
  for (size_t i = 0; i < p.size(); ++i) {
    if (p[i] <= 0.0) continue;
    d += p[i] * std::log(p[i] * qsum / std::max(q[i], kEps));
  }
  return d;
}
}  // namespace

std::string to_string(Metric m) {
  switch (m) {
    case Metric::KLD: return "KLD";
    case Metric::L1: return "L1";
    case Metric::L2: return "L2";
    case Metric::XCORR: return "XCORR";
  }
  return "?";
}

std::optional<Metric> metric_from_string(const std::string& s) {
  if (s == "KLD" || s == "kld") return Metric::KLD;
  if (s == "L1" || s == "l1") return Metric::L1;
  if (s == "L2" || s == "l2") return Metric::L2;
  if (s == "XCORR" || s == "xcorr") return Metric::XCORR;
  return std::nullopt;
}

double kld(std::span<const double> p, std::span<const double> q,
           int block_size, std::span<const double> weights) {
  if (p.size() != q.size())
    throw Error(ErrorCode::SizeMismatch, "kld: length mismatch");
  if (block_size <= 0) block_size = static_cast<int>(p.size());
  if (p.size() % block_size != 0)
    throw Error(ErrorCode::BadArgument, "kld: length not a block multiple");
  const size_t blocks = p.size() / block_size;
  if (!weights.empty() && weights.size() != blocks)
    throw Error(ErrorCode::SizeMismatch, "kld: weight count mismatch");
  double total = 0.0;
  for (size_t b = 0; b < blocks; ++b) {
    auto pb = p.subspan(b * block_size, block_size);
    auto qb = q.subspan(b * block_size, block_size);
    double j = directed_kl(pb, qb) + directed_kl(qb, pb);
    total += (weights.empty() ? 1.0 : weights[b]) * j;
  }
  return total;
}

double metric_distance(std::span<const double> p, std::span<const double> q,
                       Metric metric, int block_size) {
  if (p.size() != q.size())
    throw Error(ErrorCode::SizeMismatch, "metric_distance: length mismatch");
  switch (metric) {
    case Metric::KLD:
      return kld(p, q, block_size);
    case Metric::L1: {
      double d = 0.0;
      for (size_t i = 0; i < p.size(); ++i) d += std::abs(p[i] - q[i]);
      return d;
    }
    case Metric::L2: {
      double d = 0.0;
      for (size_t i = 0; i < p.size(); ++i)
        d += (p[i] - q[i]) * (p[i] - q[i]);
      return std::sqrt(d);
    }
    case Metric::XCORR: {
      const double n = static_cast<double>(p.size());
      double mp = std::accumulate(p.begin(), p.end(), 0.0) / n;
      double mq = std::accumulate(q.begin(), q.end(), 0.0) / n;
      double num = 0.0, vp = 0.0, vq = 0.0;
      for (size_t i = 0; i < p.size(); ++i) {
        num += (p[i] - mp) * (q[i] - mq);
        vp += (p[i] - mp) * (p[i] - mp);
        vq += (q[i] - mq) * (q[i] - mq);
      }
      if (vp == 0.0 || vq == 0.0)
        throw Error(ErrorCode::DegenerateInput,
                    "metric_distance: zero-variance vector under XCORR");
      return 1.0 - num / std::sqrt(vp * vq);
    }
  }
  throw Error(ErrorCode::BadArgument, "metric_distance: unknown metric");
}

double signature_distance(const Signature& a, const Signature& b,
                          Metric metric) {
  if (a.bins != b.bins || a.grid_rows != b.grid_rows ||
      a.grid_cols != b.grid_cols)
    throw Error(ErrorCode::SizeMismatch,
                "signature_distance: incompatible signatures");
  if (metric == Metric::KLD)
    return kld(a.values, b.values, a.bins, a.region_weights);
  return metric_distance(a.values, b.values, metric, a.bins);
}

double signature_distance(const FusedSignature& a, const FusedSignature& b,
                          Metric metric) {
  if (a.bins != b.bins || a.channels != b.channels ||
      a.grid_rows != b.grid_rows || a.grid_cols != b.grid_cols)
    throw Error(ErrorCode::SizeMismatch,
                "signature_distance: incompatible fused signatures");
  if (metric == Metric::KLD) return kld(a.values, b.values, a.bins);
  return metric_distance(a.values, b.values, metric, a.bins);
}

}  // namespace clbp
