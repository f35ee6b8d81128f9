#include "qsc/noise.hpp"

#include <cassert>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace qsc {

std::string_view to_string(Mode mode) {
  return mode == Mode::quantum ? "quantum" : "classical";
}

Mode mode_from_string(std::string_view text) {
  if (text == "classical") return Mode::classical;
  if (text == "quantum") return Mode::quantum;
  throw std::invalid_argument("unknown mode '" + std::string(text) +
                              "' (expected classical|quantum)");
}

NoiseProfile NoiseProfile::classical(std::uint64_t seed) {
  NoiseProfile p;
  p.seed = seed;
  return p;
}

NoiseProfile NoiseProfile::quantum_defaults(std::uint64_t seed) {
  return make(Mode::quantum, 0.1, 0.1, 0.9, 0.0, 0.9, seed);
}

NoiseProfile NoiseProfile::make(Mode mode, double eps_dist, double eps_B,
                                double eps_lambda, double norm_rel_err,
                                double delta, std::uint64_t seed) {
  for (double v : {eps_dist, eps_B, eps_lambda, norm_rel_err, delta}) {
    if (!(v >= 0.0) || !std::isfinite(v))
      throw std::invalid_argument("noise parameters must be finite and >= 0");
  }
  if (mode == Mode::classical) return classical(seed);
  NoiseProfile p;
  p.eps_dist = eps_dist;
  p.eps_B = eps_B;
  p.eps_lambda = eps_lambda;
  p.norm_rel_err = norm_rel_err;
  p.delta = delta;
  p.seed = seed;
  p.mode = mode;
  return p;
}

std::uint64_t splitmix64_mix(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

std::uint64_t RngStream::next_u64() {
  ++counter_;
  return splitmix64_mix(key_ + counter_ * 0x9e3779b97f4a7c15ull);
}

double RngStream::uniform01() {
  return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double RngStream::standard_normal() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_normal_;
  }
  // 1 - u lies in (0, 1], so the log is finite.
  const double u1 = 1.0 - uniform01();
  const double u2 = uniform01();
  const double r = std::sqrt(-2.0 * std::log(u1));
  const double theta = 2.0 * std::numbers::pi * u2;
  spare_normal_ = r * std::sin(theta);
  has_spare_ = true;
  return r * std::cos(theta);
}

namespace {

std::uint64_t fnv1a(std::string_view text) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  return h;
}

}  // namespace

RngStream keyed_rng(std::uint64_t seed, std::string_view domain_tag,
                    std::initializer_list<std::uint64_t> indices) {
  std::uint64_t key = splitmix64_mix(seed ^ 0x6a09e667f3bcc909ull);
  key = splitmix64_mix(key ^ fnv1a(domain_tag));
  std::uint64_t position = 1;
  for (std::uint64_t idx : indices) {
    // Position-dependent mixing so (1, 2) and (2, 1) give distinct keys.
    key = splitmix64_mix(key + splitmix64_mix(idx + 0x9e3779b97f4a7c15ull * position));
    ++position;
  }
  return RngStream(key);
}

double bounded_uniform(RngStream& rng, double bound) {
  if (bound == 0.0) return 0.0;
  const double value = bound * (2.0 * rng.uniform01() - 1.0);
  assert(std::abs(value) <= bound);
  return value;
}

Eigen::VectorXd uniform_in_ball(RngStream& rng, Eigen::Index dim,
                                double radius) {
  Eigen::VectorXd v = Eigen::VectorXd::Zero(dim);
  if (radius == 0.0 || dim == 0) return v;
  double norm = 0.0;
  while (norm == 0.0) {
    for (Eigen::Index i = 0; i < dim; ++i) v[i] = rng.standard_normal();
    norm = v.norm();
  }
  const double r = radius * std::pow(rng.uniform01(), 1.0 / static_cast<double>(dim));
  v *= r / norm;
  // Rounding can push the norm a few ulps past the radius.
  while (v.norm() > radius) v *= 1.0 - 0x1.0p-50;
  return v;
}

}  // namespace qsc
