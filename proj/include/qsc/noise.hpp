#pragma once

#include <cstdint>
#include <initializer_list>
#include <string_view>

#include <Eigen/Dense>

namespace qsc {

enum class Mode { classical, quantum };

std::string_view to_string(Mode mode);
Mode mode_from_string(std::string_view text);

/// Precision parameters of the emulated quantum subroutines.
///
/// In classical mode every precision field is zero; `make` enforces this so a
/// classical profile can be handed to any stage without leaking noise.
struct NoiseProfile {
  double eps_dist = 0.0;
  double eps_B = 0.0;
  double eps_lambda = 0.0;
  double norm_rel_err = 0.0;
  double delta = 0.0;
  std::uint64_t seed = 0;
  Mode mode = Mode::classical;

  static NoiseProfile classical(std::uint64_t seed);
  /// Quantum profile with the reference precisions 0.1 / 0.1 / 0.9 / 0.9.
  static NoiseProfile quantum_defaults(std::uint64_t seed);
  /// Validates and normalizes; throws std::invalid_argument on negative fields.
  static NoiseProfile make(Mode mode, double eps_dist, double eps_B,
                           double eps_lambda, double norm_rel_err,
                           double delta, std::uint64_t seed);

  bool noiseless() const {
    return eps_dist == 0.0 && eps_B == 0.0 && eps_lambda == 0.0 &&
           norm_rel_err == 0.0 && delta == 0.0;
  }
};

/// Counter-based random stream.
///
/// The stream is a (key, counter) pair; each draw hashes key + counter with
/// the SplitMix64 finalizer. Streams are cheap values, so every noise site
/// derives its own from (seed, tag, indices) and results do not depend on the
/// order in which sites are visited.
class RngStream {
 public:
  explicit RngStream(std::uint64_t key) : key_(key) {}

  std::uint64_t next_u64();
  /// Uniform on [0, 1) with 53 random bits.
  double uniform01();
  /// Standard normal via Box-Muller (platform independent, unlike
  /// std::normal_distribution).
  double standard_normal();

  std::uint64_t key() const { return key_; }
  std::uint64_t counter() const { return counter_; }

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
  double spare_normal_ = 0.0;
  bool has_spare_ = false;
};

std::uint64_t splitmix64_mix(std::uint64_t z);

RngStream keyed_rng(std::uint64_t seed, std::string_view domain_tag,
                    std::initializer_list<std::uint64_t> indices = {});

/// Uniform on [-bound, bound]; exactly 0 when bound == 0.
double bounded_uniform(RngStream& rng, double bound);

/// Uniform sample from the closed l2 ball of the given radius in `dim`
/// dimensions. The returned norm never exceeds `radius`.
Eigen::VectorXd uniform_in_ball(RngStream& rng, Eigen::Index dim,
                                double radius);

}  // namespace qsc
