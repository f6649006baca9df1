/*
 * Copyright 2026 The tncpt Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef TNCPT_COMMON_H_
#define TNCPT_COMMON_H_

#include <cstdint>
#include <functional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace tncpt {

// Errors carry the process exit code the CLI maps them to.
enum class ErrorKind { kInput = 2, kConfig = 3, kInternal = 4 };

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}
  ErrorKind kind() const { return kind_; }
  int exit_code() const { return static_cast<int>(kind_); }

 private:
  ErrorKind kind_;
};

class InputError : public Error {
 public:
  explicit InputError(const std::string& what)
      : Error(ErrorKind::kInput, what) {}
};

class ConfigError : public Error {
 public:
  explicit ConfigError(const std::string& what)
      : Error(ErrorKind::kConfig, what) {}
};

class InvariantError : public Error {
 public:
  explicit InvariantError(const std::string& what)
      : Error(ErrorKind::kInternal, what) {}
};

// WGS84 longitude/latitude in degrees.
struct GeoPoint {
  double lon = 0.0;
  double lat = 0.0;
  friend bool operator==(const GeoPoint&, const GeoPoint&) = default;
};

struct BoundingBox {
  double min_lon = 0.0;
  double min_lat = 0.0;
  double max_lon = 0.0;
  double max_lat = 0.0;

  bool Contains(const GeoPoint& p) const {
    return p.lon >= min_lon && p.lon <= max_lon && p.lat >= min_lat &&
           p.lat <= max_lat;
  }
  bool IsDegenerate() const { return !(max_lon > min_lon && max_lat > min_lat); }
  GeoPoint Center() const {
    return {(min_lon + max_lon) / 2.0, (min_lat + max_lat) / 2.0};
  }
};

inline constexpr double kEarthRadiusKm = 6371.0088;

// Great-circle (haversine) distance in kilometres.
double HaversineKm(const GeoPoint& a, const GeoPoint& b);

// Rounds a coordinate component to `decimals` places, used for cache keys.
double RoundTo(double value, int decimals);

// Shortest decimal text that parses back to the identical double.
std::string FormatDouble(double value);
// Strict full-string parse; throws InputError naming `what` on failure.
double ParseDouble(std::string_view text, std::string_view what);
int64_t ParseInt(std::string_view text, std::string_view what);

std::string_view Trim(std::string_view s);
std::vector<std::string> Split(std::string_view s, char sep);
std::string Join(std::span<const std::string> parts, std::string_view sep);

// Deterministic 64-bit FNV-1a hash, stable across platforms.
uint64_t Fnv1a64(std::string_view data);
std::string HexU64(uint64_t v);

// Seeded generator with platform-independent derived distributions. The
// standard <random> distributions are implementation-defined, which would
// break byte-identical outputs across toolchains.
class Rng {
 public:
  explicit Rng(uint64_t seed);
  uint64_t NextU64();
  // Uniform in [0, 1).
  double Uniform();
  double Uniform(double lo, double hi) { return lo + (hi - lo) * Uniform(); }
  // Uniform integer in [lo, hi], inclusive.
  int64_t UniformInt(int64_t lo, int64_t hi);
  double Normal();
  template <typename T>
  void Shuffle(std::vector<T>& v) {
    for (size_t i = v.size(); i > 1; --i) {
      const size_t j = static_cast<size_t>(UniformInt(0, static_cast<int64_t>(i - 1)));
      std::swap(v[i - 1], v[j]);
    }
  }

 private:
  uint64_t state_[4];
};

// SplitMix64 step, used to derive independent per-task seeds.
uint64_t DeriveSeed(uint64_t seed, uint64_t stream);

// Runs fn(i) for i in [0, n) on at most `jobs` threads. Each index is
// processed exactly once; callers write results into per-index slots so the
// outcome does not depend on scheduling. jobs <= 0 means hardware
// concurrency.
void ParallelFor(size_t n, int jobs, const std::function<void(size_t)>& fn);

// Type-7 (linear interpolation between order statistics) sample quantile.
// `sorted` must be ascending and non-empty.
double QuantileSorted(std::span<const double> sorted, double p);

}  // namespace tncpt

#endif  // TNCPT_COMMON_H_
