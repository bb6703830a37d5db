#pragma once

#include <algorithm>
#include <cstdint>
#include <fstream>
#include <iterator>
#include <span>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "coopbandit/error.hpp"
#include "coopbandit/exp3.hpp"
#include "coopbandit/random.hpp"

namespace coopbandit {

/// Oblivious loss sequence: loss(t, i) in [0, 1] depends only on the
/// construction parameters, t and i. There is no mutable state, so the same
/// oracle can be shared by runs with different policies.
class LossOracle {
 public:
  enum class Kind { BernoulliMeans, FixedMatrix, PiecewiseSwitching };

  /// loss(t, i) ~ Bernoulli(means[i]), drawn from a hash of (seed, t, i).
  static LossOracle bernoulli(std::vector<double> means, std::uint64_t seed) {
    require_arms(means.size());
    for (double m : means)
      if (!(m >= 0.0 && m <= 1.0)) throw Error(ErrorCode::Config, "Bernoulli means must lie in [0,1]");
    LossOracle o(Kind::BernoulliMeans, means.size());
    o.means_ = std::move(means);
    o.seed_ = seed;
    return o;
  }

  /// Row t mod rows of a fixed T x K table.
  static LossOracle matrix(std::vector<std::vector<double>> rows) {
    if (rows.empty()) throw Error(ErrorCode::Config, "loss matrix has no rows");
    const std::size_t k = rows.front().size();
    require_arms(k);
    for (const auto& r : rows) {
      if (r.size() != k) throw Error(ErrorCode::Config, "loss matrix rows differ in length");
      for (double x : r)
        if (!(x >= 0.0 && x <= 1.0)) throw Error(ErrorCode::Config, "loss matrix entries must lie in [0,1]");
    }
    LossOracle o(Kind::FixedMatrix, k);
    o.rows_ = std::move(rows);
    return o;
  }

  /// From each (start step, arm) onwards that arm has loss 0 and every other
  /// arm loss 1. Segments must start at 0 and increase.
  static LossOracle switching(std::vector<std::pair<std::size_t, Arm>> segments, std::size_t arms) {
    require_arms(arms);
    if (segments.empty() || segments.front().first != 0)
      throw Error(ErrorCode::Config, "switching schedule must start at step 0");
    for (std::size_t i = 0; i < segments.size(); ++i) {
      if (segments[i].second >= arms) throw Error(ErrorCode::Config, "switching arm out of range");
      if (i > 0 && segments[i].first <= segments[i - 1].first)
        throw Error(ErrorCode::Config, "switching steps must increase");
    }
    LossOracle o(Kind::PiecewiseSwitching, arms);
    o.segments_ = std::move(segments);
    return o;
  }

  Kind kind() const { return kind_; }
  std::size_t arms() const { return arms_; }
  std::uint64_t seed() const { return seed_; }

  double loss(std::size_t t, Arm i) const {
    switch (kind_) {
      case Kind::BernoulliMeans:
        return hashed_uniform01(seed_, t, i) < means_[i] ? 1.0 : 0.0;
      case Kind::FixedMatrix:
        return rows_[t % rows_.size()][i];
      case Kind::PiecewiseSwitching: {
        auto it = std::upper_bound(segments_.begin(), segments_.end(), t,
                                   [](std::size_t step, const auto& seg) { return step < seg.first; });
        return std::prev(it)->second == i ? 0.0 : 1.0;
      }
    }
    return 0.0;
  }

  void fill_round(std::size_t t, std::span<double> out) const {
    for (Arm i = 0; i < arms_; ++i) out[i] = loss(t, i);
  }

 private:
  LossOracle(Kind kind, std::size_t arms) : kind_(kind), arms_(arms) {}

  Kind kind_;
  std::size_t arms_;
  std::uint64_t seed_ = 0;
  std::vector<double> means_;
  std::vector<std::vector<double>> rows_;
  std::vector<std::pair<std::size_t, Arm>> segments_;
};

namespace detail {

inline std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream ss(s);
  while (std::getline(ss, item, sep)) out.push_back(item);
  return out;
}

inline double parse_double(const std::string& s) {
  std::size_t used = 0;
  double x = 0.0;
  try {
    x = std::stod(s, &used);
  } catch (const std::exception&) {
    throw Error(ErrorCode::Parse, "not a number: '" + s + "'");
  }
  if (used != s.size()) throw Error(ErrorCode::Parse, "not a number: '" + s + "'");
  return x;
}

inline std::size_t parse_count(const std::string& s) {
  if (s.empty() || s.find_first_not_of("0123456789") != std::string::npos)
    throw Error(ErrorCode::Parse, "not a non-negative integer: '" + s + "'");
  return static_cast<std::size_t>(std::stoull(s));
}

}  // namespace detail

inline std::vector<std::vector<double>> load_loss_matrix(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::Parse, "cannot open " + path);
  std::vector<std::vector<double>> rows;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    std::vector<double> row;
    for (const auto& cell : detail::split(line, ',')) row.push_back(detail::parse_double(cell));
    rows.push_back(std::move(row));
  }
  return rows;
}

/// Parses the adversary mini-language:
///   bernoulli:0.4,0.5,0.5     one mean per arm; `0.5*9` repeats a value
///   matrix:path.csv           T x K table, one row per step
///   switch:arm0@0,arm3@50000  piecewise 0/1 losses with a moving best arm
inline LossOracle parse_adversary(const std::string& spec, std::size_t arms, std::uint64_t seed) {
  const auto colon = spec.find(':');
  if (colon == std::string::npos) throw Error(ErrorCode::Parse, "adversary spec needs 'kind:args': " + spec);
  const std::string kind = spec.substr(0, colon);
  const std::string args = spec.substr(colon + 1);

  if (kind == "bernoulli") {
    std::vector<double> means;
    for (const auto& item : detail::split(args, ',')) {
      const auto star = item.find('*');
      if (star == std::string::npos) {
        means.push_back(detail::parse_double(item));
      } else {
        const double value = detail::parse_double(item.substr(0, star));
        means.insert(means.end(), detail::parse_count(item.substr(star + 1)), value);
      }
    }
    if (means.size() != arms)
      throw Error(ErrorCode::Config, "bernoulli spec has " + std::to_string(means.size()) + " means for K=" +
                                         std::to_string(arms));
    return LossOracle::bernoulli(std::move(means), seed);
  }
  if (kind == "matrix") {
    auto oracle = LossOracle::matrix(load_loss_matrix(args));
    if (oracle.arms() != arms)
      throw Error(ErrorCode::Config, "loss matrix has " + std::to_string(oracle.arms()) + " columns for K=" +
                                         std::to_string(arms));
    return oracle;
  }
  if (kind == "switch") {
    std::vector<std::pair<std::size_t, Arm>> segments;
    for (const auto& item : detail::split(args, ',')) {
      const auto at = item.find('@');
      if (item.rfind("arm", 0) != 0 || at == std::string::npos)
        throw Error(ErrorCode::Parse, "switch segment must look like armI@STEP: " + item);
      segments.emplace_back(detail::parse_count(item.substr(at + 1)), detail::parse_count(item.substr(3, at - 3)));
    }
    return LossOracle::switching(std::move(segments), arms);
  }
  throw Error(ErrorCode::Parse, "unknown adversary kind '" + kind + "'");
}

}  // namespace coopbandit
