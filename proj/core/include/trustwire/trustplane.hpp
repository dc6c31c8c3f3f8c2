#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "trustwire/keyfabric.hpp"
#include "trustwire/wirecodec.hpp"

namespace trustwire {

enum class MapOp : char { Add = '+', Sub = '-', Mul = '*', Div = '/' };

/// Largest prime below 2^53. The mapping fold runs in the integers modulo this
/// prime, so every intermediate value is exact in binary64 and each operand
/// influences the result (a rounding fold would absorb small operands once a
/// product grows large).
inline constexpr std::uint64_t kMappingModulus = 9007199254740881ULL;

/// The secret per-pair mapping M_fn: a left fold of `ops` over S_R.
/// Division multiplies by the modular inverse; division by zero leaves the
/// accumulator unchanged.
class MappingFunction {
 public:
  MappingFunction() = default;
  explicit MappingFunction(std::vector<MapOp> ops);

  /// Accepts + - * / and the typographic forms x, ×, ÷, −. Throws InvalidArgumentError.
  static MappingFunction parse(std::string_view text);

  const std::vector<MapOp>& ops() const noexcept { return ops_; }
  /// The S_R size this function accepts.
  std::size_t arity() const noexcept { return ops_.size() + 1; }
  std::string to_string() const;
  friend bool operator==(const MappingFunction&, const MappingFunction&) = default;

 private:
  std::vector<MapOp> ops_;
};

/// M_val: the fold itself, as an exact binary64 value in [0, kMappingModulus).
/// Throws ArityError unless set.size() == fn.arity().
double fold_mapping(const MappingFunction& fn, const RandomSet& set);
/// M'_val = sin(M_val), radians.
double eval_mapping(const MappingFunction& fn, const RandomSet& set);

/// Throws InvalidArgumentError unless level is finite and within [0, 1].
double checked_trust_level(double level);

/// ceil(trust * n), robust against binary64 representation error in trust
/// (0.7 * 10 must give 7, not 8).
std::size_t disclosure_count(double trust, std::size_t n);

struct SelectionSeed {
  std::string source;
  std::string target;
  std::string subject;
};

/// Deterministic pseudorandom permutation of [0, n) keyed by the seed.
std::vector<std::size_t> selection_order(const SelectionSeed& seed, std::size_t n);

struct SharedInfo {
  std::vector<std::string> items;
  double trust_level_used = 0.0;
  bool subject_known = true;
};

/// The first disclosure_count(trust, |items|) entries of the seeded permutation of items.
SharedInfo trust_filter(const std::vector<std::string>& items, double trust_level, const SelectionSeed& seed);

struct TrustRecord {
  AgencyId source;
  AgencyId target;
  double trust_level;
  MappingFunction mapping;
  std::map<std::string, double> overrides;  // terrorist code -> trust level
};

struct ResolvedTrust {
  double trust_level;
  MappingFunction mapping;
};

class TrustPlane {
 public:
  /// Throws ConfigError on a duplicate (source, target) pair and InvalidArgumentError on a bad level.
  void add(TrustRecord record);

  /// Per-subject override wins over the pair level. Throws NoTrustRecordError.
  ResolvedTrust lookup(const AgencyId& source, const AgencyId& target, std::string_view subject) const;
  /// Throws NoTrustRecordError.
  const TrustRecord& record(const AgencyId& source, const AgencyId& target) const;
  bool contains(const AgencyId& source, const AgencyId& target) const;

  const std::map<std::pair<AgencyId, AgencyId>, TrustRecord>& records() const noexcept { return records_; }

 private:
  std::map<std::pair<AgencyId, AgencyId>, TrustRecord> records_;
};

}  // namespace trustwire
