#include "trustwire/trustplane.hpp"

#include <cmath>
#include <limits>
#include <random>

#include "trustwire/digest.hpp"
#include "trustwire/errors.hpp"

namespace trustwire {

MappingFunction::MappingFunction(std::vector<MapOp> ops) : ops_(std::move(ops)) {
  if (ops_.size() >= RandomSet::kMaxSize) throw InvalidArgumentError("mapping function has too many operators");
}

MappingFunction MappingFunction::parse(std::string_view text) {
  std::vector<MapOp> ops;
  for (std::size_t i = 0; i < text.size();) {
    const char c = text[i];
    if (c == '+') {
      ops.push_back(MapOp::Add);
      ++i;
    } else if (c == '-') {
      ops.push_back(MapOp::Sub);
      ++i;
    } else if (c == '*' || c == 'x') {
      ops.push_back(MapOp::Mul);
      ++i;
    } else if (c == '/') {
      ops.push_back(MapOp::Div);
      ++i;
    } else if (text.substr(i, 2) == "\xC3\x97") {  // ×
      ops.push_back(MapOp::Mul);
      i += 2;
    } else if (text.substr(i, 2) == "\xC3\xB7") {  // ÷
      ops.push_back(MapOp::Div);
      i += 2;
    } else if (text.substr(i, 3) == "\xE2\x88\x92") {  // −
      ops.push_back(MapOp::Sub);
      i += 3;
    } else {
      throw InvalidArgumentError("bad mapping operator in '" + std::string(text) + "'");
    }
  }
  return MappingFunction(std::move(ops));
}

std::string MappingFunction::to_string() const {
  std::string out;
  for (MapOp op : ops_) out.push_back(static_cast<char>(op));
  return out;
}

namespace {

__extension__ typedef unsigned __int128 u128;

std::uint64_t mul_mod(std::uint64_t a, std::uint64_t b) {
  return static_cast<std::uint64_t>(static_cast<u128>(a) * b % kMappingModulus);
}

std::uint64_t pow_mod(std::uint64_t base, std::uint64_t exp) {
  std::uint64_t result = 1;
  for (; exp; exp >>= 1) {
    if (exp & 1) result = mul_mod(result, base);
    base = mul_mod(base, base);
  }
  return result;
}

}  // namespace

double fold_mapping(const MappingFunction& fn, const RandomSet& set) {
  if (set.size() != fn.arity()) {
    throw ArityError("mapping expects " + std::to_string(fn.arity()) + " values, got " +
                     std::to_string(set.size()));
  }
  const auto& values = set.values();
  std::uint64_t acc = values[0] % kMappingModulus;
  for (std::size_t i = 0; i < fn.ops().size(); ++i) {
    const std::uint64_t x = values[i + 1] % kMappingModulus;
    switch (fn.ops()[i]) {
      case MapOp::Add:
        acc = (acc + x) % kMappingModulus;
        break;
      case MapOp::Sub:
        acc = (acc + kMappingModulus - x) % kMappingModulus;
        break;
      case MapOp::Mul:
        acc = mul_mod(acc, x);
        break;
      case MapOp::Div:
        if (x != 0) acc = mul_mod(acc, pow_mod(x, kMappingModulus - 2));
        break;
    }
  }
  // Exact: every residue is below 2^53.
  return static_cast<double>(acc);
}

double eval_mapping(const MappingFunction& fn, const RandomSet& set) { return std::sin(fold_mapping(fn, set)); }

double checked_trust_level(double level) {
  if (!std::isfinite(level) || level < 0.0 || level > 1.0) {
    throw InvalidArgumentError("trust level must lie in [0, 1]");
  }
  return level;
}

std::size_t disclosure_count(double trust, std::size_t n) {
  checked_trust_level(trust);
  constexpr double kSlack = 1e-9;
  const double scaled = trust * static_cast<double>(n) - kSlack;
  if (scaled <= 0.0) return 0;
  const auto k = static_cast<std::size_t>(std::ceil(scaled));
  return k > n ? n : k;
}

std::vector<std::size_t> selection_order(const SelectionSeed& seed, std::size_t n) {
  const Bytes keyed = encode_fields({
      Field{FieldTag::AgencyId, to_bytes(seed.source)},
      Field{FieldTag::AgencyId, to_bytes(seed.target)},
      Field{FieldTag::RequestPayload, to_bytes(seed.subject)},
  });
  std::mt19937_64 rng(read_u64_be(md5_digest(keyed).view()));

  std::vector<std::size_t> order(n);
  for (std::size_t i = 0; i < n; ++i) order[i] = i;
  // Fisher-Yates with rejection sampling so the result does not depend on the
  // standard library's distribution implementation.
  for (std::size_t i = n; i > 1; --i) {
    const std::uint64_t bound = i;
    const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() - std::numeric_limits<std::uint64_t>::max() % bound;
    std::uint64_t draw;
    do {
      draw = rng();
    } while (draw >= limit);
    std::swap(order[i - 1], order[draw % bound]);
  }
  return order;
}

SharedInfo trust_filter(const std::vector<std::string>& items, double trust_level, const SelectionSeed& seed) {
  const std::size_t count = disclosure_count(trust_level, items.size());
  const auto order = selection_order(seed, items.size());
  SharedInfo info;
  info.trust_level_used = trust_level;
  info.items.reserve(count);
  for (std::size_t i = 0; i < count; ++i) info.items.push_back(items[order[i]]);
  return info;
}

void TrustPlane::add(TrustRecord record) {
  checked_trust_level(record.trust_level);
  for (const auto& [code, level] : record.overrides) checked_trust_level(level);
  auto key = std::make_pair(record.source, record.target);
  if (records_.contains(key)) {
    throw ConfigError("duplicate trust record " + record.source.str() + "->" + record.target.str());
  }
  records_.emplace(std::move(key), std::move(record));
}

const TrustRecord& TrustPlane::record(const AgencyId& source, const AgencyId& target) const {
  auto it = records_.find({source, target});
  if (it == records_.end()) throw NoTrustRecordError("no trust record " + source.str() + "->" + target.str());
  return it->second;
}

bool TrustPlane::contains(const AgencyId& source, const AgencyId& target) const {
  return records_.contains({source, target});
}

ResolvedTrust TrustPlane::lookup(const AgencyId& source, const AgencyId& target, std::string_view subject) const {
  const TrustRecord& rec = record(source, target);
  auto it = rec.overrides.find(std::string(subject));
  return ResolvedTrust{it != rec.overrides.end() ? it->second : rec.trust_level, rec.mapping};
}

}  // namespace trustwire
