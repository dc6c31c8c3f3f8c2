#pragma once

#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "trustwire/digest.hpp"

namespace trustwire {

struct InfoRecord {
  std::vector<std::string> items;
  std::vector<std::string> activities;
  friend bool operator==(const InfoRecord&, const InfoRecord&) = default;
};

/// Information held by one agency, indexed by terrorist code.
class InfoStore {
 public:
  /// Throws ConfigError for a duplicate code or an empty item list.
  void insert(std::string code, InfoRecord record);
  const InfoRecord* find(std::string_view code) const;
  const std::map<std::string, InfoRecord, std::less<>>& records() const noexcept { return records_; }
  bool empty() const noexcept { return records_.empty(); }

  /// Digest over a canonical encoding of every record, for read-only checks.
  Digest fingerprint() const;

  friend bool operator==(const InfoStore&, const InfoStore&) = default;

 private:
  std::map<std::string, InfoRecord, std::less<>> records_;
};

}  // namespace trustwire
