#include "trustwire/infostore.hpp"

#include "trustwire/errors.hpp"

namespace trustwire {

void InfoStore::insert(std::string code, InfoRecord record) {
  if (code.empty()) throw ConfigError("terrorist code must not be empty");
  if (record.items.empty()) throw ConfigError("info record '" + code + "' has no items");
  if (records_.contains(code)) throw ConfigError("duplicate info record '" + code + "'");
  records_.emplace(std::move(code), std::move(record));
}

const InfoRecord* InfoStore::find(std::string_view code) const {
  auto it = records_.find(code);
  return it == records_.end() ? nullptr : &it->second;
}

Digest InfoStore::fingerprint() const {
  Bytes canon;
  auto put = [&canon](const std::string& s) {
    append_u32_be(canon, static_cast<std::uint32_t>(s.size()));
    canon.insert(canon.end(), s.begin(), s.end());
  };
  for (const auto& [code, rec] : records_) {
    put(code);
    append_u32_be(canon, static_cast<std::uint32_t>(rec.items.size()));
    for (const auto& item : rec.items) put(item);
    append_u32_be(canon, static_cast<std::uint32_t>(rec.activities.size()));
    for (const auto& act : rec.activities) put(act);
  }
  return md5_digest(canon);
}

}  // namespace trustwire
