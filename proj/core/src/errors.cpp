#include "trustwire/errors.hpp"

#include <array>
#include <utility>

namespace trustwire {

namespace {

constexpr std::array<std::pair<ErrorClass, std::string_view>, 18> kNames{{
    {ErrorClass::Decode, "DecodeError"},
    {ErrorClass::Authentication, "AuthenticationError"},
    {ErrorClass::Integrity, "IntegrityError"},
    {ErrorClass::AgencyVerification, "AgencyVerificationError"},
    {ErrorClass::RequestCorrelation, "RequestCorrelationError"},
    {ErrorClass::UnknownAgency, "UnknownAgencyError"},
    {ErrorClass::DuplicateAgency, "DuplicateAgencyError"},
    {ErrorClass::NoTrustRecord, "NoTrustRecordError"},
    {ErrorClass::UnknownSubject, "UnknownSubjectError"},
    {ErrorClass::Arity, "ArityError"},
    {ErrorClass::BadMagic, "BadMagicError"},
    {ErrorClass::Truncated, "TruncatedError"},
    {ErrorClass::UnknownTag, "UnknownTagError"},
    {ErrorClass::Length, "LengthError"},
    {ErrorClass::DuplicateUser, "DuplicateUserError"},
    {ErrorClass::Auth, "AuthError"},
    {ErrorClass::Config, "ConfigError"},
    {ErrorClass::InvalidArgument, "InvalidArgumentError"},
}};

}  // namespace

std::string_view error_class_name(ErrorClass cls) {
  for (const auto& [c, name] : kNames) {
    if (c == cls) return name;
  }
  return "UnknownError";
}

ErrorClass parse_error_class(std::string_view name) {
  for (const auto& [c, n] : kNames) {
    if (n == name) return c;
  }
  throw ConfigError("unknown error class '" + std::string(name) + "'");
}

}  // namespace trustwire
