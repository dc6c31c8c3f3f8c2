#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace trustwire {

// Stable error classes. The names returned by error_class_name() appear in
// audit logs and outcome reports, so they must not change.
enum class ErrorClass {
  Decode,
  Authentication,
  Integrity,
  AgencyVerification,
  RequestCorrelation,
  UnknownAgency,
  DuplicateAgency,
  NoTrustRecord,
  UnknownSubject,
  Arity,
  BadMagic,
  Truncated,
  UnknownTag,
  Length,
  DuplicateUser,
  Auth,
  Config,
  InvalidArgument,
};

std::string_view error_class_name(ErrorClass cls);
// Inverse of error_class_name; throws ConfigError for an unknown name.
ErrorClass parse_error_class(std::string_view name);

class Error : public std::runtime_error {
 public:
  Error(ErrorClass cls, const std::string& what) : std::runtime_error(what), cls_(cls) {}
  ErrorClass error_class() const noexcept { return cls_; }

 private:
  ErrorClass cls_;
};

template <ErrorClass C>
class TypedError : public Error {
 public:
  explicit TypedError(const std::string& what) : Error(C, what) {}
};

using DecodeError = TypedError<ErrorClass::Decode>;
using AuthenticationError = TypedError<ErrorClass::Authentication>;
using IntegrityError = TypedError<ErrorClass::Integrity>;
using AgencyVerificationError = TypedError<ErrorClass::AgencyVerification>;
using RequestCorrelationError = TypedError<ErrorClass::RequestCorrelation>;
using UnknownAgencyError = TypedError<ErrorClass::UnknownAgency>;
using DuplicateAgencyError = TypedError<ErrorClass::DuplicateAgency>;
using NoTrustRecordError = TypedError<ErrorClass::NoTrustRecord>;
using UnknownSubjectError = TypedError<ErrorClass::UnknownSubject>;
using ArityError = TypedError<ErrorClass::Arity>;
using BadMagicError = TypedError<ErrorClass::BadMagic>;
using TruncatedError = TypedError<ErrorClass::Truncated>;
using UnknownTagError = TypedError<ErrorClass::UnknownTag>;
using LengthError = TypedError<ErrorClass::Length>;
using DuplicateUserError = TypedError<ErrorClass::DuplicateUser>;
using AuthError = TypedError<ErrorClass::Auth>;
using ConfigError = TypedError<ErrorClass::Config>;
using InvalidArgumentError = TypedError<ErrorClass::InvalidArgument>;

}  // namespace trustwire
