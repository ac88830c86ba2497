#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace explika {

/// Location of a token or construct inside a theory text.
struct SourceSpan {
  std::size_t start = 0;  // byte offset, inclusive
  std::size_t end = 0;    // byte offset, exclusive
  std::size_t line = 1;
  std::size_t column = 1;
};

enum class ErrorKind {
  SyntaxError,
  UnknownPredicate,
  UnknownConstant,
  UndeclaredSymbol,
  ArityMismatch,
  PredLinkArityMismatch,
  LinkKindMismatch,
  Redeclared,
  ExplanationInPremise,
  InconsistentTheory,
  UnknownAtom,
  LimitExceeded,
};

std::string_view to_string(ErrorKind kind);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message,
        std::optional<SourceSpan> span = std::nullopt);

  ErrorKind kind() const noexcept { return kind_; }
  const std::optional<SourceSpan>& span() const noexcept { return span_; }

 private:
  ErrorKind kind_;
  std::optional<SourceSpan> span_;
};

}  // namespace explika
