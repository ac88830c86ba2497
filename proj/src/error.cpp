#include "explika/error.hpp"

namespace explika {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::SyntaxError: return "SyntaxError";
    case ErrorKind::UnknownPredicate: return "UnknownPredicate";
    case ErrorKind::UnknownConstant: return "UnknownConstant";
    case ErrorKind::UndeclaredSymbol: return "UndeclaredSymbol";
    case ErrorKind::ArityMismatch: return "ArityMismatch";
    case ErrorKind::PredLinkArityMismatch: return "PredLinkArityMismatch";
    case ErrorKind::LinkKindMismatch: return "LinkKindMismatch";
    case ErrorKind::Redeclared: return "Redeclared";
    case ErrorKind::ExplanationInPremise: return "ExplanationInPremise";
    case ErrorKind::InconsistentTheory: return "InconsistentTheory";
    case ErrorKind::UnknownAtom: return "UnknownAtom";
    case ErrorKind::LimitExceeded: return "LimitExceeded";
  }
  return "Error";
}

Error::Error(ErrorKind kind, const std::string& message, std::optional<SourceSpan> span)
    : std::runtime_error(message), kind_(kind), span_(span) {}

}  // namespace explika
