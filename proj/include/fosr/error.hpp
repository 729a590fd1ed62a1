#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace fosr {

enum class ErrorKind {
  SelfLoop,
  DuplicateEdge,
  NodeOutOfRange,
  IsolatedNode,
  DimensionMismatch,
  DegenerateVector,
  GraphTooLarge,
  DisconnectedGraph,
  NotDeflated,
  ZeroVector,
  SelfPair,
  EdgeExists,
  GraphComplete,
  UnknownRelation,
  EnergyBlowup,
  InvalidParameter,
  ParseError,
};

constexpr std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::SelfLoop: return "SelfLoop";
    case ErrorKind::DuplicateEdge: return "DuplicateEdge";
    case ErrorKind::NodeOutOfRange: return "NodeOutOfRange";
    case ErrorKind::IsolatedNode: return "IsolatedNode";
    case ErrorKind::DimensionMismatch: return "DimensionMismatch";
    case ErrorKind::DegenerateVector: return "DegenerateVector";
    case ErrorKind::GraphTooLarge: return "GraphTooLarge";
    case ErrorKind::DisconnectedGraph: return "DisconnectedGraph";
    case ErrorKind::NotDeflated: return "NotDeflated";
    case ErrorKind::ZeroVector: return "ZeroVector";
    case ErrorKind::SelfPair: return "SelfPair";
    case ErrorKind::EdgeExists: return "EdgeExists";
    case ErrorKind::GraphComplete: return "GraphComplete";
    case ErrorKind::UnknownRelation: return "UnknownRelation";
    case ErrorKind::EnergyBlowup: return "EnergyBlowup";
    case ErrorKind::InvalidParameter: return "InvalidParameter";
    case ErrorKind::ParseError: return "ParseError";
  }
  return "Unknown";
}

/// Every failure raised by the library carries a machine-checkable kind.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace fosr
