#include "cornbn/errors.hpp"

namespace cornbn {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::InvalidArgument: return "InvalidArgument";
    case ErrorKind::UnknownVariable: return "UnknownVariable";
    case ErrorKind::UnknownEdge: return "UnknownEdge";
    case ErrorKind::CycleError: return "CycleError";
    case ErrorKind::DuplicateEdge: return "DuplicateEdge";
    case ErrorKind::InvalidCpt: return "InvalidCpt";
    case ErrorKind::InvalidEvidence: return "InvalidEvidence";
    case ErrorKind::InfeasibleConstraints: return "InfeasibleConstraints";
    case ErrorKind::InvalidRange: return "InvalidRange";
    case ErrorKind::EmptyMonth: return "EmptyMonth";
    case ErrorKind::DegenerateColumn: return "DegenerateColumn";
    case ErrorKind::EmptyBin: return "EmptyBin";
    case ErrorKind::EmptyData: return "EmptyData";
    case ErrorKind::EmptyFamily: return "EmptyFamily";
    case ErrorKind::ImpossibleEvidence: return "ImpossibleEvidence";
    case ErrorKind::MissingBinMeans: return "MissingBinMeans";
    case ErrorKind::BinOutOfRange: return "BinOutOfRange";
    case ErrorKind::NonPositiveActual: return "NonPositiveActual";
    case ErrorKind::SchemaError: return "SchemaError";
    case ErrorKind::IoError: return "IoError";
  }
  return "Unknown";
}

Error Error::with_context(std::string_view context) const {
  return Error(kind_, std::string(context) + ": " + what());
}

}  // namespace cornbn
