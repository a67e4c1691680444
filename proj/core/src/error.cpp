#include "revfilt/error.hpp"

namespace revfilt {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::DimensionMismatch: return "DimensionMismatch";
    case ErrorKind::ImageTooSmall: return "ImageTooSmall";
    case ErrorKind::NonFinite: return "NonFinite";
    case ErrorKind::ZeroReference: return "ZeroReference";
    case ErrorKind::MalformedFile: return "MalformedFile";
    case ErrorKind::UnsupportedFormat: return "UnsupportedFormat";
    case ErrorKind::IoFailure: return "IoFailure";
    case ErrorKind::KernelTooLarge: return "KernelTooLarge";
    case ErrorKind::InvalidParameter: return "InvalidParameter";
    case ErrorKind::ProcessFailure: return "ProcessFailure";
    case ErrorKind::ProtocolViolation: return "ProtocolViolation";
    case ErrorKind::Timeout: return "Timeout";
    case ErrorKind::ZeroDirection: return "ZeroDirection";
    case ErrorKind::Diverged: return "Diverged";
    case ErrorKind::MissingGroundTruth: return "MissingGroundTruth";
    case ErrorKind::NotLinear: return "NotLinear";
  }
  return "Unknown";
}

}  // namespace revfilt
