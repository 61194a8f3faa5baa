#include "rsfw/rng.hpp"

#include <cmath>

#include "rsfw/error.hpp"

namespace rsfw {

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) noexcept {
  // splitmix64 finalizer applied to both halves
  auto mix = [](std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  };
  return mix(mix(seed) ^ (stream * 0xd1342543de82ef95ULL + 0x632be59bd9b4e019ULL));
}

double Rng::exponential(double rate) {
  // 1 - u lies in (0, 1], so the log is finite
  return -std::log1p(-uniform()) / rate;
}

const char* to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::InvalidArgument: return "InvalidArgument";
    case ErrorKind::DimensionMismatch: return "DimensionMismatch";
    case ErrorKind::ParseError: return "ParseError";
    case ErrorKind::ReversibilityViolation: return "ReversibilityViolation";
    case ErrorKind::Disconnected: return "Disconnected";
    case ErrorKind::NonPositiveRate: return "NonPositiveRate";
    case ErrorKind::NonPositiveParameter: return "NonPositiveParameter";
    case ErrorKind::ConvergenceFailure: return "ConvergenceFailure";
    case ErrorKind::GraphTooLarge: return "GraphTooLarge";
    case ErrorKind::EdgeNotInGraph: return "EdgeNotInGraph";
    case ErrorKind::EmptyKeptSet: return "EmptyKeptSet";
    case ErrorKind::FullKeptSet: return "FullKeptSet";
    case ErrorKind::SingularBlock: return "SingularBlock";
    case ErrorKind::NotConverged: return "NotConverged";
    case ErrorKind::SolverFailure: return "SolverFailure";
    case ErrorKind::DegreeTooLow: return "DegreeTooLow";
    case ErrorKind::DegenerateGraph: return "DegenerateGraph";
    case ErrorKind::EmptyComplement: return "EmptyComplement";
    case ErrorKind::ShapeMismatch: return "ShapeMismatch";
    case ErrorKind::RadiusDisconnected: return "RadiusDisconnected";
  }
  return "Unknown";
}

}  // namespace rsfw
