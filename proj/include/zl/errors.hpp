#pragma once

#include <stdexcept>

namespace zl {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// wire format problems: truncation, bad tags, trailing bytes, bad hex
struct CodecError : Error { using Error::Error; };

// a put tried to change bytes already stored under a compliance hold
struct WormViolation : Error { using Error::Error; };

// a simulated service instance is halted or unreachable
struct ServiceDown : Error { using Error::Error; };

// fewer shards reachable than the decode threshold
struct Unavailable : Error { using Error::Error; };

// decoded bytes do not match the digest in the object link
struct IntegrityFailure : Error { using Error::Error; };

struct InsufficientShards : Error { using Error::Error; };
struct DependentCoefficients : Error { using Error::Error; };

struct QueueFull : Error { using Error::Error; };
struct EmptyBatch : Error { using Error::Error; };

// verification could not reach all replicated objects and the
// requested transaction was not in the provable prefix
struct SnapshotIncomplete : Error { using Error::Error; };

}  // namespace zl
