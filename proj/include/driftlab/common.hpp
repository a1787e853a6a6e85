// Copyright 2026 The driftlab authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.

#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>

namespace driftlab {

// Error taxonomy. Every throwing operation in the library uses one of
// these; catch driftlab::Error to handle all of them.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Malformed file contents (bad WAV header, truncated model file, ...).
struct FormatError : Error {
  using Error::Error;
};

// Well-formed file, but a shape we refuse to handle (stereo WAV, 24-bit).
struct UnsupportedFormatError : FormatError {
  using FormatError::FormatError;
};

struct IoError : Error {
  using Error::Error;
};

// Input is valid per the type but degenerate for the operation
// (zero-energy signal, too-short waveform, empty feature matrix).
struct DegenerateInputError : Error {
  using Error::Error;
};

// Caller broke an API contract (shape mismatch, missing cache).
struct ContractError : Error {
  using Error::Error;
};

// Target label sequence cannot be aligned within the available frames.
struct InfeasibleTargetError : Error {
  using Error::Error;
};

// Bad corpus / manifest / score data; message names the offending item.
struct DataError : Error {
  using Error::Error;
};

// Instance exceeds a size guard (e.g. brute-force enumeration too large).
struct GuardError : Error {
  using Error::Error;
};

// Non-finite value appeared where the algorithm requires finite arithmetic.
struct NumericError : Error {
  using Error::Error;
};

struct ConfigError : Error {
  using Error::Error;
};

// FNV-1a, used wherever a stable cross-run hash is needed (derived seeds).
inline std::uint64_t fnv1a64(std::string_view s,
                             std::uint64_t h = 0xcbf29ce484222325ull) {
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  return h;
}

inline std::uint64_t fnv1a64_u64(std::uint64_t x, std::uint64_t h) {
  for (int i = 0; i < 8; ++i) {
    h ^= (x >> (8 * i)) & 0xff;
    h *= 0x100000001b3ull;
  }
  return h;
}

// Stable per-item seed: hash(seed, a, b). Used to give each (source,
// target) attack its own reproducible stream.
inline std::uint64_t derive_seed(std::uint64_t seed, std::string_view a,
                                 std::string_view b) {
  std::uint64_t h = fnv1a64_u64(seed, 0xcbf29ce484222325ull);
  h = fnv1a64(a, h);
  h = fnv1a64("/", h);
  h = fnv1a64(b, h);
  return h;
}

}  // namespace driftlab
