#pragma once

#include <stdexcept>
#include <string>

namespace cancoord {

// Base class for every failure raised by this library.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Input violates a documented invariant (malformed grid, off-grid value, ...).
struct ValidationError : Error {
    using Error::Error;
};

// Value falls outside the span a grid can snap.
struct OutOfRangeError : Error {
    using Error::Error;
};

// Objective has no usable maximum (max observed value <= 0).
struct DegenerateObjectiveError : Error {
    using Error::Error;
};

// Too few samples to fit a predictor.
struct InsufficientDataError : Error {
    using Error::Error;
};

// A wire frame is not one parseable JSON line.
struct FrameError : Error {
    using Error::Error;
};

// A well-formed message violates the coordination protocol.
struct ProtocolError : Error {
    using Error::Error;
};

// An event log cannot be replayed.
struct ReplayError : Error {
    using Error::Error;
};

} // namespace cancoord
