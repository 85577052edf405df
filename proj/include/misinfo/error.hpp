#ifndef MISINFO_ERROR_HPP
#define MISINFO_ERROR_HPP

#include <stdexcept>
#include <string>

namespace misinfo {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// Input violates a documented invariant (bad score, malformed tree, ...).
class ValidationError : public Error {
  public:
    using Error::Error;
};

/// A record lacks the modality an extractor needs (no audio, no parse trees,
/// no POS tags). Callers exclude the record and report the reason instead of
/// zero-filling.
class MissingModalityError : public Error {
  public:
    using Error::Error;
};

}  // namespace misinfo

#endif  // MISINFO_ERROR_HPP
