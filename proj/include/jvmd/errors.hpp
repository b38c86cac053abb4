#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace jvmd {

/// Base of every error thrown by the library.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// A frame violates the RealFrame invariants (odd/short length, non-finite sample, bad rate).
class InvalidFrame : public Error {
public:
  using Error::Error;
};

/// Two spectra or frames that must share a grid do not.
class DimensionMismatch : public Error {
public:
  using Error::Error;
};

class InvalidConfig : public Error {
public:
  using Error::Error;
};

class InvalidInput : public Error {
public:
  using Error::Error;
};

/// A solver produced a non-finite intermediate.
class Divergence : public Error {
public:
  Divergence(const std::string& solver, std::size_t iteration)
      : Error(solver + " diverged at iteration " + std::to_string(iteration)),
        iteration_(iteration) {}

  std::size_t iteration() const noexcept { return iteration_; }

private:
  std::size_t iteration_;
};

/// The query cannot be classified (zero vector).
class Undecidable : public Error {
public:
  using Error::Error;
};

class IoError : public Error {
public:
  IoError(const std::string& path, const std::string& what)
      : Error(what + ": '" + path + "'"), path_(path) {}

  const std::string& path() const noexcept { return path_; }

private:
  std::string path_;
};

/// Malformed frame file. Subclasses name the failure kind; offset() is the byte
/// position at which the reader gave up.
class FormatError : public Error {
public:
  FormatError(const std::string& what, std::size_t offset)
      : Error(what + " at byte offset " + std::to_string(offset)), offset_(offset) {}

  std::size_t offset() const noexcept { return offset_; }

private:
  std::size_t offset_;
};

class BadMagic : public FormatError {
public:
  explicit BadMagic(std::size_t offset) : FormatError("bad magic", offset) {}
};

class Truncated : public FormatError {
public:
  explicit Truncated(std::size_t offset) : FormatError("truncated file", offset) {}
};

class VersionMismatch : public FormatError {
public:
  VersionMismatch(unsigned found, std::size_t offset)
      : FormatError("unsupported format version " + std::to_string(found), offset) {}
};

class TrailingData : public FormatError {
public:
  explicit TrailingData(std::size_t offset) : FormatError("unexpected trailing bytes", offset) {}
};

}  // namespace jvmd
