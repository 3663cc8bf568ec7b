#pragma once

#include <stdexcept>
#include <string>

namespace locqubo {

struct ValidationError : std::runtime_error {
  explicit ValidationError(const std::string& msg) : std::runtime_error(msg) {}
};

struct ParseError : std::runtime_error {
  explicit ParseError(const std::string& msg) : std::runtime_error(msg) {}
};

struct UnknownTable : std::runtime_error {
  explicit UnknownTable(const std::string& msg) : std::runtime_error(msg) {}
};

struct LengthMismatch : std::runtime_error {
  explicit LengthMismatch(const std::string& msg) : std::runtime_error(msg) {}
};

struct SizeMismatch : std::runtime_error {
  explicit SizeMismatch(const std::string& msg) : std::runtime_error(msg) {}
};

struct CapExceeded : std::runtime_error {
  explicit CapExceeded(const std::string& msg) : std::runtime_error(msg) {}
};

struct TooManyQubits : std::runtime_error {
  explicit TooManyQubits(const std::string& msg) : std::runtime_error(msg) {}
};

struct UnsupportedFamily : std::runtime_error {
  explicit UnsupportedFamily(const std::string& msg) : std::runtime_error(msg) {}
};

struct UnknownFamily : std::runtime_error {
  explicit UnknownFamily(const std::string& msg) : std::runtime_error(msg) {}
};

struct EpsOutOfRange : std::runtime_error {
  explicit EpsOutOfRange(const std::string& msg) : std::runtime_error(msg) {}
};

struct ShapeMismatch : std::runtime_error {
  explicit ShapeMismatch(const std::string& msg) : std::runtime_error(msg) {}
};

struct NotNormalized : std::runtime_error {
  explicit NotNormalized(const std::string& msg) : std::runtime_error(msg) {}
};

struct InfeasibleError : std::runtime_error {
  explicit InfeasibleError(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace locqubo
