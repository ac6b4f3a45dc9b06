#pragma once

#include <stdexcept>
#include <string>

namespace deadeye {

enum class ErrorKind {
  configuration,
  domain,
  generation,
  measurement,
  composition,
  contract,
  io,
  format,
  protocol,
};

const char* to_string(ErrorKind kind);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + " error: " + what), kind_(kind), detail_(what) {}

  ErrorKind kind() const noexcept { return kind_; }
  /// The message without the kind prefix.
  const std::string& detail() const noexcept { return detail_; }

 private:
  ErrorKind kind_;
  std::string detail_;
};

}  // namespace deadeye
