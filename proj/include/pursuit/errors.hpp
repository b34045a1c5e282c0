#ifndef PURSUIT_ERRORS_HPP
#define PURSUIT_ERRORS_HPP

#include <cstddef>
#include <stdexcept>
#include <string>

namespace pursuit {

/// Bad argument value (non-finite coordinates, invalid sizes, out-of-range index).
struct InvalidArgument : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

/// Operation called in a state that forbids it, e.g. stepping a finished episode.
struct ContractViolation : std::logic_error {
  using std::logic_error::logic_error;
};

/// A potential or bearing evaluated at zero distance.
struct SingularityError : std::domain_error {
  using std::domain_error::domain_error;
};

/// Replay buffer asked for more samples than it can provide.
struct NotReady : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Shape mismatch between networks, gradients or optimizer state.
struct ShapeMismatch : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

/// Configuration or file content that does not conform to its schema.
class SchemaError : public std::runtime_error {
 public:
  SchemaError(std::string path, const std::string& what)
      : std::runtime_error(path + ": " + what), path_(std::move(path)) {}
  const std::string& path() const noexcept { return path_; }

 private:
  std::string path_;
};

/// Malformed row in a CSV input.
class ParseError : public std::runtime_error {
 public:
  ParseError(std::size_t line, const std::string& what)
      : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

/// Resume attempted with a configuration that differs from the checkpoint's.
struct DigestMismatch : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace pursuit

#endif  // PURSUIT_ERRORS_HPP
