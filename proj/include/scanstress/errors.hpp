#pragma once

#include <stdexcept>
#include <string>

namespace scanstress {

// Base class for everything this library throws on purpose.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Bad configuration input: out-of-range parameter, unknown tier/module
// name, malformed scenario file. Message carries the offending key path.
class ConfigError : public Error {
 public:
  using Error::Error;
};

// File / stream problems: malformed headers, truncated bodies,
// unsupported encodings. Message carries byte-offset context when known.
class IoError : public Error {
 public:
  using Error::Error;
};

// Field-schema problems (missing x/y/z and the like).
class SchemaError : public Error {
 public:
  using Error::Error;
};

// Evaluation pipeline failures: empty association, degenerate alignment,
// ICP with too few correspondences, IMU buffer not covering the window.
class EvalError : public Error {
 public:
  using Error::Error;
};

}  // namespace scanstress
