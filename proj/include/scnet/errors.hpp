#pragma once

#include <stdexcept>
#include <string>

namespace scnet {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// A matrix or vector whose shape disagrees with the instance counts.
class DimensionError : public Error {
public:
    using Error::Error;
};

// Unparseable or schema-violating input text.
class FormatError : public Error {
public:
    using Error::Error;
};

class ConfigError : public Error {
public:
    using Error::Error;
};

class IoError : public Error {
public:
    using Error::Error;
};

} // namespace scnet
