#pragma once
#include <stdexcept>
#include <string>

namespace nidsbench {

// Bad input data: malformed files, missing columns, schema mismatches.
class DataError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// A persisted artifact was produced for a different feature schema or format.
class SchemaError : public DataError {
public:
    using DataError::DataError;
};

// Invalid user configuration or arguments.
class ConfigError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

} // namespace nidsbench
