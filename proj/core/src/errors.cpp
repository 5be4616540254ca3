#include "sicf/errors.hpp"

namespace sicf {

SchemaError::SchemaError(std::size_t line, const std::string& what)
    : Error("line " + std::to_string(line) + ": " + what), line_(line) {}

LookupError::LookupError(std::string key)
    : Error("no record for key '" + key + "'"), key_(std::move(key)) {}

}  // namespace sicf
