#pragma once

#include <stdexcept>
#include <string>

namespace tpk {

/// Bad arguments, malformed input files, domain violations.
class invalid_input : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Singular systems, failed factorizations, non-finite intermediate results.
class numeric_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace tpk
