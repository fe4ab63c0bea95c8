#pragma once

#include <stdexcept>

namespace derham {

/// Violated mathematical precondition (non-connective input, missing
/// regularity flag, unsupported presentation shape, ...). The CLI maps this
/// to exit code 3; malformed input (std::invalid_argument) maps to 2.
struct precondition_error : std::domain_error {
    using std::domain_error::domain_error;
};

}  // namespace derham
