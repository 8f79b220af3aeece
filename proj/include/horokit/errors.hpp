#pragma once

#include <stdexcept>
#include <string>

namespace horokit {

// Malformed input text (CSV, generator files). Message carries file/line context.
struct ParseError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// A configured size/point budget would be exceeded.
struct BudgetError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// A Moebius evaluation left the model (non-finite coordinates or height <= 0).
struct DegenerateTransformError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace horokit
