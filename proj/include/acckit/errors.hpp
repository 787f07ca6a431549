#pragma once

#include <stdexcept>
#include <string>

namespace acckit {

// Base of everything this library throws deliberately.
struct error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Caller-side problems: bad arguments, bad configuration, unusable input
// files. The CLI maps these to exit code 2.
struct usage_error : error {
    using error::error;
};

// Runtime numerical failures. The CLI maps these to exit code 1.
struct numeric_error : error {
    using error::error;
};

struct invalid_argument_error : usage_error {
    using usage_error::usage_error;
};
struct invalid_config_error : usage_error {
    using usage_error::usage_error;
};
struct schema_error : usage_error {
    using usage_error::usage_error;
};
struct insufficient_data_error : usage_error {
    using usage_error::usage_error;
};
struct malformed_time_error : usage_error {
    using usage_error::usage_error;
};
struct data_gap_error : usage_error {
    using usage_error::usage_error;
};
struct invalid_profile_error : usage_error {
    using usage_error::usage_error;
};
struct io_error : usage_error {
    using usage_error::usage_error;
};

struct numerical_breakdown_error : numeric_error {
    using numeric_error::numeric_error;
};
struct rank_deficient_error : numeric_error {
    using numeric_error::numeric_error;
};
struct degenerate_recovery_error : numeric_error {
    using numeric_error::numeric_error;
};
struct divergence_error : numeric_error {
    using numeric_error::numeric_error;
};
struct singular_frequency_error : numeric_error {
    using numeric_error::numeric_error;
};

} // namespace acckit
