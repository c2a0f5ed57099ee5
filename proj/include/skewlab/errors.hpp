#pragma once

#include <stdexcept>
#include <string>

namespace skewlab {

enum class errc {
    invalid_input,        // malformed data, bad parameters, unusable ranges
    degenerate_map,       // zero-scale affine map
    empty_union,          // hull-dependent operation on an empty union
    insufficient_coding,  // itinerary too short for the requested operation
    depth_cap,            // recursion depth above the resource cap
    escape,               // backward lift left [0, 1]
    membership,           // backward lift left the certified fiber set
    no_disagreement,      // identical choice sequences in a separation query
    precision,            // requested tolerance cannot be certified
    scale_range,          // box-dimension scale window unusable
    root_bracket,         // no sign change over the root search range
    non_monotone,         // pressure failed the monotonicity spot check
    config                // unreadable or inconsistent config file
};

class error : public std::runtime_error {
public:
    error(errc code, const std::string& what)
        : std::runtime_error(what), code_(code) {}

    errc code() const noexcept { return code_; }

private:
    errc code_;
};

[[noreturn]] inline void fail(errc code, const std::string& msg) {
    throw error(code, msg);
}

} // namespace skewlab
