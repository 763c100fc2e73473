#pragma once

#include <stdexcept>
#include <string>

namespace qmpl {

// Every failure the library can signal, so callers (and the CLI) can map
// errors to stable identifiers instead of matching on message text.
enum class errc {
    invalid_parameter,
    mode_mismatch,
    division_by_zero,
    singular_point,
    domain_violation,
    divergent_series,
    unsupported,
    root_not_representable,
    degree_cap_mismatch,
    parse_error,
    io_error,
    internal,
};

inline const char* errc_name(errc c) {
    switch (c) {
    case errc::invalid_parameter:      return "invalid_parameter";
    case errc::mode_mismatch:          return "mode_mismatch";
    case errc::division_by_zero:       return "division_by_zero";
    case errc::singular_point:         return "singular_point";
    case errc::domain_violation:       return "domain_violation";
    case errc::divergent_series:       return "divergent_series";
    case errc::unsupported:            return "unsupported";
    case errc::root_not_representable: return "root_not_representable";
    case errc::degree_cap_mismatch:    return "degree_cap_mismatch";
    case errc::parse_error:            return "parse_error";
    case errc::io_error:               return "io_error";
    case errc::internal:               return "internal";
    }
    return "unknown";
}

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

inline void require(bool ok, errc code, const std::string& msg) {
    if (!ok) fail(code, msg);
}

} // namespace qmpl
