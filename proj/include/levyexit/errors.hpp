#pragma once

#include <stdexcept>
#include <string>

namespace levyexit {

// Machine-readable failure codes; the CLI maps all of these to exit code 2.
enum class Errc {
    InvalidSpec,          // model/measure/scenario fails a structural invariant
    InvalidQuery,         // a <= 0, b <= 0, or m >= M
    InfiniteRate,         // delta = 0 requested on an infinite-activity measure
    NotInfiniteActivity,  // small-jump substitution on a finite-activity model
    HorizonBelowWindow,   // simulation horizon does not cover the query window
    SchemeMismatch,       // zero-verdict row paired with an approximate scheme
    ParseError,           // malformed or unversioned document
};

const char* errc_name(Errc code);

class Error : public std::runtime_error {
public:
    Error(Errc code, const std::string& msg)
        : std::runtime_error(std::string(errc_name(code)) + ": " + msg), code_(code) {}

    Errc code() const noexcept { return code_; }

private:
    Errc code_;
};

[[noreturn]] inline void fail(Errc code, const std::string& msg) { throw Error(code, msg); }

inline void require(bool cond, Errc code, const std::string& msg) {
    if (!cond) fail(code, msg);
}

}  // namespace levyexit
