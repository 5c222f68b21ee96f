#include "levyexit/errors.hpp"

namespace levyexit {

const char* errc_name(Errc code) {
    switch (code) {
        case Errc::InvalidSpec: return "InvalidSpec";
        case Errc::InvalidQuery: return "InvalidQuery";
        case Errc::InfiniteRate: return "InfiniteRate";
        case Errc::NotInfiniteActivity: return "NotInfiniteActivity";
        case Errc::HorizonBelowWindow: return "HorizonBelowWindow";
        case Errc::SchemeMismatch: return "SchemeMismatch";
        case Errc::ParseError: return "ParseError";
    }
    return "Error";
}

}  // namespace levyexit
