#pragma once

#include <stdexcept>
#include <string>

namespace cremona {

enum class errc {
    invalid_input,
    invalid_cluster,
    not_homaloidal,
    not_applicable,
    invalid_state,
    wrong_surface,
    not_proper_point,
    invalid_contraction,
    special_position,
    invalid_composition,
    invalid_trace,
    degenerate_composition,
    non_rational_base_point,
    infinitely_near_or_irrational,
    corpus_generation_failed,
    internal_invariant_violation,
};

inline const char* errc_name(errc e) {
    switch (e) {
        case errc::invalid_input: return "InvalidInput";
        case errc::invalid_cluster: return "InvalidCluster";
        case errc::not_homaloidal: return "NotHomaloidal";
        case errc::not_applicable: return "NotApplicable";
        case errc::invalid_state: return "InvalidState";
        case errc::wrong_surface: return "WrongSurface";
        case errc::not_proper_point: return "NotProperPoint";
        case errc::invalid_contraction: return "InvalidContraction";
        case errc::special_position: return "SpecialPosition";
        case errc::invalid_composition: return "InvalidComposition";
        case errc::invalid_trace: return "InvalidTrace";
        case errc::degenerate_composition: return "DegenerateComposition";
        case errc::non_rational_base_point: return "NonRationalBasePoint";
        case errc::infinitely_near_or_irrational: return "InfinitelyNearOrIrrational";
        case errc::corpus_generation_failed: return "CorpusGenerationFailed";
        case errc::internal_invariant_violation: return "InternalInvariantViolation";
    }
    return "UnknownError";
}

/// Domain error carrying a typed error code; every throwing operation in the
/// library uses this type so callers (and the CLI) can map failures to stable
/// error names.
class error : public std::runtime_error {
public:
    error(errc code, const std::string& what)
        : std::runtime_error(std::string(errc_name(code)) + ": " + what), code_(code) {}

    errc code() const { return code_; }
    const char* name() const { return errc_name(code_); }

private:
    errc code_;
};

[[noreturn]] inline void fail(errc code, const std::string& what) { throw error(code, what); }

inline void require(bool cond, errc code, const std::string& what) {
    if (!cond) fail(code, what);
}

} // namespace cremona
