#ifndef SACT_TRIPLET_HPP
#define SACT_TRIPLET_HPP

#include <optional>
#include <string>
#include <string_view>

namespace sact {

/// Relation between a SACT mention and its time expression.
enum class Relation { begins_on, ends_on, contains_1 };

inline const char* to_string(Relation r) {
    switch (r) {
        case Relation::begins_on: return "BEGINS-ON";
        case Relation::ends_on: return "ENDS-ON";
        case Relation::contains_1: return "CONTAINS-1";
    }
    return "?";
}

/// Only the three exact labels are legal; anything else (including case
/// variants) is rejected so that strict-match scoring never sees a
/// coerced relation.
inline std::optional<Relation> relation_from_string(std::string_view s) {
    if (s == "BEGINS-ON") return Relation::begins_on;
    if (s == "ENDS-ON") return Relation::ends_on;
    if (s == "CONTAINS-1") return Relation::contains_1;
    return std::nullopt;
}

/// One extracted event: SACT surface form, relation, raw time expression.
/// Surface strings are kept verbatim; canonicalization happens at
/// aggregation and scoring time.
struct SactTriplet {
    std::string sact;
    Relation relation = Relation::contains_1;
    std::string time_raw;

    bool operator==(const SactTriplet&) const = default;
};

} // namespace sact

#endif // SACT_TRIPLET_HPP
