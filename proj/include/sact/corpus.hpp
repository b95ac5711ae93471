#ifndef SACT_CORPUS_HPP
#define SACT_CORPUS_HPP

#include <algorithm>
#include <array>
#include <filesystem>
#include <fstream>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "sact/date.hpp"
#include "sact/text.hpp"
#include "sact/triplet.hpp"

namespace sact {

enum class CancerType { breast, melanoma, ovarian };

inline const char* to_string(CancerType t) {
    switch (t) {
        case CancerType::breast: return "breast";
        case CancerType::melanoma: return "melanoma";
        case CancerType::ovarian: return "ovarian";
    }
    return "?";
}

inline std::optional<CancerType> cancer_type_from_string(std::string_view s) {
    if (s == "breast") return CancerType::breast;
    if (s == "melanoma") return CancerType::melanoma;
    if (s == "ovarian") return CancerType::ovarian;
    return std::nullopt;
}

struct ClinicalNote {
    std::string patient_id;
    std::string note_id;
    std::string text;
    std::optional<Date> doctime;
};

struct GoldAnnotation {
    std::string note_id;
    std::vector<SactTriplet> triplets;
};

struct PatientRecord {
    std::string patient_id;
    CancerType cancer_type = CancerType::breast;
    std::vector<ClinicalNote> notes;
    std::vector<GoldAnnotation> gold;

    const GoldAnnotation* gold_for(std::string_view note_id) const {
        for (const auto& g : gold)
            if (g.note_id == note_id) return &g;
        return nullptr;
    }
};

/// Character-offset extent of one sentence within a note.
struct SentenceSpan {
    std::string note_id;
    size_t index = 0;
    size_t start = 0;
    size_t end = 0; // exclusive

    bool operator==(const SentenceSpan&) const = default;
};

class CorpusFormatError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Document time: the first run of exactly eight consecutive digits that
/// reads as a valid YYYYMMDD date. Longer digit runs (MRNs, phone numbers)
/// are skipped whole.
inline std::optional<Date> detect_doctime(std::string_view text) {
    size_t i = 0;
    const size_t n = text.size();
    while (i < n) {
        if (!std::isdigit(static_cast<unsigned char>(text[i]))) {
            ++i;
            continue;
        }
        size_t j = i;
        while (j < n && std::isdigit(static_cast<unsigned char>(text[j]))) ++j;
        if (j - i == 8) {
            int year = 0, month = 0, day = 0;
            for (size_t k = 0; k < 4; ++k) year = year * 10 + (text[i + k] - '0');
            month = (text[i + 4] - '0') * 10 + (text[i + 5] - '0');
            day = (text[i + 6] - '0') * 10 + (text[i + 7] - '0');
            Date d{year, month, day};
            if (year >= 1900 && year <= 2100 && is_valid_date(d)) return d;
        }
        i = j;
    }
    return std::nullopt;
}

namespace detail {

inline bool is_abbreviation(std::string_view token) {
    if (token.size() == 1) return true; // initials like "J."
    static constexpr std::array<std::string_view, 17> kAbbrev = {
        "dr", "mr", "mrs", "ms", "prof", "st", "vs", "etc", "mg", "mcg",
        "ml", "cc", "no", "fig", "approx", "dept", "inc"};
    std::string low = to_lower(token);
    return std::find(kAbbrev.begin(), kAbbrev.end(), low) != kAbbrev.end();
}

} // namespace detail

/// Deterministic sentence splitting: breaks after . ! ? followed by
/// whitespace, and at blank lines. A fixed abbreviation list and decimal
/// numbers guard against false breaks. Spans are trimmed to non-whitespace
/// extents, ordered, and non-overlapping.
inline std::vector<SentenceSpan> split_sentences(std::string_view text,
                                                 const std::string& note_id = {}) {
    std::vector<size_t> boundaries; // position where a new segment starts
    const size_t n = text.size();
    for (size_t i = 0; i < n; ++i) {
        char c = text[i];
        if (c == '.' || c == '!' || c == '?') {
            bool at_end = i + 1 >= n;
            if (!at_end && !is_space(text[i + 1])) continue;
            if (c == '.') {
                bool digit_before = i > 0 && std::isdigit(static_cast<unsigned char>(text[i - 1]));
                bool digit_after = !at_end && i + 1 < n &&
                                   std::isdigit(static_cast<unsigned char>(text[i + 1]));
                if (digit_before && digit_after) continue;
                size_t b = i;
                while (b > 0 && std::isalpha(static_cast<unsigned char>(text[b - 1]))) --b;
                if (b < i && detail::is_abbreviation(text.substr(b, i - b))) continue;
            }
            boundaries.push_back(i + 1);
        } else if (c == '\n') {
            size_t j = i + 1;
            while (j < n && (text[j] == ' ' || text[j] == '\t' || text[j] == '\r')) ++j;
            if (j < n && text[j] == '\n') boundaries.push_back(i);
        }
    }
    boundaries.push_back(n);

    std::vector<SentenceSpan> spans;
    size_t seg_start = 0;
    for (size_t boundary : boundaries) {
        if (boundary < seg_start) continue;
        size_t b = seg_start, e = boundary;
        while (b < e && is_space(text[b])) ++b;
        while (e > b && is_space(text[e - 1])) --e;
        if (b < e) spans.push_back(SentenceSpan{note_id, spans.size(), b, e});
        seg_start = boundary;
    }
    return spans;
}

namespace detail {

inline std::string read_file(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    if (!in) throw CorpusFormatError("cannot open file: " + p.string());
    std::string data((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return data;
}

inline std::vector<GoldAnnotation> load_gold_file(const std::filesystem::path& p) {
    nlohmann::json doc = nlohmann::json::parse(read_file(p), nullptr, false);
    if (doc.is_discarded() || !doc.is_object())
        throw CorpusFormatError("malformed gold file: " + p.string());
    std::vector<GoldAnnotation> out;
    for (const auto& [note_id, arr] : doc.items()) {
        if (!arr.is_array())
            throw CorpusFormatError("gold entry for note '" + note_id +
                                    "' is not an array: " + p.string());
        GoldAnnotation ann;
        ann.note_id = note_id;
        for (const auto& item : arr) {
            if (!item.is_array() || item.size() != 3 || !item[0].is_string() ||
                !item[1].is_string() || !item[2].is_string())
                throw CorpusFormatError("gold triplet must be [sact, relation, time] strings: " +
                                        p.string());
            auto rel = relation_from_string(item[1].get<std::string>());
            if (!rel)
                throw CorpusFormatError("illegal relation '" + item[1].get<std::string>() +
                                        "' in " + p.string());
            ann.triplets.push_back(SactTriplet{item[0].get<std::string>(), *rel,
                                               item[2].get<std::string>()});
        }
        out.push_back(std::move(ann));
    }
    std::sort(out.begin(), out.end(),
              [](const GoldAnnotation& a, const GoldAnnotation& b) { return a.note_id < b.note_id; });
    return out;
}

} // namespace detail

/// Corpus layout: <root>/<patient_id>/<note_id>.txt plus an optional
/// <root>/<patient_id>/gold.json mapping note_id -> [[sact, relation, time]].
/// Records come back sorted by patient_id, notes by note_id.
inline std::vector<PatientRecord> load_corpus(const std::filesystem::path& root,
                                              CancerType cancer_type = CancerType::breast) {
    namespace fs = std::filesystem;
    if (!fs::exists(root) || !fs::is_directory(root))
        throw CorpusFormatError("corpus root is not a directory: " + root.string());

    std::vector<fs::path> patient_dirs;
    for (const auto& entry : fs::directory_iterator(root))
        if (entry.is_directory()) patient_dirs.push_back(entry.path());
    std::sort(patient_dirs.begin(), patient_dirs.end());

    std::vector<PatientRecord> records;
    for (const auto& dir : patient_dirs) {
        PatientRecord rec;
        rec.patient_id = dir.filename().string();
        rec.cancer_type = cancer_type;

        std::vector<fs::path> note_files;
        for (const auto& entry : fs::directory_iterator(dir)) {
            if (!entry.is_regular_file()) continue;
            if (entry.path().extension() == ".txt") note_files.push_back(entry.path());
        }
        std::sort(note_files.begin(), note_files.end());

        for (const auto& nf : note_files) {
            ClinicalNote note;
            note.patient_id = rec.patient_id;
            note.note_id = nf.stem().string();
            note.text = detail::read_file(nf);
            if (trim(note.text).empty())
                throw CorpusFormatError("note file is empty: " + nf.string());
            note.doctime = detect_doctime(note.text);
            rec.notes.push_back(std::move(note));
        }

        fs::path gold_path = dir / "gold.json";
        if (fs::exists(gold_path)) rec.gold = detail::load_gold_file(gold_path);

        records.push_back(std::move(rec));
    }
    return records;
}

} // namespace sact

#endif // SACT_CORPUS_HPP
