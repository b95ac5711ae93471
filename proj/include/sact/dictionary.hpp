#ifndef SACT_DICTIONARY_HPP
#define SACT_DICTIONARY_HPP

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <map>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "sact/corpus.hpp"
#include "sact/text.hpp"

namespace sact {

/// Where a term list came from. The two-letter filter applies only to the
/// regimen-abbreviation source; short curated terms (e.g. "ac", "tc")
/// survive on purpose.
enum class TermSource { regimen_abbreviations, generic, curated };

struct TermList {
    TermSource source = TermSource::curated;
    std::vector<std::string> terms;
};

namespace detail {

/// Byte trie over lowercased terms; supports longest-match lookup from a
/// fixed start position.
class TermTrie {
public:
    void insert(std::string_view term) {
        size_t node = 0;
        if (nodes_.empty()) nodes_.emplace_back();
        for (char c : term) {
            auto& children = nodes_[node].children;
            auto it = children.find(c);
            if (it == children.end()) {
                nodes_.emplace_back();
                it = nodes_[node].children.emplace(c, nodes_.size() - 1).first;
            }
            node = it->second;
        }
        nodes_[node].terminal = true;
    }

    /// Longest term matching lowered[pos..] whose end lands on a token
    /// boundary. Returns the match length, 0 if none.
    size_t longest_match(std::string_view lowered, size_t pos) const {
        if (nodes_.empty()) return 0;
        size_t node = 0, best = 0;
        for (size_t i = pos; i < lowered.size(); ++i) {
            auto it = nodes_[node].children.find(lowered[i]);
            if (it == nodes_[node].children.end()) break;
            node = it->second;
            if (nodes_[node].terminal) {
                size_t end = i + 1;
                if (end == lowered.size() || !is_alnum(lowered[end])) best = end - pos;
            }
        }
        return best;
    }

private:
    struct Node {
        std::map<char, size_t> children;
        bool terminal = false;
    };
    std::vector<Node> nodes_;
};

} // namespace detail

/// Immutable per-cancer-type SACT term dictionary.
class SactDictionary {
public:
    SactDictionary(CancerType type, std::set<std::string> terms)
        : cancer_type_(type), terms_(std::move(terms)) {
        for (const auto& t : terms_) trie_.insert(t);
    }

    CancerType cancer_type() const { return cancer_type_; }
    const std::set<std::string>& terms() const { return terms_; }
    bool contains(std::string_view term) const {
        return terms_.count(canonicalize(term)) > 0;
    }
    size_t longest_match(std::string_view lowered_text, size_t pos) const {
        return trie_.longest_match(lowered_text, pos);
    }

private:
    CancerType cancer_type_;
    std::set<std::string> terms_;
    detail::TermTrie trie_;
};

/// Merge term lists into a dictionary: lowercase, collapse whitespace,
/// de-duplicate, and drop pure-alphabetic terms of length <= 2 coming from
/// the regimen-abbreviation source (the "AT"-class false-positive filter).
inline SactDictionary build_dictionary(CancerType cancer_type,
                                       const std::vector<TermList>& raw_term_lists) {
    std::set<std::string> merged;
    for (const auto& list : raw_term_lists) {
        for (const auto& raw : list.terms) {
            std::string term = canonicalize(raw);
            if (term.empty()) continue;
            if (list.source == TermSource::regimen_abbreviations && term.size() <= 2 &&
                std::all_of(term.begin(), term.end(), [](char c) {
                    return std::isalpha(static_cast<unsigned char>(c)) != 0;
                }))
                continue;
            merged.insert(std::move(term));
        }
    }
    return SactDictionary(cancer_type, std::move(merged));
}

/// One term per line, UTF-8, '#' comments and blank lines ignored.
inline std::vector<std::string> load_term_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw CorpusFormatError("cannot open dictionary file: " + path.string());
    std::vector<std::string> terms;
    std::string line;
    while (std::getline(in, line)) {
        std::string t = trim(line);
        if (t.empty() || t[0] == '#') continue;
        terms.push_back(std::move(t));
    }
    return terms;
}

/// Shipped dictionary files are already filtered; load them as curated.
inline SactDictionary load_shipped_dictionary(const std::filesystem::path& path,
                                              CancerType cancer_type) {
    return build_dictionary(cancer_type, {{TermSource::curated, load_term_file(path)}});
}

struct TermMatch {
    std::string term; // dictionary (lowercased) form
    size_t offset = 0;
    size_t length = 0;
};

struct TaggedSentence {
    SentenceSpan sentence_span;
    std::string tagged_text; // sentence text with <e>...</e> around matches
    std::vector<TermMatch> match_terms;

    bool has_matches() const { return !match_terms.empty(); }
    std::string untagged_text() const { return strip_entity_tags(tagged_text); }
};

/// Case-insensitive longest-match-wins scan at token boundaries
/// (a boundary is any non-alphanumeric character or the text edge).
/// Matches found inside an accepted match are suppressed.
inline TaggedSentence tag_matches(const std::string& sentence_text, const SactDictionary& dict,
                                  const SentenceSpan& span = {}) {
    TaggedSentence out;
    out.sentence_span = span;
    if (out.sentence_span.end == 0) out.sentence_span.end = sentence_text.size();

    const std::string lowered = to_lower(sentence_text);
    std::string tagged;
    tagged.reserve(sentence_text.size() + 16);
    size_t pos = 0;
    while (pos < lowered.size()) {
        bool boundary = pos == 0 || !is_alnum(lowered[pos - 1]);
        if (boundary) {
            size_t len = dict.longest_match(lowered, pos);
            if (len > 0) {
                tagged += "<e>";
                tagged.append(sentence_text, pos, len);
                tagged += "</e>";
                out.match_terms.push_back(TermMatch{lowered.substr(pos, len), pos, len});
                pos += len;
                continue;
            }
        }
        tagged.push_back(sentence_text[pos]);
        ++pos;
    }
    out.tagged_text = std::move(tagged);
    return out;
}

/// Anchor sentence plus its neighbors, clipped at note boundaries.
struct ContextWindow {
    size_t anchor_index = 0;
    std::string before;        // empty when the anchor is the first sentence
    std::string anchor_tagged; // tagged text of the anchor sentence
    std::string after;         // empty when the anchor is the last sentence
};

/// One window per sentence with at least one match, ordered by anchor index.
inline std::vector<ContextWindow> select_candidate_windows(
    const ClinicalNote& note, const std::vector<TaggedSentence>& tagged) {
    std::vector<SentenceSpan> spans = split_sentences(note.text, note.note_id);
    auto sentence_text = [&](size_t idx) {
        return note.text.substr(spans[idx].start, spans[idx].end - spans[idx].start);
    };

    std::vector<const TaggedSentence*> ordered;
    for (const auto& t : tagged)
        if (t.has_matches()) ordered.push_back(&t);
    std::sort(ordered.begin(), ordered.end(), [](const TaggedSentence* a, const TaggedSentence* b) {
        return a->sentence_span.index < b->sentence_span.index;
    });

    std::vector<ContextWindow> windows;
    for (const TaggedSentence* t : ordered) {
        size_t idx = t->sentence_span.index;
        if (idx >= spans.size()) continue;
        ContextWindow w;
        w.anchor_index = idx;
        w.anchor_tagged = t->tagged_text;
        if (idx > 0) w.before = sentence_text(idx - 1);
        if (idx + 1 < spans.size()) w.after = sentence_text(idx + 1);
        windows.push_back(std::move(w));
    }
    return windows;
}

} // namespace sact

#endif // SACT_DICTIONARY_HPP
