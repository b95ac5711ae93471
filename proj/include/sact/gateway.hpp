#ifndef SACT_GATEWAY_HPP
#define SACT_GATEWAY_HPP

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <thread>
#include <vector>

#include <json.hpp>

#include "sact/text.hpp"
#include "sact/triplet.hpp"

namespace sact {

struct SamplingParams {
    double temperature = 0.6;
    double top_p = 0.95;
    int top_k = 20;
    double min_p = 0.0;
    int max_tokens = 4096;

    bool valid() const {
        return temperature >= 0.0 && top_p > 0.0 && top_p <= 1.0 && top_k >= 0 && max_tokens > 0;
    }
};

enum class TemplateId { extraction, tag_verification, sentence_relation };

inline const char* to_string(TemplateId t) {
    switch (t) {
        case TemplateId::extraction: return "extraction";
        case TemplateId::tag_verification: return "tag_verification";
        case TemplateId::sentence_relation: return "sentence_relation";
    }
    return "?";
}

class UnknownTemplateError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class TransportError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class EndpointError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// The three prompt templates, loaded from text assets. Each template
/// carries a {note} placeholder where the payload goes.
class PromptLibrary {
public:
    static PromptLibrary load_from_dir(const std::filesystem::path& dir) {
        PromptLibrary lib;
        lib.templates_[0] = read_template(dir / "extraction.txt");
        lib.templates_[1] = read_template(dir / "tag_verification.txt");
        lib.templates_[2] = read_template(dir / "sentence_relation.txt");
        return lib;
    }

    const std::string& raw(TemplateId id) const { return templates_[index(id)]; }

    /// Substitute the payload at the {note} placeholder. A template
    /// without the placeholder gets the payload appended.
    std::string render(TemplateId id, std::string_view payload) const {
        const std::string& tpl = templates_[index(id)];
        if (tpl.empty()) throw UnknownTemplateError(std::string("template not loaded: ") + to_string(id));
        size_t at = tpl.find("{note}");
        if (at == std::string::npos) {
            std::string out = tpl;
            out += "\n";
            out += payload;
            return out;
        }
        std::string out;
        out.reserve(tpl.size() + payload.size());
        out.append(tpl, 0, at);
        out.append(payload);
        out.append(tpl, at + 6, std::string::npos);
        return out;
    }

private:
    static size_t index(TemplateId id) { return static_cast<size_t>(id); }

    static std::string read_template(const std::filesystem::path& p) {
        std::ifstream in(p, std::ios::binary);
        if (!in) throw UnknownTemplateError("cannot open prompt template: " + p.string());
        return std::string((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    }

    std::string templates_[3];
};

inline uint64_t fnv1a_64(std::string_view s, uint64_t h = 1469598103934665603ULL) {
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    return h;
}

struct ChatRequest {
    std::string model_name;
    std::string prompt_text;
    bool thinking_enabled = false;
    SamplingParams sampling;

    // Request identity for fixture replay. The hash covers the template,
    // payload, thinking flag, and sample tag, but not sampling params, so
    // fixtures survive sampling changes. sample_tag distinguishes repeated
    // draws for the same prompt (candidate sampling).
    TemplateId template_id = TemplateId::extraction;
    std::string payload;
    std::string sample_tag;
};

inline std::string request_fingerprint(const ChatRequest& req) {
    uint64_t h = fnv1a_64(to_string(req.template_id));
    h = fnv1a_64("\x1f", h);
    h = fnv1a_64(req.payload, h);
    h = fnv1a_64("\x1f", h);
    h = fnv1a_64(req.thinking_enabled ? "think" : "plain", h);
    h = fnv1a_64("\x1f", h);
    h = fnv1a_64(req.sample_tag, h);
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

enum class FinishReason { stop, length, error };

inline const char* to_string(FinishReason r) {
    switch (r) {
        case FinishReason::stop: return "stop";
        case FinishReason::length: return "length";
        case FinishReason::error: return "error";
    }
    return "?";
}

struct GenerationResult {
    std::string answer_text;
    std::optional<std::string> thinking_text;
    FinishReason finish_reason = FinishReason::stop;
};

/// Raw model output before thinking-trace separation.
struct RawGeneration {
    std::string text;
    FinishReason finish_reason = FinishReason::stop;
};

class LlmBackend {
public:
    virtual ~LlmBackend() = default;
    virtual RawGeneration generate(const ChatRequest& request) = 0;
    virtual std::string name() const = 0;
};

/// Deterministic replay backend: canned responses live in a directory of
/// <request-fingerprint>.txt files.
class MockBackend : public LlmBackend {
public:
    explicit MockBackend(std::filesystem::path fixtures_dir)
        : dir_(std::move(fixtures_dir)) {}

    RawGeneration generate(const ChatRequest& request) override {
        std::filesystem::path p = dir_ / (request_fingerprint(request) + ".txt");
        std::ifstream in(p, std::ios::binary);
        if (!in)
            throw EndpointError("no mock fixture " + p.string() + " (template " +
                                to_string(request.template_id) + ")");
        std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
        return RawGeneration{std::move(text), FinishReason::stop};
    }

    std::string name() const override { return "mock"; }

private:
    std::filesystem::path dir_;
};

struct GatewayOptions {
    std::string think_open = "<think>";
    std::string think_close = "</think>";
    int max_attempts = 3;
    int backoff_base_ms = 200;
    int backoff_factor = 2;
};

/// Shared service object in front of a backend: retries transient
/// transport failures with exponential backoff and separates thinking
/// traces from answers. Calls are independent and thread-safe as long as
/// the backend is.
class LlmGateway {
public:
    explicit LlmGateway(std::unique_ptr<LlmBackend> backend, GatewayOptions opts = {})
        : backend_(std::move(backend)), opts_(std::move(opts)) {}

    GenerationResult complete(const ChatRequest& request) const {
        RawGeneration raw = generate_with_retries(request);
        GenerationResult result;
        result.finish_reason = raw.finish_reason;
        if (request.thinking_enabled) {
            size_t open = raw.text.find(opts_.think_open);
            if (open != std::string::npos) {
                size_t body = open + opts_.think_open.size();
                size_t close = raw.text.find(opts_.think_close, body);
                if (close != std::string::npos) {
                    result.thinking_text = raw.text.substr(body, close - body);
                    result.answer_text = trim(raw.text.substr(0, open) +
                                              raw.text.substr(close + opts_.think_close.size()));
                } else {
                    // Unterminated trace (usually truncation): everything
                    // after the marker is thinking, no answer.
                    result.thinking_text = raw.text.substr(body);
                    result.answer_text = trim(raw.text.substr(0, open));
                }
                return result;
            }
        }
        result.answer_text = trim(raw.text);
        return result;
    }

    std::string backend_name() const { return backend_ ? backend_->name() : "none"; }

private:
    RawGeneration generate_with_retries(const ChatRequest& request) const {
        int delay_ms = opts_.backoff_base_ms;
        for (int attempt = 1;; ++attempt) {
            try {
                return backend_->generate(request);
            } catch (const TransportError&) {
                if (attempt >= opts_.max_attempts) throw;
                if (delay_ms > 0)
                    std::this_thread::sleep_for(std::chrono::milliseconds(delay_ms));
                delay_ms *= opts_.backoff_factor;
            }
        }
    }

    std::unique_ptr<LlmBackend> backend_;
    GatewayOptions opts_;
};

struct ParsedTriplets {
    std::vector<SactTriplet> triplets;
    size_t dropped = 0; // elements failing field checks
};

namespace detail {

/// Extent of a balanced bracket/brace region starting at `start`
/// (string-literal aware); npos if unbalanced.
inline size_t balanced_extent(std::string_view text, size_t start) {
    int depth = 0;
    bool in_string = false, escaped = false;
    for (size_t i = start; i < text.size(); ++i) {
        char c = text[i];
        if (in_string) {
            if (escaped) escaped = false;
            else if (c == '\\') escaped = true;
            else if (c == '"') in_string = false;
            continue;
        }
        if (c == '"') in_string = true;
        else if (c == '[' || c == '{') ++depth;
        else if (c == ']' || c == '}') {
            --depth;
            if (depth == 0) return i + 1;
            if (depth < 0) return std::string_view::npos;
        }
    }
    return std::string_view::npos;
}

inline void convert_element(const nlohmann::json& el, ParsedTriplets& out) {
    std::string sact, rel_str, time;
    if (el.is_object()) {
        if (!el.contains("SACT") || !el.contains("relation") || !el.contains("time") ||
            !el["SACT"].is_string() || !el["relation"].is_string() || !el["time"].is_string()) {
            ++out.dropped;
            return;
        }
        sact = el["SACT"].get<std::string>();
        rel_str = el["relation"].get<std::string>();
        time = el["time"].get<std::string>();
    } else if (el.is_array() && el.size() == 3 && el[0].is_string() && el[1].is_string() &&
               el[2].is_string()) {
        sact = el[0].get<std::string>();
        rel_str = el[1].get<std::string>();
        time = el[2].get<std::string>();
    } else {
        ++out.dropped;
        return;
    }
    auto rel = relation_from_string(rel_str);
    if (!rel || trim(sact).empty() || trim(time).empty()) {
        ++out.dropped;
        return;
    }
    out.triplets.push_back(SactTriplet{std::move(sact), *rel, std::move(time)});
}

} // namespace detail

/// Pull the first well-formed triplet array out of free-form model text.
/// Tolerates surrounding prose and code fences. Accepts two element
/// shapes: objects with "SACT"/"relation"/"time" string fields, and
/// positional [sact, relation, time] string triples. A brace-wrapped list
/// of triples ({[...], [...]}) is accepted as well. Elements failing the
/// field checks are dropped and counted. Returns nullopt when no
/// well-formed array exists anywhere in the text.
inline std::optional<ParsedTriplets> parse_triplet_array(std::string_view text) {
    constexpr size_t kMaxCandidates = 512;
    size_t candidates = 0;
    for (size_t i = 0; i < text.size() && candidates < kMaxCandidates; ++i) {
        char c = text[i];
        if (c != '[' && c != '{') continue;
        ++candidates;
        size_t end = detail::balanced_extent(text, i);
        if (end == std::string_view::npos) continue;
        std::string candidate(text.substr(i, end - i));
        if (c == '{') {
            // Brace-delimited triple list: swap the outer braces for
            // brackets; only accept if every element is an array, so real
            // JSON objects never masquerade as triplet lists.
            candidate.front() = '[';
            candidate.back() = ']';
            nlohmann::json doc = nlohmann::json::parse(candidate, nullptr, false);
            if (doc.is_discarded() || !doc.is_array() || doc.empty()) continue;
            bool all_arrays = true;
            for (const auto& el : doc)
                if (!el.is_array()) { all_arrays = false; break; }
            if (!all_arrays) continue;
            ParsedTriplets out;
            for (const auto& el : doc) detail::convert_element(el, out);
            return out;
        }
        nlohmann::json doc = nlohmann::json::parse(candidate, nullptr, false);
        if (doc.is_discarded() || !doc.is_array()) continue;
        ParsedTriplets out;
        for (const auto& el : doc) detail::convert_element(el, out);
        return out;
    }
    return std::nullopt;
}

/// Serialize triplets to the schema the extraction prompt asks for:
/// a JSON array of {"SACT","relation","time"} objects, keys in that order.
inline std::string serialize_triplets(const std::vector<SactTriplet>& triplets) {
    nlohmann::ordered_json arr = nlohmann::ordered_json::array();
    for (const auto& t : triplets) {
        nlohmann::ordered_json obj;
        obj["SACT"] = t.sact;
        obj["relation"] = to_string(t.relation);
        obj["time"] = t.time_raw;
        arr.push_back(std::move(obj));
    }
    return arr.dump();
}

} // namespace sact

#endif // SACT_GATEWAY_HPP
