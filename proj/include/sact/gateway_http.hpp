#ifndef SACT_GATEWAY_HTTP_HPP
#define SACT_GATEWAY_HTTP_HPP

#include <cstdlib>
#include <string>

#include <httplib.h>
#include <json.hpp>

#include "sact/gateway.hpp"

namespace sact {

struct HttpEndpointConfig {
    std::string base_url;                 // e.g. http://localhost:8000
    std::string path = "/v1/chat/completions";
    std::string auth_env;                 // env var holding the bearer token, may be empty
    int timeout_seconds = 300;
};

/// Chat-completions-compatible POST backend. Connection failures and 5xx
/// responses surface as TransportError (retried by the gateway); other
/// non-2xx responses are EndpointError.
class HttpBackend : public LlmBackend {
public:
    explicit HttpBackend(HttpEndpointConfig config) : config_(std::move(config)) {}

    RawGeneration generate(const ChatRequest& request) override {
        nlohmann::json body = {
            {"model", request.model_name},
            {"messages", nlohmann::json::array({{{"role", "user"}, {"content", request.prompt_text}}})},
            {"temperature", request.sampling.temperature},
            {"top_p", request.sampling.top_p},
            {"top_k", request.sampling.top_k},
            {"min_p", request.sampling.min_p},
            {"max_tokens", request.sampling.max_tokens},
            {"chat_template_kwargs", {{"enable_thinking", request.thinking_enabled}}},
        };

        httplib::Client client(config_.base_url);
        client.set_connection_timeout(config_.timeout_seconds, 0);
        client.set_read_timeout(config_.timeout_seconds, 0);
        httplib::Headers headers;
        if (!config_.auth_env.empty()) {
            if (const char* token = std::getenv(config_.auth_env.c_str()))
                headers.emplace("Authorization", std::string("Bearer ") + token);
        }

        auto res = client.Post(config_.path, headers, body.dump(), "application/json");
        if (!res)
            throw TransportError("request to " + config_.base_url + " failed: " +
                                 httplib::to_string(res.error()));
        if (res->status >= 500)
            throw TransportError("endpoint returned " + std::to_string(res->status));
        if (res->status < 200 || res->status >= 300)
            throw EndpointError("endpoint returned " + std::to_string(res->status) + ": " +
                                res->body);

        nlohmann::json doc = nlohmann::json::parse(res->body, nullptr, false);
        if (doc.is_discarded() || !doc.contains("choices") || !doc["choices"].is_array() ||
            doc["choices"].empty())
            throw EndpointError("malformed chat-completions response");
        const auto& choice = doc["choices"][0];

        RawGeneration out;
        if (choice.contains("message") && choice["message"].contains("content") &&
            choice["message"]["content"].is_string())
            out.text = choice["message"]["content"].get<std::string>();
        std::string finish =
            choice.value("finish_reason", std::string("stop"));
        out.finish_reason = finish == "length" ? FinishReason::length
                          : finish == "stop"   ? FinishReason::stop
                                               : FinishReason::error;
        return out;
    }

    std::string name() const override { return "http:" + config_.base_url; }

private:
    HttpEndpointConfig config_;
};

} // namespace sact

#endif // SACT_GATEWAY_HTTP_HPP
