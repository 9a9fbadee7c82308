#include <resat/pipeline/predictor.hpp>

#include <resat/core/http.hpp>

#include <json.hpp>
#include <spdlog/spdlog.h>

namespace resat::pipeline {

std::string OraclePredictor::predict(SampleKind kind, const std::string&)
{
    switch (kind) {
    case SampleKind::FileLoc:
        return samplegen::format_file_answer(task_.gold.files);
    case SampleKind::FuncLoc:
        return samplegen::format_function_answer(task_.gold.functions);
    case SampleKind::LineLoc:
        return samplegen::format_line_answer(task_.gold.functions, task_.gold.lines, task_.skeletons);
    case SampleKind::CodeEdit:
        return editfmt::render_edits(task_.edit_script);
    }
    return {};
}

HttpPredictor::HttpPredictor(HttpPredictorConfig config) : config_(std::move(config))
{
    auto scheme = config_.endpoint.find("://");
    if (scheme == std::string::npos)
        throw PredictorError("endpoint must start with http:// or https://: " + config_.endpoint);
    auto slash = config_.endpoint.find('/', scheme + 3);
    base_url_ = config_.endpoint.substr(0, slash);
    target_ = slash == std::string::npos ? "/" : config_.endpoint.substr(slash);
}

std::string HttpPredictor::predict(SampleKind kind, const std::string& prompt)
{
    nlohmann::json body{{"kind", std::string(samplegen::to_string(kind))}, {"prompt", prompt}};
    const auto payload = body.dump();
    std::string last_error;
    for (int attempt = 0; attempt <= config_.max_retries; ++attempt) {
        try {
            // A fresh client per call keeps concurrent tasks independent.
            auto transport = http::make_http_transport(base_url_, config_.timeout);
            auto resp = transport->post(target_, payload, "application/json", {});
            if (resp.status >= 500) {
                last_error = "status " + std::to_string(resp.status);
                spdlog::warn("predictor {}: {} (attempt {})", config_.endpoint, last_error, attempt + 1);
                continue;
            }
            if (resp.status != 200)
                throw PredictorError("predictor returned status " + std::to_string(resp.status));
            auto j = nlohmann::json::parse(resp.body, nullptr, false);
            if (j.is_discarded() || !j.is_object() || !j.contains("text") || !j["text"].is_string())
                throw PredictorError("predictor response lacks a string \"text\" field");
            return j["text"].get<std::string>();
        } catch (const http::TransportError& e) {
            last_error = e.what();
            spdlog::warn("predictor {}: {} (attempt {})", config_.endpoint, last_error, attempt + 1);
        }
    }
    throw PredictorError("predictor failed after retries: " + last_error);
}

}  // namespace resat::pipeline
