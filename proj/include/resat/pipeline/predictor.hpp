#pragma once

#include <resat/samplegen/samples.hpp>
#include <resat/samplegen/task.hpp>

#include <chrono>
#include <functional>
#include <memory>
#include <stdexcept>
#include <string>

namespace resat::pipeline {

using samplegen::SampleKind;

class Predictor {
public:
    virtual ~Predictor() = default;
    virtual std::string predict(SampleKind kind, const std::string& prompt) = 0;
};

/// Returns the same text for every call.
class StubPredictor : public Predictor {
public:
    explicit StubPredictor(std::string text = {}) : text_(std::move(text)) {}
    std::string predict(SampleKind, const std::string&) override { return text_; }

private:
    std::string text_;
};

/// Answers every stage from the task's gold labels and gold edit script,
/// in the same formats the training samples use.
class OraclePredictor : public Predictor {
public:
    explicit OraclePredictor(const samplegen::PreparedTask& task) : task_(task) {}
    std::string predict(SampleKind kind, const std::string& prompt) override;

private:
    const samplegen::PreparedTask& task_;
};

class PredictorError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct HttpPredictorConfig {
    /// Full URL of the endpoint, e.g. http://localhost:8000/predict
    std::string endpoint;
    std::chrono::milliseconds timeout{60000};
    int max_retries = 2;
};

/// POSTs {"kind", "prompt"} as JSON and reads {"text"} from the response.
/// Transport failures and 5xx responses are retried; anything else throws
/// PredictorError.
class HttpPredictor : public Predictor {
public:
    explicit HttpPredictor(HttpPredictorConfig config);
    std::string predict(SampleKind kind, const std::string& prompt) override;

private:
    HttpPredictorConfig config_;
    std::string base_url_;
    std::string target_;
};

/// Creates a predictor for one task; called once per task so predictors may
/// hold per-task state.
using PredictorFactory = std::function<std::unique_ptr<Predictor>(const samplegen::PreparedTask&)>;

}  // namespace resat::pipeline
