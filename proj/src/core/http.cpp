#include <httplib.h>

#include <resat/core/http.hpp>

#include <algorithm>
#include <thread>

namespace resat::http {

std::string Response::header(const std::string& lowercase_key) const
{
    auto it = headers.find(lowercase_key);
    return it == headers.end() ? std::string() : it->second;
}

RateGate::RateGate(std::chrono::milliseconds min_interval)
    : min_interval_(min_interval)
{
}

std::unique_lock<std::mutex> RateGate::acquire()
{
    std::unique_lock<std::mutex> lock(mutex_);
    auto now = std::chrono::steady_clock::now();
    auto ready = last_ + min_interval_;
    if (now < ready)
        std::this_thread::sleep_for(ready - now);
    last_ = std::chrono::steady_clock::now();
    return lock;
}

namespace {

std::string lower(std::string s)
{
    std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return s;
}

Response convert(const httplib::Result& result)
{
    if (!result)
        throw TransportError("HTTP request failed: " + httplib::to_string(result.error()));
    Response r;
    r.status = result->status;
    r.body = result->body;
    for (const auto& [k, v] : result->headers)
        r.headers[lower(k)] = v;
    return r;
}

class HttplibTransport final : public Transport {
public:
    HttplibTransport(const std::string& base_url, std::chrono::milliseconds timeout,
                     std::shared_ptr<RateGate> gate)
        : client_(base_url)
        , gate_(std::move(gate))
    {
        auto secs = std::chrono::duration_cast<std::chrono::seconds>(timeout);
        auto usecs = std::chrono::duration_cast<std::chrono::microseconds>(timeout - secs);
        client_.set_connection_timeout(secs.count(), usecs.count());
        client_.set_read_timeout(secs.count(), usecs.count());
        client_.set_follow_location(true);
    }

    Response get(const std::string& target, const Headers& headers) override
    {
        std::unique_lock<std::mutex> hold;
        if (gate_)
            hold = gate_->acquire();
        httplib::Headers h(headers.begin(), headers.end());
        return convert(client_.Get(target, h));
    }

    Response post(const std::string& target, const std::string& body, const std::string& content_type,
                  const Headers& headers) override
    {
        std::unique_lock<std::mutex> hold;
        if (gate_)
            hold = gate_->acquire();
        httplib::Headers h(headers.begin(), headers.end());
        return convert(client_.Post(target, h, body, content_type));
    }

private:
    httplib::Client client_;
    std::shared_ptr<RateGate> gate_;
};

}  // namespace

std::unique_ptr<Transport> make_http_transport(const std::string& base_url, std::chrono::milliseconds timeout,
                                               std::shared_ptr<RateGate> gate)
{
    return std::make_unique<HttplibTransport>(base_url, timeout, std::move(gate));
}

}  // namespace resat::http
