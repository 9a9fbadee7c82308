#pragma once

#include <chrono>
#include <map>
#include <memory>
#include <mutex>
#include <stdexcept>
#include <string>

namespace resat::http {

using Headers = std::map<std::string, std::string>;

struct Response {
    int status = 0;
    std::string body;
    /// Keys lowercased.
    Headers headers;

    std::string header(const std::string& lowercase_key) const;
};

class TransportError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class Transport {
public:
    virtual ~Transport() = default;
    /// `target` is a path plus query string relative to the transport's base URL.
    virtual Response get(const std::string& target, const Headers& headers) = 0;
    virtual Response post(const std::string& target, const std::string& body,
                          const std::string& content_type, const Headers& headers) = 0;
};

/// Serializes requests to one host and spaces them by at least `min_interval`.
class RateGate {
public:
    explicit RateGate(std::chrono::milliseconds min_interval = std::chrono::milliseconds(0));
    /// Blocks until the caller may issue a request; the lock is held for the
    /// whole request so concurrent callers queue up.
    std::unique_lock<std::mutex> acquire();

private:
    std::mutex mutex_;
    std::chrono::milliseconds min_interval_;
    std::chrono::steady_clock::time_point last_{};
};

/// cpp-httplib backed transport; `base_url` may be http:// or https://.
std::unique_ptr<Transport> make_http_transport(const std::string& base_url,
                                               std::chrono::milliseconds timeout,
                                               std::shared_ptr<RateGate> gate = nullptr);

}  // namespace resat::http
