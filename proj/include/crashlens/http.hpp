#pragma once

#include <chrono>
#include <cstdlib>
#include <memory>
#include <string>
#include <thread>

#ifndef CPPHTTPLIB_OPENSSL_SUPPORT
#define CPPHTTPLIB_OPENSSL_SUPPORT
#endif
#include <httplib.h>

// glibc resolv.h (dragged in by httplib) leaks a `_res` macro that breaks
// Eigen headers included afterwards
#ifdef _res
#undef _res
#endif

#include "crashlens/errors.hpp"
#include "crashlens/ratelimit.hpp"

namespace crashlens {

struct RetryPolicy {
    int max_attempts = 5;
    std::chrono::milliseconds base_delay{500};
    std::chrono::milliseconds max_delay{8000};
};

// GET client with token-bucket rate limiting and bounded exponential backoff.
// Honors the HTTP_PROXY / HTTPS_PROXY environment variables.
class HttpClient {
public:
    HttpClient(std::string base_url, double requests_per_second,
               RetryPolicy retry = {})
        : base_url_(std::move(base_url)), bucket_(requests_per_second),
          retry_(retry) {
        client_ = std::make_unique<httplib::Client>(base_url_);
        client_->set_connection_timeout(10, 0);
        client_->set_read_timeout(30, 0);
        apply_proxy_env();
    }

    std::string get(const std::string& path) {
        std::string last_error;
        for (int attempt = 0; attempt < retry_.max_attempts; ++attempt) {
            if (attempt > 0) backoff(attempt);
            bucket_.acquire();
            auto res = client_->Get(path);
            if (!res) {
                last_error = "transport error: " + httplib::to_string(res.error());
                continue;
            }
            if (res->status >= 500 || res->status == 429) {
                last_error = "HTTP " + std::to_string(res->status);
                continue;
            }
            if (res->status >= 400)
                throw NetworkError("HTTP " + std::to_string(res->status) + " for " +
                                   base_url_ + path + ": " + res->body);
            return res->body;
        }
        throw NetworkError("request failed after " +
                           std::to_string(retry_.max_attempts) + " attempts (" +
                           last_error + "): " + base_url_ + path);
    }

    const std::string& base_url() const { return base_url_; }

private:
    void backoff(int attempt) const {
        auto delay = retry_.base_delay * (1LL << (attempt - 1));
        if (delay > retry_.max_delay) delay = retry_.max_delay;
        std::this_thread::sleep_for(delay);
    }

    void apply_proxy_env() {
        const char* proxy = std::getenv("HTTPS_PROXY");
        if (!proxy) proxy = std::getenv("HTTP_PROXY");
        if (!proxy) return;
        std::string p = proxy;
        const auto scheme = p.find("://");
        if (scheme != std::string::npos) p = p.substr(scheme + 3);
        const auto colon = p.rfind(':');
        if (colon == std::string::npos) return;
        const std::string host = p.substr(0, colon);
        const int port = std::atoi(p.c_str() + colon + 1);
        if (!host.empty() && port > 0) client_->set_proxy(host, port);
    }

    std::string base_url_;
    std::unique_ptr<httplib::Client> client_;
    TokenBucket bucket_;
    RetryPolicy retry_;
};

}  // namespace crashlens
