#pragma once

#include <algorithm>
#include <chrono>
#include <mutex>
#include <thread>

namespace crashlens {

// Token bucket; acquire() blocks callers until a token refills. Serializes
// concurrent symbol fetches against one exchange.
class TokenBucket {
public:
    TokenBucket(double tokens_per_second, double capacity = 1.0)
        : rate_(tokens_per_second), capacity_(capacity), tokens_(capacity),
          last_(clock::now()) {}

    void acquire() {
        std::unique_lock lock(mu_);
        for (;;) {
            refill();
            if (tokens_ >= 1.0) {
                tokens_ -= 1.0;
                return;
            }
            const double deficit = 1.0 - tokens_;
            const auto wait = std::chrono::duration<double>(deficit / rate_);
            lock.unlock();
            std::this_thread::sleep_for(wait);
            lock.lock();
        }
    }

    double rate() const { return rate_; }

private:
    using clock = std::chrono::steady_clock;

    void refill() {
        const auto now = clock::now();
        const double elapsed = std::chrono::duration<double>(now - last_).count();
        tokens_ = std::min(capacity_, tokens_ + elapsed * rate_);
        last_ = now;
    }

    double rate_;
    double capacity_;
    double tokens_;
    clock::time_point last_;
    std::mutex mu_;
};

}  // namespace crashlens
