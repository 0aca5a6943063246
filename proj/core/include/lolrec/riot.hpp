#ifndef LOLREC_RIOT_HPP
#define LOLREC_RIOT_HPP

#include <chrono>
#include <deque>
#include <filesystem>
#include <functional>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "lolrec/ratings.hpp"

namespace lolrec {

struct HttpResponse {
    int status = 0;
    std::string body;
    std::optional<std::string> retry_after;  // seconds, from throttle responses
};

// Minimal GET transport so tests can script responses and fixture mode can
// prove no network activity happens.
class HttpTransport {
public:
    virtual ~HttpTransport() = default;
    virtual HttpResponse get(const std::string& base_url, const std::string& path,
                             const std::vector<std::pair<std::string, std::string>>& headers,
                             std::chrono::milliseconds timeout) = 0;
};

// httplib-backed transport used in live mode.
std::shared_ptr<HttpTransport> make_default_transport();

// Client-side token bucket: at most max_requests per rolling window.
struct RateLimit {
    int max_requests = 20;
    std::chrono::milliseconds window{1000};
};

struct ApiConfig {
    enum class Mode { live, fixture };

    Mode mode = Mode::fixture;
    std::string region = "na1";
    std::string base_url;               // default https://<region>.api.riotgames.com
    std::string api_key;                // live mode only; read from RIOT_API_KEY
    std::filesystem::path fixture_dir;  // fixture mode: <dir>/<summoner>.json
    RateLimit rate_limit;
    std::chrono::milliseconds timeout{5000};
    int max_retries = 3;  // throttle retry budget
    std::chrono::milliseconds backoff_base{500};

    std::string effective_base_url() const {
        return base_url.empty() ? "https://" + region + ".api.riotgames.com" : base_url;
    }
};

// Mastery ingestion client. In fixture mode it reads
// <fixture_dir>/<summoner>.json, a JSON array in the champion-mastery wire
// format, and performs no network activity at all. In live mode it resolves
// the summoner name, then fetches all champion-mastery entries, sending the
// key via the X-Riot-Token header. Throttle responses are retried with
// bounded exponential backoff (honoring Retry-After when present).
//
// The client may be shared across threads; the rate limiter is the single
// synchronization point.
class RiotClient {
public:
    using Sleeper = std::function<void(std::chrono::milliseconds)>;
    using Clock = std::function<std::chrono::steady_clock::time_point()>;

    explicit RiotClient(ApiConfig config, std::shared_ptr<HttpTransport> transport = nullptr,
                        Sleeper sleeper = {}, Clock clock = {});

    std::vector<MasteryRecord> fetch_player_masteries(const std::string& summoner_name);

private:
    HttpResponse request(const std::string& path);
    void wait_for_slot();

    ApiConfig config_;
    std::shared_ptr<HttpTransport> transport_;
    Sleeper sleeper_;
    Clock clock_;
    std::mutex limiter_mutex_;
    std::deque<std::chrono::steady_clock::time_point> request_times_;
};

}  // namespace lolrec

#endif  // LOLREC_RIOT_HPP
