#include "lolrec/riot.hpp"

#include <cctype>
#include <thread>

#include <httplib.h>
#include <nlohmann/json.hpp>

#include "io_util.hpp"
#include "lolrec/errors.hpp"

namespace lolrec {

namespace {

class HttplibTransport final : public HttpTransport {
public:
    HttpResponse get(const std::string& base_url, const std::string& path,
                     const std::vector<std::pair<std::string, std::string>>& headers,
                     std::chrono::milliseconds timeout) override {
#ifndef CPPHTTPLIB_OPENSSL_SUPPORT
        if (base_url.starts_with("https://")) {
            throw ApiError(ApiError::Kind::config,
                           "built without TLS support; use fixture mode or an http:// base URL");
        }
#endif
        httplib::Client client(base_url);
        client.set_connection_timeout(timeout);
        client.set_read_timeout(timeout);
        httplib::Headers request_headers;
        for (const auto& [name, value] : headers) request_headers.emplace(name, value);

        const auto result = client.Get(path, request_headers);
        if (!result) {
            throw ApiError(ApiError::Kind::protocol,
                           "network error: " + httplib::to_string(result.error()));
        }
        HttpResponse response;
        response.status = result->status;
        response.body = result->body;
        if (result->has_header("Retry-After")) {
            response.retry_after = result->get_header_value("Retry-After");
        }
        return response;
    }
};

std::string url_encode(const std::string& text) {
    static constexpr char hex[] = "0123456789ABCDEF";
    std::string out;
    for (const unsigned char c : text) {
        if (std::isalnum(c) || c == '-' || c == '_' || c == '.' || c == '~') {
            out.push_back(static_cast<char>(c));
        } else {
            out.push_back('%');
            out.push_back(hex[c >> 4]);
            out.push_back(hex[c & 0xf]);
        }
    }
    return out;
}

std::vector<MasteryRecord> parse_mastery_entries(const std::string& body,
                                                 const std::string& player_id) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(body);
    } catch (const nlohmann::json::parse_error& e) {
        throw ApiError(ApiError::Kind::protocol,
                       "malformed mastery response: " + std::string(e.what()));
    }
    if (!doc.is_array()) {
        throw ApiError(ApiError::Kind::protocol, "mastery response is not an array");
    }

    std::vector<MasteryRecord> records;
    records.reserve(doc.size());
    for (const auto& entry : doc) {
        if (!entry.is_object() || !entry.contains("championId") ||
            !entry.contains("championPoints") || !entry["championId"].is_number_integer() ||
            !entry["championPoints"].is_number_integer()) {
            throw ApiError(ApiError::Kind::protocol,
                           "mastery entry missing championId/championPoints");
        }
        MasteryRecord record;
        record.player_id = player_id;
        record.champion_id = entry["championId"].get<std::int32_t>();
        record.cmp = entry["championPoints"].get<std::int64_t>();
        if (record.champion_id < 0 || record.cmp < 0) {
            throw ApiError(ApiError::Kind::protocol, "negative id or mastery points in response");
        }
        records.push_back(std::move(record));
    }
    return records;
}

}  // namespace

std::shared_ptr<HttpTransport> make_default_transport() {
    return std::make_shared<HttplibTransport>();
}

RiotClient::RiotClient(ApiConfig config, std::shared_ptr<HttpTransport> transport, Sleeper sleeper,
                       Clock clock)
    : config_(std::move(config)),
      transport_(std::move(transport)),
      sleeper_(std::move(sleeper)),
      clock_(std::move(clock)) {
    if (!sleeper_) {
        sleeper_ = [](std::chrono::milliseconds d) { std::this_thread::sleep_for(d); };
    }
    if (!clock_) {
        clock_ = [] { return std::chrono::steady_clock::now(); };
    }
    if (config_.rate_limit.max_requests < 1) {
        throw ApiError(ApiError::Kind::config, "rate limit must allow at least 1 request");
    }
}

void RiotClient::wait_for_slot() {
    std::lock_guard lock(limiter_mutex_);
    auto now = clock_();
    for (;;) {
        while (!request_times_.empty() && now - request_times_.front() >= config_.rate_limit.window) {
            request_times_.pop_front();
        }
        if (request_times_.size() < static_cast<std::size_t>(config_.rate_limit.max_requests)) {
            break;
        }
        const auto wake = request_times_.front() + config_.rate_limit.window;
        sleeper_(std::chrono::duration_cast<std::chrono::milliseconds>(wake - now));
        now = clock_();
    }
    request_times_.push_back(now);
}

HttpResponse RiotClient::request(const std::string& path) {
    if (!transport_) transport_ = make_default_transport();
    const std::vector<std::pair<std::string, std::string>> headers = {
        {"X-Riot-Token", config_.api_key}};

    for (int attempt = 0;; ++attempt) {
        wait_for_slot();
        auto response = transport_->get(config_.effective_base_url(), path, headers, config_.timeout);
        if (response.status != 429) return response;
        if (attempt >= config_.max_retries) {
            throw ApiError(ApiError::Kind::rate_limited,
                           "throttled beyond retry budget (" + std::to_string(config_.max_retries) +
                               " retries)");
        }
        auto wait = config_.backoff_base * (1LL << attempt);
        if (response.retry_after) {
            try {
                wait = std::chrono::milliseconds(1000 * std::stoll(*response.retry_after));
            } catch (const std::exception&) {
                // unparsable header, keep the exponential backoff value
            }
        }
        sleeper_(wait);
    }
}

std::vector<MasteryRecord> RiotClient::fetch_player_masteries(const std::string& summoner_name) {
    if (summoner_name.empty()) {
        throw ApiError(ApiError::Kind::config, "summoner name must be non-empty");
    }

    if (config_.mode == ApiConfig::Mode::fixture) {
        const auto path = config_.fixture_dir / (summoner_name + ".json");
        const auto content = detail::read_file(path);
        if (!content) {
            throw ApiError(ApiError::Kind::not_found,
                           "no fixture for summoner '" + summoner_name + "' (looked for '" +
                               path.string() + "')");
        }
        return parse_mastery_entries(*content, summoner_name);
    }

    if (config_.api_key.empty()) {
        throw ApiError(ApiError::Kind::config, "missing API key (set RIOT_API_KEY)");
    }

    // Resolve the summoner name to an encrypted summoner id.
    const auto lookup =
        request("/lol/summoner/v4/summoners/by-name/" + url_encode(summoner_name));
    if (lookup.status == 404) {
        throw ApiError(ApiError::Kind::not_found, "summoner '" + summoner_name + "' not found");
    }
    if (lookup.status != 200) {
        throw ApiError(ApiError::Kind::protocol,
                       "summoner lookup failed with status " + std::to_string(lookup.status));
    }
    std::string summoner_id;
    try {
        const auto doc = nlohmann::json::parse(lookup.body);
        summoner_id = doc.at("id").get<std::string>();
    } catch (const std::exception& e) {
        throw ApiError(ApiError::Kind::protocol,
                       "malformed summoner response: " + std::string(e.what()));
    }

    const auto masteries =
        request("/lol/champion-mastery/v4/champion-masteries/by-summoner/" + url_encode(summoner_id));
    if (masteries.status == 404) {
        throw ApiError(ApiError::Kind::not_found,
                       "no mastery data for summoner '" + summoner_name + "'");
    }
    if (masteries.status != 200) {
        throw ApiError(ApiError::Kind::protocol,
                       "mastery fetch failed with status " + std::to_string(masteries.status));
    }
    return parse_mastery_entries(masteries.body, summoner_name);
}

}  // namespace lolrec
