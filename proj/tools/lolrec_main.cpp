// lolrec CLI: ingest mastery data, train and query the recommender, and run
// the offline evaluation suite. Every command honors --seed, --out and
// --format uniformly; with the same inputs and seed the primary output is
// byte-identical across runs.

#include <algorithm>
#include <charconv>
#include <cstdlib>
#include <ctime>
#include <filesystem>
#include <iostream>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "lolrec/data.hpp"
#include "lolrec/errors.hpp"
#include "lolrec/eval.hpp"
#include "lolrec/recommend.hpp"
#include "lolrec/riot.hpp"
#include "lolrec/rng.hpp"
#include "lolrec/slope_one.hpp"
#include "lolrec/svd.hpp"

namespace {

using nlohmann::ordered_json;

std::string format_double(double value) {
    char buffer[64];
    const auto result = std::to_chars(buffer, buffer + sizeof(buffer), value);
    return std::string(buffer, result.ptr);
}

void emit(const std::optional<std::filesystem::path>& out, const std::string& body) {
    if (out) {
        lolrec::write_text_file(*out, body);
    } else {
        std::cout << body;
    }
}

std::string now_utc_iso8601() {
    const std::time_t now = std::time(nullptr);
    std::tm utc{};
    gmtime_r(&now, &utc);
    char buffer[32];
    std::strftime(buffer, sizeof(buffer), "%Y-%m-%dT%H:%M:%SZ", &utc);
    return buffer;
}

// ---------------------------------------------------------------------------
// Shared option blocks

struct HyperOptions {
    std::string preset;
    int factors = 100;
    int epochs = 20;
    double lambda = 0.005;
    double gamma = 0.02;
    double init_std = 0.1;
    double fold_in_lambda = 0.0;
    std::uint64_t seed = 0;
};

void add_hyper_options(CLI::App* cmd, HyperOptions& opts) {
    cmd->add_option("--preset", opts.preset, "Hyperparameter preset")
        ->check(CLI::IsMember({"paper-default", "paper-tuned"}));
    cmd->add_option("--factors", opts.factors, "Latent dimensionality f");
    cmd->add_option("--epochs", opts.epochs, "Training epochs");
    cmd->add_option("--lambda", opts.lambda, "Regularization weight");
    cmd->add_option("--gamma", opts.gamma, "Learning rate");
    cmd->add_option("--init-std", opts.init_std, "Factor initialization spread");
    cmd->add_option("--fold-in-lambda", opts.fold_in_lambda,
                    "Fold-in regularization (defaults to --lambda)");
    cmd->add_option("--seed", opts.seed, "Random seed");
}

lolrec::Hyperparams resolve_hyperparams(const CLI::App* cmd, const HyperOptions& opts) {
    lolrec::Hyperparams h;
    if (opts.preset == "paper-default") {
        h = lolrec::Hyperparams::paper_default();
    } else if (opts.preset == "paper-tuned") {
        h = lolrec::Hyperparams::paper_tuned();
    }
    if (cmd->count("--factors")) h.factors = opts.factors;
    if (cmd->count("--epochs")) h.epochs = opts.epochs;
    if (cmd->count("--lambda")) h.lambda = opts.lambda;
    if (cmd->count("--gamma")) h.gamma = opts.gamma;
    if (cmd->count("--init-std")) h.init_std = opts.init_std;
    if (cmd->count("--fold-in-lambda")) h.fold_in_lambda = opts.fold_in_lambda;
    h.seed = opts.seed;
    h.validate();
    return h;
}

struct ApiOptions {
    std::filesystem::path fixtures;
    bool live = false;
    std::string region = "na1";
    std::string base_url;
    int rate_limit = 20;
    int rate_window_ms = 1000;
    int timeout_ms = 5000;
    int max_retries = 3;
};

void add_api_options(CLI::App* cmd, ApiOptions& opts) {
    cmd->add_option("--fixtures", opts.fixtures, "Directory of <summoner>.json fixtures");
    cmd->add_flag("--live", opts.live, "Query the live API (needs RIOT_API_KEY)");
    cmd->add_option("--region", opts.region, "Platform routing value, e.g. na1");
    cmd->add_option("--base-url", opts.base_url, "Override the API base URL");
    cmd->add_option("--rate-limit", opts.rate_limit, "Max requests per window");
    cmd->add_option("--rate-window-ms", opts.rate_window_ms, "Rate-limit window in ms");
    cmd->add_option("--timeout-ms", opts.timeout_ms, "Request timeout in ms");
    cmd->add_option("--max-retries", opts.max_retries, "Throttle retry budget");
}

lolrec::ApiConfig resolve_api_config(const ApiOptions& opts) {
    lolrec::ApiConfig config;
    if (opts.live) {
        config.mode = lolrec::ApiConfig::Mode::live;
        const char* key = std::getenv("RIOT_API_KEY");
        config.api_key = key ? key : "";
    } else {
        if (opts.fixtures.empty()) {
            throw lolrec::DataError("either --fixtures <dir> or --live is required");
        }
        config.mode = lolrec::ApiConfig::Mode::fixture;
        config.fixture_dir = opts.fixtures;
    }
    config.region = opts.region;
    config.base_url = opts.base_url;
    config.rate_limit.max_requests = opts.rate_limit;
    config.rate_limit.window = std::chrono::milliseconds(opts.rate_window_ms);
    config.timeout = std::chrono::milliseconds(opts.timeout_ms);
    config.max_retries = opts.max_retries;
    return config;
}

// ---------------------------------------------------------------------------
// fetch

void setup_fetch(CLI::App& app) {
    auto* cmd = app.add_subcommand("fetch", "Fetch a player's champion masteries to CSV");
    struct Options {
        std::string summoner;
        ApiOptions api;
        std::optional<std::filesystem::path> out;
    };
    auto opts = std::make_shared<Options>();
    cmd->add_option("--summoner", opts->summoner, "Summoner name")->required();
    add_api_options(cmd, opts->api);
    cmd->add_option("--out", opts->out, "Output CSV path (default: stdout)");

    cmd->callback([opts] {
        lolrec::RiotClient client(resolve_api_config(opts->api));
        const auto records = client.fetch_player_masteries(opts->summoner);
        if (opts->out) {
            lolrec::save_csv(records, *opts->out);
            std::cerr << "fetched " << records.size() << " mastery rows for '" << opts->summoner
                      << "'\n";
        } else {
            std::cout << lolrec::records_to_csv(records);
        }
    });
}

// ---------------------------------------------------------------------------
// synth

void setup_synth(CLI::App& app) {
    auto* cmd = app.add_subcommand("synth", "Generate a synthetic mastery dataset");
    struct Options {
        std::size_t users = 0;
        int items = 0;
        int archetypes = 1;
        int hot_items = 0;
        double hot_boost = 10.0;
        double intensity = 30.0;
        double activity_mu = 0.0;
        double activity_sigma = 0.5;
        std::uint64_t seed = 0;
        std::optional<std::filesystem::path> out;
    };
    auto opts = std::make_shared<Options>();
    cmd->add_option("--users", opts->users, "Number of players")->required();
    cmd->add_option("--items", opts->items, "Number of champions")->required();
    cmd->add_option("--archetypes", opts->archetypes, "Number of disjoint taste groups");
    cmd->add_option("--hot-items", opts->hot_items,
                    "Leading champions shared by every archetype");
    cmd->add_option("--hot-boost", opts->hot_boost, "Intensity multiplier for hot champions");
    cmd->add_option("--intensity", opts->intensity, "Base expected play volume per champion");
    cmd->add_option("--activity-mu", opts->activity_mu, "Log-normal activity location");
    cmd->add_option("--activity-sigma", opts->activity_sigma, "Log-normal activity scale");
    cmd->add_option("--seed", opts->seed, "Random seed");
    cmd->add_option("--out", opts->out, "Output CSV path (default: stdout)");

    cmd->callback([opts] {
        if (opts->items < 1) throw lolrec::DataError("--items must be >= 1");
        if (opts->archetypes < 1) throw lolrec::DataError("--archetypes must be >= 1");
        if (opts->hot_items < 0 || opts->hot_items > opts->items) {
            throw lolrec::DataError("--hot-items must lie in [0, --items]");
        }
        const int exclusive = opts->items - opts->hot_items;
        if (exclusive < opts->archetypes && !(exclusive == 0 && opts->archetypes == 1)) {
            throw lolrec::DataError("not enough non-hot champions to give every archetype one");
        }

        lolrec::SynthConfig config;
        config.n_users = opts->users;
        config.activity_mu = opts->activity_mu;
        config.activity_sigma = opts->activity_sigma;
        config.seed = opts->seed;

        std::vector<std::int32_t> hot_ids;
        for (int id = 1; id <= opts->hot_items; ++id) hot_ids.push_back(id);
        const int base = opts->archetypes > 0 ? exclusive / opts->archetypes : 0;
        const int extra = opts->archetypes > 0 ? exclusive % opts->archetypes : 0;
        std::int32_t next_id = opts->hot_items + 1;
        for (int a = 0; a < opts->archetypes; ++a) {
            lolrec::Archetype archetype;
            for (const auto id : hot_ids) {
                archetype.pool.push_back(id);
                archetype.intensity.push_back(opts->intensity * opts->hot_boost);
            }
            const int take = base + (a < extra ? 1 : 0);
            for (int i = 0; i < take; ++i) {
                archetype.pool.push_back(next_id++);
                archetype.intensity.push_back(opts->intensity);
            }
            config.archetypes.push_back(std::move(archetype));
        }

        const auto records = lolrec::generate_synthetic(config);
        if (opts->out) {
            lolrec::save_csv(records, *opts->out);
        } else {
            std::cout << lolrec::records_to_csv(records);
        }
        std::cerr << "synth: " << opts->users << " users, " << opts->items << " champions, "
                  << records.size() << " rows\n";
    });
}

// ---------------------------------------------------------------------------
// train

void setup_train(CLI::App& app) {
    auto* cmd = app.add_subcommand("train", "Train the latent-factor model");
    struct Options {
        std::filesystem::path data;
        HyperOptions hyper;
        std::filesystem::path out;
        std::optional<std::filesystem::path> trace;
        std::string format = "text";
    };
    auto opts = std::make_shared<Options>();
    cmd->add_option("--data", opts->data, "Training CSV")->required();
    add_hyper_options(cmd, opts->hyper);
    cmd->add_option("--out", opts->out, "Model output path")->required();
    cmd->add_option("--trace", opts->trace, "Per-epoch objective CSV path");
    cmd->add_option("--format", opts->format, "Stdout trace format")
        ->check(CLI::IsMember({"text", "json", "csv"}));

    cmd->callback([opts, cmd] {
        const auto h = resolve_hyperparams(cmd, opts->hyper);
        const auto dataset = lolrec::build_training_set(lolrec::load_csv(opts->data));
        const auto stats = lolrec::dataset_stats(dataset);
        std::cerr << "dataset: " << stats.n_users << " users, " << stats.n_items << " champions, "
                  << stats.n_rows << " rows (" << stats.mean_rows_per_user << " rows/user)\n";

        const auto result = lolrec::train(dataset, h);
        lolrec::save_model(result.model, opts->out);

        std::string trace_csv = "epoch,objective\n";
        for (std::size_t i = 0; i < result.objective_trace.size(); ++i) {
            trace_csv += std::to_string(i + 1) + "," + format_double(result.objective_trace[i]) + "\n";
        }
        if (opts->trace) lolrec::write_text_file(*opts->trace, trace_csv);

        if (opts->format == "json") {
            ordered_json doc;
            doc["objective_trace"] = result.objective_trace;
            std::cout << doc.dump(2) << "\n";
        } else if (opts->format == "csv") {
            std::cout << trace_csv;
        } else {
            for (std::size_t i = 0; i < result.objective_trace.size(); ++i) {
                std::cout << "epoch " << i + 1 << ": objective "
                          << format_double(result.objective_trace[i]) << "\n";
            }
        }
    });
}

// ---------------------------------------------------------------------------
// recommend

void setup_recommend(CLI::App& app) {
    auto* cmd = app.add_subcommand("recommend", "Recommend champions for a player");
    struct Options {
        std::filesystem::path model;
        std::string summoner;
        ApiOptions api;
        std::optional<std::filesystem::path> input;
        std::string player;
        int k = 5;
        std::optional<std::filesystem::path> catalog;
        std::string timestamp = "1970-01-01T00:00:00Z";
        std::string format = "text";
        std::optional<std::filesystem::path> out;
    };
    auto opts = std::make_shared<Options>();
    cmd->add_option("--model", opts->model, "Trained model file")->required();
    cmd->add_option("--summoner", opts->summoner, "Summoner to fetch (fixture or live)");
    add_api_options(cmd, opts->api);
    cmd->add_option("--input", opts->input, "Mastery CSV instead of fetching");
    cmd->add_option("--player", opts->player, "Player id to select from --input");
    cmd->add_option("-k,--top", opts->k, "Number of recommendations");
    cmd->add_option("--catalog", opts->catalog, "Champion catalog CSV for display names");
    cmd->add_option("--timestamp", opts->timestamp,
                    "generated_at value; 'now' uses the wall clock");
    cmd->add_option("--format", opts->format, "Output format")
        ->check(CLI::IsMember({"text", "json"}));
    cmd->add_option("--out", opts->out, "Output path (default: stdout)");

    cmd->callback([opts] {
        std::vector<lolrec::MasteryRecord> records;
        if (!opts->summoner.empty()) {
            lolrec::RiotClient client(resolve_api_config(opts->api));
            records = client.fetch_player_masteries(opts->summoner);
        } else if (opts->input) {
            auto all = lolrec::load_csv(*opts->input);
            if (!opts->player.empty()) {
                for (auto& record : all) {
                    if (record.player_id == opts->player) records.push_back(std::move(record));
                }
                if (records.empty()) {
                    throw lolrec::DataError("player '" + opts->player + "' not present in '" +
                                            opts->input->string() + "'");
                }
            } else {
                for (const auto& record : all) {
                    if (record.player_id != all.front().player_id) {
                        throw lolrec::DataError(
                            "input file holds several players; select one with --player");
                    }
                }
                records = std::move(all);
            }
        } else {
            throw lolrec::DataError("either --summoner or --input is required");
        }

        const auto model = lolrec::load_model(opts->model);
        const auto list = lolrec::recommend(model, records, opts->k);

        lolrec::ChampionCatalog catalog;
        if (opts->catalog) catalog = lolrec::load_catalog(*opts->catalog);
        const auto timestamp = opts->timestamp == "now" ? now_utc_iso8601() : opts->timestamp;
        const auto format = opts->format == "json" ? lolrec::DocumentFormat::json
                                                   : lolrec::DocumentFormat::text;
        const auto rendered = lolrec::format_recommendations(list, catalog, format, timestamp);
        if (opts->catalog) {
            for (const auto& warning : rendered.warnings) std::cerr << "warning: " << warning << "\n";
        }
        emit(opts->out, rendered.body);
    });
}

// ---------------------------------------------------------------------------
// cv

void setup_cv(CLI::App& app) {
    auto* cmd = app.add_subcommand("cv", "K-fold cross-validated RMSE");
    struct Options {
        std::filesystem::path data;
        int folds = 5;
        HyperOptions hyper;
        std::string format = "text";
        std::optional<std::filesystem::path> out;
    };
    auto opts = std::make_shared<Options>();
    cmd->add_option("--data", opts->data, "Training CSV")->required();
    cmd->add_option("--folds", opts->folds, "Number of folds");
    add_hyper_options(cmd, opts->hyper);
    cmd->add_option("--format", opts->format, "Output format")
        ->check(CLI::IsMember({"text", "json", "csv"}));
    cmd->add_option("--out", opts->out, "Output path (default: stdout)");

    cmd->callback([opts, cmd] {
        const auto h = resolve_hyperparams(cmd, opts->hyper);
        const auto dataset = lolrec::build_training_set(lolrec::load_csv(opts->data));
        const auto cv = lolrec::kfold_cv(dataset, h, opts->folds, opts->hyper.seed);

        std::string body;
        if (opts->format == "json") {
            lolrec::EvalReport report;
            report.rmse = cv.mean_rmse;
            for (const auto& fold : cv.folds) report.fold_rmse.push_back(fold.rmse);
            auto doc = ordered_json::parse(report.to_json());
            doc["evaluated"] = cv.evaluated;
            doc["skipped"] = cv.skipped;
            body = doc.dump(2) + "\n";
        } else if (opts->format == "csv") {
            body = "fold,rmse,evaluated,skipped\n";
            for (std::size_t i = 0; i < cv.folds.size(); ++i) {
                body += std::to_string(i + 1) + "," + format_double(cv.folds[i].rmse) + "," +
                        std::to_string(cv.folds[i].evaluated) + "," +
                        std::to_string(cv.folds[i].skipped) + "\n";
            }
            body += "mean," + format_double(cv.mean_rmse) + "," + std::to_string(cv.evaluated) +
                    "," + std::to_string(cv.skipped) + "\n";
        } else {
            for (std::size_t i = 0; i < cv.folds.size(); ++i) {
                body += "fold " + std::to_string(i + 1) + ": rmse " +
                        format_double(cv.folds[i].rmse) + " (evaluated " +
                        std::to_string(cv.folds[i].evaluated) + ", skipped " +
                        std::to_string(cv.folds[i].skipped) + ")\n";
            }
            body += "mean rmse " + format_double(cv.mean_rmse) + "\n";
        }
        emit(opts->out, body);
    });
}

// ---------------------------------------------------------------------------
// gridsearch

void setup_gridsearch(CLI::App& app) {
    auto* cmd = app.add_subcommand("gridsearch", "Exhaustive hyperparameter search");
    struct Options {
        std::filesystem::path data;
        std::vector<int> epochs_grid{20};
        std::vector<double> lambda_grid{0.005, 0.4};
        std::vector<double> gamma_grid{0.02, 0.0005};
        int folds = 3;
        HyperOptions hyper;
        unsigned jobs = 0;
        std::string format = "csv";
        std::optional<std::filesystem::path> out;
    };
    auto opts = std::make_shared<Options>();
    cmd->add_option("--data", opts->data, "Training CSV")->required();
    cmd->add_option("--epochs-grid", opts->epochs_grid, "Epoch candidates")->delimiter(',');
    cmd->add_option("--lambda-grid", opts->lambda_grid, "Lambda candidates")->delimiter(',');
    cmd->add_option("--gamma-grid", opts->gamma_grid, "Gamma candidates")->delimiter(',');
    cmd->add_option("--folds", opts->folds, "CV folds per grid point");
    add_hyper_options(cmd, opts->hyper);
    cmd->add_option("--jobs", opts->jobs, "Concurrent grid evaluations (0 = hardware)");
    cmd->add_option("--format", opts->format, "Results table format")
        ->check(CLI::IsMember({"csv", "json"}));
    cmd->add_option("--out", opts->out, "Results table path (default: stdout)");

    cmd->callback([opts, cmd] {
        const auto base = resolve_hyperparams(cmd, opts->hyper);
        const auto dataset = lolrec::build_training_set(lolrec::load_csv(opts->data));
        lolrec::HyperGrid grid{opts->epochs_grid, opts->lambda_grid, opts->gamma_grid};
        const auto result =
            lolrec::grid_search(dataset, base, grid, opts->folds, opts->hyper.seed, opts->jobs);

        std::string table;
        if (opts->format == "json") {
            ordered_json doc;
            doc["best"] = {{"epochs", result.best.epochs},
                           {"lambda", result.best.lambda},
                           {"gamma", result.best.gamma},
                           {"mean_rmse", result.best_rmse}};
            doc["table"] = ordered_json::array();
            for (const auto& point : result.table) {
                doc["table"].push_back({{"epochs", point.epochs},
                                        {"lambda", point.lambda},
                                        {"gamma", point.gamma},
                                        {"mean_rmse", point.mean_rmse}});
            }
            table = doc.dump(2) + "\n";
        } else {
            table = "epochs,lambda,gamma,mean_rmse\n";
            for (const auto& point : result.table) {
                table += std::to_string(point.epochs) + "," + format_double(point.lambda) + "," +
                         format_double(point.gamma) + "," + format_double(point.mean_rmse) + "\n";
            }
        }
        emit(opts->out, table);
        std::cerr << "best: epochs=" << result.best.epochs
                  << " lambda=" << format_double(result.best.lambda)
                  << " gamma=" << format_double(result.best.gamma)
                  << " mean_rmse=" << format_double(result.best_rmse) << "\n";
    });
}

// ---------------------------------------------------------------------------
// bias

void setup_bias(CLI::App& app) {
    auto* cmd = app.add_subcommand("bias", "Popularity-bias comparison: SVD vs Slope One");
    struct Options {
        std::filesystem::path data;
        int k = 5;
        std::size_t cohort = 100;
        double decile = 0.10;
        bool unweighted = false;
        HyperOptions hyper;
        std::string format = "text";
        std::optional<std::filesystem::path> out;
    };
    auto opts = std::make_shared<Options>();
    cmd->add_option("--data", opts->data, "Training CSV")->required();
    cmd->add_option("-k,--top", opts->k, "Recommendations per cohort user");
    cmd->add_option("--cohort", opts->cohort, "Number of query users");
    cmd->add_option("--decile", opts->decile, "Top item fraction counted as popular");
    cmd->add_flag("--slope-unweighted", opts->unweighted, "Use unweighted Slope One");
    add_hyper_options(cmd, opts->hyper);
    cmd->add_option("--format", opts->format, "Output format")
        ->check(CLI::IsMember({"text", "json"}));
    cmd->add_option("--out", opts->out, "Output path (default: stdout)");

    cmd->callback([opts, cmd] {
        if (opts->cohort == 0) throw lolrec::DataError("--cohort must be >= 1");
        const auto h = resolve_hyperparams(cmd, opts->hyper);
        const auto dataset = lolrec::build_training_set(lolrec::load_csv(opts->data));
        const auto svd = lolrec::train(dataset, h);
        const auto slope = lolrec::train_slope_one(dataset);

        // Per-user rating lists, then a seeded cohort sample.
        std::vector<std::vector<lolrec::ProfileEntry>> by_user(dataset.users.size());
        for (const auto& triple : dataset.triples) {
            by_user[*dataset.users.find(triple.player_id)].push_back(
                {triple.champion_id, static_cast<double>(triple.rating)});
        }
        std::vector<std::uint32_t> cohort(dataset.users.size());
        for (std::uint32_t u = 0; u < cohort.size(); ++u) cohort[u] = u;
        lolrec::Rng rng(opts->hyper.seed);
        rng.shuffle(cohort);
        if (cohort.size() > opts->cohort) cohort.resize(opts->cohort);

        std::vector<lolrec::RecommendationList> svd_lists;
        std::vector<lolrec::RecommendationList> slope_lists;
        for (const auto user : cohort) {
            auto ratings = by_user[user];
            std::sort(ratings.begin(), ratings.end(),
                      [](const lolrec::ProfileEntry& a, const lolrec::ProfileEntry& b) {
                          if (a.rating != b.rating) return a.rating > b.rating;
                          return a.champion_id < b.champion_id;
                      });
            if (ratings.size() > 5) ratings.resize(5);
            lolrec::QueryProfile profile{dataset.users.key_of(user), std::move(ratings)};
            svd_lists.push_back(lolrec::rank_unrated(svd.model, profile, opts->k));
            slope_lists.push_back(lolrec::rank_unrated(slope, profile, opts->k, !opts->unweighted));
        }

        const double share_svd = lolrec::popularity_share(svd_lists, dataset, opts->decile);
        const double share_slope = lolrec::popularity_share(slope_lists, dataset, opts->decile);

        std::string body;
        if (opts->format == "json") {
            ordered_json doc;
            doc["decile"] = opts->decile;
            doc["k"] = opts->k;
            doc["cohort"] = cohort.size();
            doc["share_svd"] = share_svd;
            doc["share_slope_one"] = share_slope;
            body = doc.dump(2) + "\n";
        } else {
            body = "popularity share of top " + format_double(opts->decile * 100.0) +
                   "% items over " + std::to_string(cohort.size()) + " users:\n  svd        " +
                   format_double(share_svd) + "\n  slope_one  " + format_double(share_slope) + "\n";
        }
        emit(opts->out, body);
    });
}

// ---------------------------------------------------------------------------
// hitrate

void setup_hitrate(CLI::App& app) {
    auto* cmd = app.add_subcommand("hitrate", "Leave-one-out hit rate @ k");
    struct Options {
        std::filesystem::path data;
        int k = 5;
        std::size_t max_users = 0;
        bool untrained = false;
        HyperOptions hyper;
        std::string format = "text";
        std::optional<std::filesystem::path> out;
    };
    auto opts = std::make_shared<Options>();
    cmd->add_option("--data", opts->data, "Training CSV")->required();
    cmd->add_option("-k,--top", opts->k, "Recommendation list length");
    cmd->add_option("--max-users", opts->max_users, "Sample size (0 = every eligible user)");
    cmd->add_flag("--untrained", opts->untrained, "Evaluate the init-only model baseline");
    add_hyper_options(cmd, opts->hyper);
    cmd->add_option("--format", opts->format, "Output format")
        ->check(CLI::IsMember({"text", "json"}));
    cmd->add_option("--out", opts->out, "Output path (default: stdout)");

    cmd->callback([opts, cmd] {
        const auto h = resolve_hyperparams(cmd, opts->hyper);
        const auto dataset = lolrec::build_training_set(lolrec::load_csv(opts->data));
        const auto model =
            opts->untrained ? lolrec::init_model(dataset, h) : lolrec::train(dataset, h).model;
        const auto result =
            lolrec::hit_rate_at_k(model, dataset, opts->k, opts->hyper.seed, opts->max_users);

        std::string body;
        if (opts->format == "json") {
            lolrec::EvalReport report;
            report.hit_rate_at_k = result.hit_rate;
            auto doc = ordered_json::parse(report.to_json());
            doc["k"] = opts->k;
            doc["trials"] = result.trials;
            doc["hits"] = result.hits;
            doc["expected_random"] = result.expected_random;
            body = doc.dump(2) + "\n";
        } else {
            body = "hit rate @ " + std::to_string(opts->k) + ": " + format_double(result.hit_rate) +
                   " (" + std::to_string(result.hits) + "/" + std::to_string(result.trials) +
                   " trials, random baseline " + format_double(result.expected_random) + ")\n";
        }
        emit(opts->out, body);
    });
}

// ---------------------------------------------------------------------------
// ztest

void setup_ztest(CLI::App& app) {
    auto* cmd = app.add_subcommand("ztest", "One-sided two-sample Z-test for means");
    struct Options {
        std::filesystem::path a;
        std::filesystem::path b;
        std::string format = "text";
        std::optional<std::filesystem::path> out;
    };
    auto opts = std::make_shared<Options>();
    cmd->add_option("--a", opts->a, "Sample A (one value per line)")->required();
    cmd->add_option("--b", opts->b, "Sample B (one value per line)")->required();
    cmd->add_option("--format", opts->format, "Output format")
        ->check(CLI::IsMember({"text", "json"}));
    cmd->add_option("--out", opts->out, "Output path (default: stdout)");

    cmd->callback([opts] {
        const auto a = lolrec::load_value_column(opts->a);
        const auto b = lolrec::load_value_column(opts->b);
        const auto result = lolrec::z_test_one_sided(a, b);

        std::string body;
        if (opts->format == "json") {
            lolrec::EvalReport report;
            report.z = result.z;
            report.p = result.p;
            body = report.to_json();
        } else {
            body = "z = " + format_double(result.z) + "\np = " + format_double(result.p) + "\n";
        }
        emit(opts->out, body);
    });
}

// ---------------------------------------------------------------------------
// hist

void setup_hist(CLI::App& app) {
    auto* cmd = app.add_subcommand("hist", "Histogram bin counts for plot data");
    struct Options {
        std::filesystem::path input;
        std::vector<double> edges;
        double min = 0.0;
        double max = 0.0;
        int bins = 10;
        std::string format = "csv";
        std::optional<std::filesystem::path> out;
    };
    auto opts = std::make_shared<Options>();
    cmd->add_option("--input", opts->input, "Value file (one value per line)")->required();
    cmd->add_option("--edges", opts->edges, "Explicit bin edges")->delimiter(',');
    cmd->add_option("--min", opts->min, "Range start (with --bins)");
    cmd->add_option("--max", opts->max, "Range end (with --bins)");
    cmd->add_option("--bins", opts->bins, "Number of equal-width bins");
    cmd->add_option("--format", opts->format, "Output format")
        ->check(CLI::IsMember({"csv", "json"}));
    cmd->add_option("--out", opts->out, "Output path (default: stdout)");

    cmd->callback([opts, cmd] {
        std::vector<double> edges = opts->edges;
        if (edges.empty()) {
            if (!cmd->count("--min") || !cmd->count("--max")) {
                throw lolrec::DataError("provide --edges or both --min and --max");
            }
            if (opts->bins < 1) throw lolrec::DataError("--bins must be >= 1");
            if (!(opts->min < opts->max)) throw lolrec::DataError("--min must be below --max");
            for (int i = 0; i <= opts->bins; ++i) {
                edges.push_back(opts->min +
                                (opts->max - opts->min) * static_cast<double>(i) / opts->bins);
            }
        }
        const auto values = lolrec::load_value_column(opts->input);
        const auto counts = lolrec::histogram(values, edges);

        std::string body;
        if (opts->format == "json") {
            lolrec::EvalReport report;
            report.histogram_edges = edges;
            report.histogram_counts = counts;
            body = report.to_json();
        } else {
            body = lolrec::histogram_csv(edges, counts);
        }
        emit(opts->out, body);
    });
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"lolrec: champion recommendations from mastery data"};
    app.require_subcommand(1);
    app.set_config("--config", "", "Read options from an INI file");

    setup_fetch(app);
    setup_synth(app);
    setup_train(app);
    setup_recommend(app);
    setup_cv(app);
    setup_gridsearch(app);
    setup_bias(app);
    setup_hitrate(app);
    setup_ztest(app);
    setup_hist(app);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    } catch (const lolrec::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
