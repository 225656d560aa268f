#include "dqkit/service.hpp"

#include <algorithm>
#include <cstdio>

#include <httplib.h>
#include <spdlog/spdlog.h>

#include "dqkit/ingest.hpp"
#include "dqkit/report.hpp"

namespace dqkit::service {

DatasetSummary summarize(const ScoredDataset& data) {
    DatasetSummary s{data.cases.size(), data.positive_count, data.negative_count, 0.0, 0.0};
    if (!data.cases.empty()) {
        const auto [lo, hi] = std::ranges::minmax_element(data.cases, {}, &ScoredCase::score);
        s.min_score = lo->score;
        s.max_score = hi->score;
    }
    return s;
}

std::string DatasetRegistry::add(ScoredDataset data) {
    auto ptr = std::make_shared<const ScoredDataset>(std::move(data));
    std::lock_guard lock(mutex_);
    char id[32];
    std::snprintf(id, sizeof id, "ds-%06zu", next_id_++);
    datasets_.emplace(id, std::move(ptr));
    return id;
}

std::shared_ptr<const ScoredDataset> DatasetRegistry::find(std::string_view id) const {
    std::lock_guard lock(mutex_);
    auto it = datasets_.find(std::string(id));
    return it == datasets_.end() ? nullptr : it->second;
}

std::size_t DatasetRegistry::size() const {
    std::lock_guard lock(mutex_);
    return datasets_.size();
}

namespace {

Response json_response(int status, const Json& body) { return {status, body.dump()}; }

Response error_response(int status, const std::string& message, std::optional<std::size_t> line = std::nullopt) {
    Json body;
    body["error"] = message;
    if (line) body["line"] = *line;
    return json_response(status, body);
}

// Maps an exception escaping request processing to a status code.
struct HttpError {
    int status;
    std::string message;
};

Json parse_body(std::string_view body) {
    try {
        return Json::parse(body);
    } catch (const Json::parse_error& e) {
        throw HttpError{400, std::string("malformed JSON: ") + e.what()};
    }
}

std::shared_ptr<const ScoredDataset> lookup(const DatasetRegistry& registry, const Json& id) {
    if (!id.is_string()) throw HttpError{400, "dataset_id must be a string"};
    auto data = registry.find(id.get<std::string>());
    if (!data) throw HttpError{404, "unknown dataset '" + id.get<std::string>() + "'"};
    return data;
}

// Resolves {dataset_id | curve} on `j`. Sets `prevalence` from the dataset.
RocCurve resolve_curve(const DatasetRegistry& registry, const Json& j, std::optional<double>* prevalence) {
    const bool has_dataset = j.contains("dataset_id");
    const bool has_curve = j.contains("curve");
    if (has_dataset == has_curve) throw HttpError{400, "exactly one of 'dataset_id' or 'curve' is required"};
    if (has_dataset) {
        auto data = lookup(registry, j["dataset_id"]);
        if (prevalence) *prevalence = data->prevalence();
        try {
            return build_roc(*data);
        } catch (const DomainError& e) {
            throw HttpError{422, e.what()};
        }
    }
    try {
        return curve_from_json(j["curve"]);
    } catch (const FormatError& e) {
        throw HttpError{400, e.what()};
    } catch (const DomainError& e) {
        throw HttpError{422, e.what()};
    }
}

UtilityModel resolve_utility(const Json& j, std::optional<double> default_prevalence) {
    if (!j.contains("utility")) throw HttpError{400, "missing 'utility'"};
    try {
        return utility_from_json(j["utility"], default_prevalence);
    } catch (const FormatError& e) {
        throw HttpError{400, e.what()};
    } catch (const ConfigError& e) {
        throw HttpError{422, e.what()};
    }
}

template <class F>
Response guarded(F&& f) {
    try {
        return f();
    } catch (const HttpError& e) {
        return error_response(e.status, e.message);
    } catch (const ConfigError& e) {
        return error_response(422, e.what());
    } catch (const DomainError& e) {
        return error_response(422, e.what());
    } catch (const FormatError& e) {
        return error_response(400, e.what(), e.line());
    } catch (const Json::exception& e) {
        return error_response(400, e.what());
    }
}

} // namespace

Response post_dataset(DatasetRegistry& registry, std::string_view csv_body) {
    ScoredDataset data;
    try {
        data = parse_scored_csv(csv_body);
    } catch (const FormatError& e) {
        return error_response(400, e.what(), e.line());
    }
    const auto summary = summarize(data);
    const auto id = registry.add(std::move(data));
    spdlog::debug("registered dataset {} ({} cases)", id, summary.cases);
    Json body;
    body["id"] = id;
    body["summary"] = {{"cases", summary.cases},
                       {"positive_count", summary.positive_count},
                       {"negative_count", summary.negative_count},
                       {"min_score", summary.min_score},
                       {"max_score", summary.max_score}};
    return json_response(200, body);
}

Response post_evaluate(const DatasetRegistry& registry, std::string_view json_body) {
    return guarded([&] {
        const Json j = parse_body(json_body);
        if (!j.is_object()) throw HttpError{400, "request body must be a JSON object"};
        std::optional<double> prevalence;
        const auto curve = resolve_curve(registry, j, &prevalence);
        const auto u = resolve_utility(j, prevalence);
        std::size_t grid_n = kDefaultGridSize;
        if (j.contains("grid_n")) {
            if (!j["grid_n"].is_number_integer() || j["grid_n"].get<std::int64_t>() < 2 ||
                j["grid_n"].get<std::int64_t>() > 1001)
                throw HttpError{422, "grid_n must be an integer in [2, 1001]"};
            grid_n = j["grid_n"].get<std::size_t>();
        }
        return json_response(200, roc_report(curve, u, grid_n));
    });
}

Response post_choose(const DatasetRegistry& registry, std::string_view json_body) {
    return guarded([&] {
        const Json j = parse_body(json_body);
        if (!j.is_object()) throw HttpError{400, "request body must be a JSON object"};
        const auto u = resolve_utility(j, std::nullopt);
        if (!j.contains("n_cases") || !j["n_cases"].is_number_integer())
            throw HttpError{400, "'n_cases' must be an integer"};
        const auto n_cases = j["n_cases"].get<std::int64_t>();
        if (n_cases < 0) throw HttpError{422, "'n_cases' must be non-negative"};

        std::vector<CurveOption> options;
        if (j.contains("options")) {
            if (!j["options"].is_array()) throw HttpError{400, "'options' must be an array"};
            for (const auto& o : j["options"]) {
                if (!o.is_object() || !o.contains("name") || !o["name"].is_string())
                    throw HttpError{400, "each option needs a string 'name'"};
                double cost = 0.0;
                if (o.contains("cost")) {
                    if (!o["cost"].is_number()) throw HttpError{400, "option 'cost' must be a number"};
                    cost = o["cost"].get<double>();
                    if (cost < 0.0) throw HttpError{422, "option 'cost' must be non-negative"};
                }
                options.push_back({o["name"].get<std::string>(), resolve_curve(registry, o, nullptr), cost});
            }
        }
        return json_response(200, investment_choice_json(choose_curve_option(options, u, n_cases)));
    });
}

Response get_health() { return json_response(200, Json{{"status", "ok"}}); }

// ---------------------------------------------------------------------------

Server::Server(ServiceConfig config) : config_(std::move(config)), http_(std::make_unique<httplib::Server>()) {
    install_routes();
}

Server::~Server() { stop(); }

void Server::install_routes() {
    auto& http = *http_;
    http.set_payload_max_length(config_.max_body_bytes);
    // The library default adds SO_REUSEPORT, which lets a second server
    // silently share a busy port.
    http.set_socket_options([](socket_t sock) {
        int yes = 1;
        setsockopt(sock, SOL_SOCKET, SO_REUSEADDR, reinterpret_cast<const char*>(&yes), sizeof yes);
    });

    auto reply = [](httplib::Response& res, const Response& r) {
        res.status = r.status;
        res.set_content(r.body, r.content_type);
    };
    http.Get("/api/health", [reply](const httplib::Request&, httplib::Response& res) { reply(res, get_health()); });
    http.Post("/api/datasets", [this, reply](const httplib::Request& req, httplib::Response& res) {
        reply(res, post_dataset(registry_, req.body));
    });
    http.Post("/api/evaluate", [this, reply](const httplib::Request& req, httplib::Response& res) {
        reply(res, post_evaluate(registry_, req.body));
    });
    http.Post("/api/choose", [this, reply](const httplib::Request& req, httplib::Response& res) {
        reply(res, post_choose(registry_, req.body));
    });
    http.Options(R"(/api/.*)", [](const httplib::Request&, httplib::Response& res) {
        res.status = 204;
        res.set_header("Access-Control-Allow-Methods", "GET, POST, OPTIONS");
        res.set_header("Access-Control-Allow-Headers", "Content-Type");
    });

    http.set_post_routing_handler([this](const httplib::Request& req, httplib::Response& res) {
        const auto origin = req.get_header_value("Origin");
        if (origin.empty()) return;
        const auto& allowed = config_.cors_origins;
        if (std::ranges::find(allowed, "*") != allowed.end()) {
            res.set_header("Access-Control-Allow-Origin", "*");
        } else if (std::ranges::find(allowed, origin) != allowed.end()) {
            res.set_header("Access-Control-Allow-Origin", origin);
            res.set_header("Vary", "Origin");
        }
    });
    http.set_logger([](const httplib::Request& req, const httplib::Response& res) {
        spdlog::debug("{} {} -> {}", req.method, req.path, res.status);
    });
    http.set_exception_handler([](const httplib::Request&, httplib::Response& res, std::exception_ptr ep) {
        std::string what = "internal error";
        try {
            std::rethrow_exception(ep);
        } catch (const std::exception& e) {
            what = e.what();
        } catch (...) {
        }
        spdlog::error("unhandled exception: {}", what);
        res.status = 500;
        res.set_content(Json{{"error", what}}.dump(), "application/json");
    });
    if (config_.static_dir && !http.set_mount_point("/", config_.static_dir->string()))
        spdlog::warn("static directory '{}' is not usable", config_.static_dir->string());
}

bool Server::bind(const std::string& host, int port) { return http_->bind_to_port(host, port); }

int Server::bind_any_port(const std::string& host) { return http_->bind_to_any_port(host); }

bool Server::listen() { return http_->listen_after_bind(); }

void Server::stop() {
    if (http_) http_->stop();
}

void Server::wait_until_ready() const { http_->wait_until_ready(); }

} // namespace dqkit::service
