#pragma once

#include <atomic>
#include <cstddef>
#include <filesystem>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "dqkit/roc.hpp"

namespace httplib {
class Server;
}

namespace dqkit::service {

struct DatasetSummary {
    std::size_t cases = 0;
    std::size_t positive_count = 0;
    std::size_t negative_count = 0;
    double min_score = 0.0;
    double max_score = 0.0;
};

DatasetSummary summarize(const ScoredDataset& data);

/// In-memory dataset store. Ids are unique for the lifetime of the registry;
/// inserts and lookups may race freely.
class DatasetRegistry {
public:
    std::string add(ScoredDataset data);
    std::shared_ptr<const ScoredDataset> find(std::string_view id) const;
    std::size_t size() const;

private:
    mutable std::mutex mutex_;
    std::unordered_map<std::string, std::shared_ptr<const ScoredDataset>> datasets_;
    std::size_t next_id_ = 1;
};

struct Response {
    int status = 200;
    std::string body;
    std::string content_type = "application/json";
};

// Request handlers, independent of the transport.
Response post_dataset(DatasetRegistry& registry, std::string_view csv_body);
Response post_evaluate(const DatasetRegistry& registry, std::string_view json_body);
Response post_choose(const DatasetRegistry& registry, std::string_view json_body);
Response get_health();

struct ServiceConfig {
    std::size_t max_body_bytes = 10 * 1024 * 1024;
    /// Origins that receive CORS headers; "*" allows any.
    std::vector<std::string> cors_origins{"*"};
    std::optional<std::filesystem::path> static_dir;
};

/// HTTP front end over the handlers above.
class Server {
public:
    explicit Server(ServiceConfig config = {});
    ~Server();
    Server(const Server&) = delete;
    Server& operator=(const Server&) = delete;

    /// False when the address cannot be bound (e.g. port in use).
    bool bind(const std::string& host, int port);
    /// Binds an ephemeral port and returns it, or -1.
    int bind_any_port(const std::string& host);
    /// Serves until stop(); requires a successful bind.
    bool listen();
    void stop();
    void wait_until_ready() const;

    DatasetRegistry& registry() noexcept { return registry_; }

private:
    void install_routes();

    ServiceConfig config_;
    DatasetRegistry registry_;
    std::unique_ptr<httplib::Server> http_;
};

} // namespace dqkit::service
