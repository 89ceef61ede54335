#pragma once

#include "ltlfsynth/strategy.hpp"

#include <chrono>
#include <memory>
#include <string>

namespace httplib {
class Server;
}

namespace lsynth {

struct ServiceConfig {
    std::size_t max_iter = 50;
    std::chrono::seconds session_ttl{1800};
    std::string cors_origin = "*";
};

struct ServiceState;

// HTTP adapter over check/classify/respond. Routes are installed on a caller
// owned server so tests can bind an ephemeral port.
class Service {
public:
    explicit Service(ServiceConfig cfg = {});
    ~Service();
    Service(const Service&) = delete;
    Service& operator=(const Service&) = delete;

    void install(httplib::Server& srv);

    // Drops sessions idle for longer than the configured ttl; returns how many.
    std::size_t expire_sessions();
    std::size_t session_count() const;

private:
    std::unique_ptr<ServiceState> st_;
};

// Blocks until the server stops.
int run_server(const std::string& host, int port, const ServiceConfig& cfg);

}  // namespace lsynth
