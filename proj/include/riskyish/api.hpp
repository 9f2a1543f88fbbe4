#pragma once

#include <atomic>
#include <map>
#include <memory>
#include <string>
#include <thread>

#include "riskyish/store.hpp"

namespace riskyish {

struct ApiRequest {
    std::string method;  // GET, POST, PUT, DELETE
    std::string path;    // e.g. /api/v1/entities/ent_01
    std::map<std::string, std::string> query;
    std::string body;
};

struct ApiResponse {
    int status = 200;
    std::string body;
    std::string content_type = "application/json";
};

int http_status(ErrorKind kind);

/// Routes /api/v1 requests against a StoreService. Transport-free so the
/// same handler backs the HTTP server and the tests.
///
///   GET    /rubric
///   GET    /entities[?name=substr&complete=1]   POST /entities
///   GET    /entities/{id}   PUT /entities/{id}   DELETE /entities/{id}
///   POST   /score      {entity, weights?, policy?} -> RiskyishnessScore (not stored)
///   GET    /taxonomy?k=&policy=&weights=<profile id>
///   POST   /import/csv (text/csv body)
///   GET    /stats
///   GET    /export/csv
///   GET    /weights   GET/PUT/DELETE /weights/{id}
///
/// Errors are {code, message, detail} with 400/404/409/500.
class Api {
public:
    explicit Api(StoreService& service) : service_(service) {}

    ApiResponse handle(const ApiRequest& request) const;

private:
    StoreService& service_;
};

/// cpp-httplib server around Api. start() binds and serves on a background
/// thread; port 0 picks a free port.
class HttpServer {
public:
    explicit HttpServer(StoreService& service);
    ~HttpServer();

    HttpServer(const HttpServer&) = delete;
    HttpServer& operator=(const HttpServer&) = delete;

    /// Returns the bound port. Throws Error(io) if binding fails.
    int start(const std::string& host, int port);
    /// Blocks until stop() is called from elsewhere.
    void run(const std::string& host, int port);
    void stop();

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

} // namespace riskyish
