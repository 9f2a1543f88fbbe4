#include <httplib.h>

#include "riskyish/api.hpp"

namespace riskyish {

struct HttpServer::Impl {
    explicit Impl(StoreService& service) : api(service) {
        auto route = [this](const httplib::Request& req, httplib::Response& res) {
            ApiRequest request{req.method, req.path, {}, req.body};
            for (const auto& [key, value] : req.params) request.query.emplace(key, value);
            const auto response = api.handle(request);
            res.status = response.status;
            res.set_content(response.body, response.content_type);
        };
        server.Get(".*", route);
        server.Post(".*", route);
        server.Put(".*", route);
        server.Delete(".*", route);
    }

    Api api;
    httplib::Server server;
    std::thread worker;
};

HttpServer::HttpServer(StoreService& service) : impl_(std::make_unique<Impl>(service)) {}

HttpServer::~HttpServer() { stop(); }

int HttpServer::start(const std::string& host, int port) {
    int bound = port;
    if (port == 0) {
        bound = impl_->server.bind_to_any_port(host);
    } else if (!impl_->server.bind_to_port(host, port)) {
        bound = -1;
    }
    if (bound <= 0) throw Error(ErrorKind::io, "cannot bind", host + ":" + std::to_string(port));
    impl_->worker = std::thread([this] { impl_->server.listen_after_bind(); });
    impl_->server.wait_until_ready();
    return bound;
}

void HttpServer::run(const std::string& host, int port) {
    if (!impl_->server.listen(host, port)) throw Error(ErrorKind::io, "cannot listen", host + ":" + std::to_string(port));
}

void HttpServer::stop() {
    impl_->server.stop();
    if (impl_->worker.joinable()) impl_->worker.join();
}

} // namespace riskyish
