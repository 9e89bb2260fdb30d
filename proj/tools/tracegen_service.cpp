#include <CLI11.hpp>
#include <httplib.h>
#include <iostream>

#include "tracegen/service.hpp"

int main(int argc, char** argv) {
    CLI::App app{"HTTP/JSON backend for interactive profile tuning.", "tracegen-service"};
    std::string bind = "127.0.0.1";
    int port = 8080;
    app.add_option("--bind", bind, "Listen address")->envname("TRACEGEN_BIND");
    app.add_option("--port", port, "Listen port")->envname("TRACEGEN_PORT")->check(CLI::Range(1, 65535));
    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    httplib::Server server;
    tracegen::service::mount(server);
    std::cerr << "tracegen-service: listening on " << bind << ":" << port << "\n";
    if (!server.listen(bind, port)) {
        std::cerr << "tracegen-service: cannot listen on " << bind << ":" << port << "\n";
        return 3;
    }
    return 0;
}
