#include <doctest.h>

#include <httplib.h>
#include <json.hpp>
#include <thread>

#include "tracegen/analysis.hpp"
#include "tracegen/errors.hpp"
#include "tracegen/profiles.hpp"
#include "tracegen/service.hpp"

using namespace tracegen;
using nlohmann::json;

namespace {

json post(const std::string& body, int expected_status = 200) {
    const auto r = service::handle_hrc(body);
    CHECK(r.status == expected_status);
    return json::parse(r.body);
}

std::vector<std::string> error_fields(const json& body) {
    std::vector<std::string> out;
    for (const auto& e : body["errors"]) out.push_back(e["field"]);
    return out;
}

}  // namespace

TEST_CASE("theta_f at the default scale has a single dominant cliff") {
    const auto body = post(R"({"preset":"f"})");
    CHECK(body["m"] == service::kDefaultM);
    CHECK(body["n"] == service::kDefaultN);
    CHECK(body["policy"] == "lru");

    const auto cliff = spike_to_cliff(auto_tune_tmax(fgen(5, {2}, 5e-3), service::kDefaultM), 2);
    double total = 0.0, inside = 0.0, prev_hit = 0.0, prev_size = 0.0;
    for (const auto& p : body["hrc"]) {
        const double size = p["size"], hit = p["hit_ratio"];
        total += hit - prev_hit;
        if (prev_size >= std::floor(cliff.lo) && size <= std::ceil(cliff.hi)) inside += hit - prev_hit;
        prev_hit = hit;
        prev_size = size;
    }
    CHECK(inside >= 0.8 * total);
}

TEST_CASE("pure IRM requests are nearly concave") {
    for (const char* g : {"zipf:1.2", "uniform", "pareto:2.5,1"}) {
        CAPTURE(g);
        const auto body = post(std::string(R"({"p_irm":1,"g":")") + g + "\"}");
        CHECK(body["concavity_gap"].get<double>() <= 0.02);
    }
}

TEST_CASE("response shape") {
    const auto body = post(R"({"p_irm":0.3,"g":"zipf:1.2","f":"fgen:10:0.01:2,6","m":200,"n":5000,"seed":3})");
    CHECK(body["seed"] == 3);
    const auto& hrc = body["hrc"];
    REQUIRE(!hrc.empty());
    double prev = -1.0;
    for (const auto& p : hrc) {
        CHECK(p["size"].is_number_unsigned());
        CHECK(p["size"].get<double>() > prev);
        prev = p["size"].get<double>();
        CHECK(p["normalized_size"].get<double>() == doctest::Approx(prev / body["footprint"].get<double>()));
        CHECK(p["hit_ratio"].get<double>() >= 0.0);
        CHECK(p["hit_ratio"].get<double>() <= 1.0);
    }
    auto sum = [](const json& h) {
        std::uint64_t s = h["inf"];
        for (const auto& b : h["bins"]) {
            CHECK(b["lo"].get<std::uint64_t>() <= b["hi"].get<std::uint64_t>());
            s += b["count"].get<std::uint64_t>();
        }
        CHECK(s == h["total"]);
        return s;
    };
    const auto& ird = body["ird"];
    CHECK(sum(ird["merged"]) == 5000);
    CHECK(sum(ird["independent"]) + sum(ird["dependent"]) == 5000);
    CHECK(ird["independent"]["total"].get<double>() == doctest::Approx(1500).epsilon(0.1));
    CHECK(body["elapsed_ms"].get<double>() >= 0.0);
    CHECK(parse_profile(body["profile"].get<std::string>()).seed == 3);

    const auto fifo = post(R"({"preset":"b","policy":"fifo","sizes":[10,50,100]})");
    CHECK(fifo["policy"] == "fifo");
    CHECK(fifo["hrc"].size() == 3);
    CHECK(fifo["hrc"][1]["size"] == 50);
}

TEST_CASE("identical requests give identical responses") {
    const std::string req = R"({"preset":"w24","seed":17})";
    auto a = post(req), b = post(req);
    a.erase("elapsed_ms");
    b.erase("elapsed_ms");
    CHECK(a == b);
    auto c = post(R"({"preset":"w24","seed":18})");
    c.erase("elapsed_ms");
    CHECK(a != c);
}

TEST_CASE("errors") {
    CHECK(error_fields(post("{not json", 400)) == std::vector<std::string>{""});
    CHECK(error_fields(post("[1,2]", 400)) == std::vector<std::string>{""});
    CHECK(error_fields(post(R"({"m":-5,"policy":"arc","g":"zipf:-1"})", 400)) ==
          std::vector<std::string>{"g", "m", "policy"});
    CHECK(error_fields(post(R"({"preset":"zz"})", 400)) == std::vector<std::string>{"preset"});
    CHECK(error_fields(post(R"({"preset":"b","sizes":[0]})", 400)) == std::vector<std::string>{"sizes"});
    CHECK(error_fields(post(R"({"preset":"b","overlap":"yes"})", 400)) == std::vector<std::string>{"overlap"});
    CHECK(error_fields(post(R"({"preset":"b","p_irm":2})", 400)) == std::vector<std::string>{"profile"});

    CHECK(error_fields(post(R"({"preset":"b","m":100001})", 413)) == std::vector<std::string>{"m"});
    CHECK(error_fields(post(R"({"preset":"b","m":200000,"n":20000000})", 413)) ==
          std::vector<std::string>{"m", "n"});

    const auto inconsistent = post(R"({"p_irm":1})", 422);
    CHECK(error_fields(inconsistent) == std::vector<std::string>{"profile"});
    post(R"({"preset":"b","p_irm":0.5,"g":null})", 422);
}

TEST_CASE("presets and health") {
    const auto r = service::handle_presets();
    CHECK(r.status == 200);
    const auto body = json::parse(r.body);
    REQUIRE(body["presets"].size() == 15);
    CHECK(body["presets"][14]["name"] == "g");
    for (const auto& p : body["presets"]) {
        const auto& preset = get_preset(p["name"].get<std::string>());
        const auto profile = parse_profile(p["profile"].get<std::string>());
        CHECK(profile == preset.instantiate(service::kDefaultM, service::kDefaultN));
    }
    const auto& b = body["presets"][1];
    CHECK(b["f"] == "fgen:20:0.005:0,3");
    CHECK(b["g"].is_null());
    CHECK(json::parse(service::handle_health().body)["status"] == "ok");
}

TEST_CASE("routes over a real socket") {
    httplib::Server server;
    service::mount(server);
    const int port = server.bind_to_any_port("127.0.0.1");
    REQUIRE(port > 0);
    std::thread worker([&] { server.listen_after_bind(); });
    server.wait_until_ready();

    httplib::Client client("127.0.0.1", port);
    const auto health = client.Get("/v1/health");
    REQUIRE(health);
    CHECK(health->status == 200);
    CHECK(health->get_header_value("Access-Control-Allow-Origin") == "*");
    CHECK(health->get_header_value("Content-Type") == "application/json");

    const auto hrc = client.Post("/v1/hrc", R"({"preset":"e"})", "application/json");
    REQUIRE(hrc);
    CHECK(hrc->status == 200);
    CHECK(json::parse(hrc->body)["footprint"].get<int>() >= 100);

    const auto bad = client.Post("/v1/hrc", R"({"m":1000000,"preset":"e"})", "application/json");
    REQUIRE(bad);
    CHECK(bad->status == 413);

    const auto missing = client.Get("/v1/nope");
    REQUIRE(missing);
    CHECK(missing->status == 404);
    CHECK(json::parse(missing->body)["errors"][0]["message"] == "not found");

    const auto preflight = client.Options("/v1/hrc");
    REQUIRE(preflight);
    CHECK(preflight->status == 204);
    CHECK(preflight->get_header_value("Access-Control-Allow-Methods").find("POST") != std::string::npos);

    server.stop();
    worker.join();
}
