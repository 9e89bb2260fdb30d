#include "tracegen/service.hpp"

#include <chrono>
#include <httplib.h>
#include <json.hpp>

#include "tracegen/analysis.hpp"
#include "tracegen/cachesim.hpp"
#include "tracegen/errors.hpp"
#include "tracegen/generator.hpp"
#include "tracegen/profiles.hpp"

namespace tracegen::service {

using nlohmann::json;

namespace {

struct FieldError {
    std::string field;
    std::string message;
};

Response error(int status, const std::vector<FieldError>& errors) {
    json list = json::array();
    for (const auto& e : errors) list.push_back({{"field", e.field}, {"message", e.message}});
    return {status, json{{"errors", list}}.dump()};
}

struct Request {
    TraceProfile profile;
    Policy policy = Policy::Lru;
    std::vector<std::uint64_t> sizes;
};

// Reads the request into `out`; returns field errors instead of throwing.
std::vector<FieldError> read_request(const json& body, Request& out) {
    std::vector<FieldError> errors;
    auto& p = out.profile;
    p.m = kDefaultM;
    p.n = kDefaultN;
    if (!body.is_object()) return {{"", "request body must be a JSON object"}};

    auto uint_field = [&](const char* name, auto&& assign) {
        if (!body.contains(name) || body[name].is_null()) return;
        const auto& v = body[name];
        if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<std::int64_t>() >= 0))
            errors.push_back({name, "must be a non-negative integer"});
        else
            assign(v.get<std::uint64_t>());
    };

    if (body.contains("preset") && !body["preset"].is_null()) {
        if (!body["preset"].is_string()) {
            errors.push_back({"preset", "must be a string"});
        } else {
            try {
                const auto& preset = get_preset(body["preset"].get<std::string>());
                p.p_irm = preset.p_irm;
                p.g = preset.g;
                p.f = preset.f;
            } catch (const ValidationError& e) {
                errors.push_back({"preset", e.what()});
            }
        }
    }
    if (body.contains("p_irm")) {
        if (!body["p_irm"].is_number()) errors.push_back({"p_irm", "must be a number"});
        else p.p_irm = body["p_irm"].get<double>();
    }
    if (body.contains("g")) {
        if (body["g"].is_null()) p.g.reset();
        else if (!body["g"].is_string()) errors.push_back({"g", "must be a string or null"});
        else try {
            p.g = parse_g(body["g"].get<std::string>());
        } catch (const ValidationError& e) {
            errors.push_back({"g", e.what()});
        }
    }
    if (body.contains("f")) {
        if (body["f"].is_null()) p.f.reset();
        else if (!body["f"].is_string()) errors.push_back({"f", "must be a string or null"});
        else try {
            p.f = parse_f(body["f"].get<std::string>());
        } catch (const ValidationError& e) {
            errors.push_back({"f", e.what()});
        }
    }
    uint_field("m", [&](std::uint64_t v) { p.m = v; });
    uint_field("n", [&](std::uint64_t v) { p.n = v; });
    uint_field("seed", [&](std::uint64_t v) { p.seed = v; });
    uint_field("universe", [&](std::uint64_t v) { p.universe = v; });
    if (body.contains("overlap")) {
        if (!body["overlap"].is_boolean()) errors.push_back({"overlap", "must be a boolean"});
        else p.overlap = body["overlap"].get<bool>();
    }
    if (body.contains("policy")) {
        if (!body["policy"].is_string()) errors.push_back({"policy", "must be a string"});
        else try {
            out.policy = parse_policy(body["policy"].get<std::string>());
        } catch (const ValidationError& e) {
            errors.push_back({"policy", e.what()});
        }
    }
    if (body.contains("sizes") && !body["sizes"].is_null()) {
        const auto& s = body["sizes"];
        if (!s.is_array()) {
            errors.push_back({"sizes", "must be an array of positive integers"});
        } else {
            for (const auto& v : s) {
                if (!v.is_number_integer() || v.get<std::int64_t>() < 1) {
                    errors.push_back({"sizes", "must be an array of positive integers"});
                    break;
                }
                out.sizes.push_back(v.get<std::uint64_t>());
            }
        }
    }
    return errors;
}

json histogram_json(const IrdHistogram& h) {
    json bins = json::array();
    for (std::size_t j = 0; j < h.counts.size(); ++j)
        if (h.counts[j] > 0) bins.push_back({{"lo", h.edges[j] + 1}, {"hi", h.edges[j + 1]}, {"count", h.counts[j]}});
    if (h.overflow > 0) bins.push_back({{"lo", h.edges.back() + 1}, {"hi", h.max_finite}, {"count", h.overflow}});
    return {{"bins", bins}, {"inf", h.inf_count}, {"total", h.total}};
}

// IRDs measured within each arrival stream on its own clock, plus the
// merged stream. Singletons belong to the dependent stream.
json ird_panels(const Generated& gen) {
    std::vector<std::uint64_t> independent, dependent;
    for (std::size_t j = 0; j < gen.trace.refs.size(); ++j) {
        if (gen.sources[j] == Source::Independent) independent.push_back(gen.trace.refs[j]);
        else dependent.push_back(gen.trace.refs[j]);
    }
    return {{"independent", histogram_json(measure_ird(independent))},
            {"dependent", histogram_json(measure_ird(dependent))},
            {"merged", histogram_json(measure_ird(gen.trace.refs))}};
}

}  // namespace

Response handle_hrc(std::string_view request_body) {
    const auto start = std::chrono::steady_clock::now();
    json body = request_body.empty() ? json::object() : json::parse(request_body, nullptr, false);
    if (body.is_discarded()) return error(400, {{"", "request body is not valid JSON"}});

    Request req;
    if (auto errors = read_request(body, req); !errors.empty()) return error(400, errors);
    auto& profile = req.profile;

    std::vector<FieldError> too_big;
    if (profile.m > kMaxFootprint) too_big.push_back({"m", "must be <= " + std::to_string(kMaxFootprint)});
    if (profile.n > kMaxLength) too_big.push_back({"n", "must be <= " + std::to_string(kMaxLength)});
    if (!too_big.empty()) return error(413, too_big);

    Generated gen;
    try {
        profile.validate();
        gen = generate(profile, /*tag_sources=*/true);
    } catch (const ProfileError& e) {
        return error(422, {{"profile", e.what()}});
    } catch (const ValidationError& e) {
        return error(400, {{"profile", e.what()}});
    }

    const auto refs = block_refs(gen.trace);
    HitRatioCurve curve;
    try {
        if (req.policy == Policy::Lru && req.sizes.empty()) curve = exact_lru_hrc(refs);
        else
            curve = simulate_hrc(refs, req.policy,
                                 req.sizes.empty() ? geometric_sizes(measure_footprint(refs).distinct) : req.sizes);
    } catch (const ValidationError& e) {
        return error(400, {{"sizes", e.what()}});
    }

    json points = json::array();
    for (const auto& p : curve.points)
        points.push_back({{"size", static_cast<std::uint64_t>(p.cache_size)},
                          {"normalized_size", curve.normalized(p)},
                          {"hit_ratio", p.hit_ratio}});
    double gap = 0.0;
    if (curve.footprint > 0 && curve.points.size() >= 2) gap = concavity_gap(curve);

    json out{{"policy", std::string(to_string(req.policy))},
             {"m", profile.m},
             {"n", profile.n},
             {"seed", profile.seed},
             {"footprint", curve.footprint},
             {"hrc", points},
             {"concavity_gap", gap},
             {"ird", ird_panels(gen)},
             {"profile", render_profile(profile)}};
    const std::chrono::duration<double, std::milli> elapsed = std::chrono::steady_clock::now() - start;
    out["elapsed_ms"] = elapsed.count();
    return {200, out.dump()};
}

Response handle_presets() {
    json list = json::array();
    for (const auto& p : presets()) {
        list.push_back({{"name", p.name},
                        {"description", p.description},
                        {"p_irm", p.p_irm},
                        {"g", p.g ? json(render_g(p.g)) : json(nullptr)},
                        {"f", p.f ? json(render_f(p.f)) : json(nullptr)},
                        {"min_m", p.min_m},
                        {"min_n", p.min_n},
                        {"profile", render_profile(p.instantiate(kDefaultM, kDefaultN))}});
    }
    return {200, json{{"presets", list}}.dump()};
}

Response handle_health() { return {200, json{{"status", "ok"}}.dump()}; }

void mount(httplib::Server& server) {
    auto reply = [](httplib::Response& res, const Response& r) {
        res.status = r.status;
        res.set_content(r.body, "application/json");
    };
    server.set_default_headers({{"Access-Control-Allow-Origin", "*"},
                                {"Access-Control-Allow-Methods", "GET, POST, OPTIONS"},
                                {"Access-Control-Allow-Headers", "Content-Type"}});
    server.Post("/v1/hrc", [reply](const httplib::Request& req, httplib::Response& res) {
        reply(res, handle_hrc(req.body));
    });
    server.Get("/v1/presets", [reply](const httplib::Request&, httplib::Response& res) {
        reply(res, handle_presets());
    });
    server.Get("/v1/health", [reply](const httplib::Request&, httplib::Response& res) {
        reply(res, handle_health());
    });
    server.Options(R"(/v1/.*)", [](const httplib::Request&, httplib::Response& res) { res.status = 204; });
    server.set_error_handler([](const httplib::Request&, httplib::Response& res) {
        if (!res.body.empty()) return;
        res.set_content(json{{"errors", json::array({{{"field", ""}, {"message", "not found"}}})}}.dump(),
                        "application/json");
    });
}

}  // namespace tracegen::service
