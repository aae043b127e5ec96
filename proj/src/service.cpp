#include "saftea/service.hpp"

#include <httplib.h>

#include <mutex>

#include "saftea/demand.hpp"
#include "saftea/detail/text.hpp"
#include "saftea/json_io.hpp"
#include "saftea/scenario.hpp"

namespace saftea::service {

namespace {

using nlohmann::json;

const std::string kJson = "application/json";

Response error(int status, const std::string& code, const std::string& message, const std::string& field = {}) {
  json body = {{"code", code}, {"message", message}, {"field", field.empty() ? json(nullptr) : json(field)}};
  return {status, body.dump(), {}};
}

Response from_validation(const ValidationError& e) {
  if (e.kind() == ValidationError::Kind::bounds) return error(422, "out_of_bounds", e.what(), e.field());
  return error(400, "invalid_request", e.what(), e.field());
}

json parse_body(const std::string& body) {
  json value = json::parse(body, nullptr, false);
  if (value.is_discarded()) throw ValidationError("body", "request body is not valid JSON");
  if (!value.is_object()) throw ValidationError("body", "request body must be a JSON object");
  return value;
}

void reject_unknown(const json& body, std::initializer_list<const char*> allowed) {
  for (const auto& [key, v] : body.items()) {
    bool ok = false;
    for (const char* a : allowed) ok = ok || key == a;
    if (!ok) throw ValidationError(key, "unknown field '" + key + "'");
  }
}

std::string required_string(const json& body, const std::string& key) {
  if (!body.contains(key)) throw ValidationError(key, key + " is required");
  if (!body[key].is_string()) throw ValidationError(key, key + " must be a string");
  return body[key].get<std::string>();
}

template <typename F>
auto with_field(const std::string& field, F&& f) {
  try {
    return f();
  } catch (const ValidationError& e) {
    throw ValidationError(field, e.what(), e.kind());
  }
}

EvaluationOptions options_from(const json& body) {
  EvaluationOptions options;
  if (body.contains("currency")) {
    const std::string text = required_string(body, "currency");
    options.currency = with_field("currency", [&] { return parse_currency(text); });
  }
  if (body.contains("price_basis")) {
    const std::string text = required_string(body, "price_basis");
    options.basis = with_field("price_basis", [&] { return PriceBasis::parse(text); });
  }
  return options;
}

template <typename F>
Response guarded(F&& f) {
  try {
    return f();
  } catch (const ValidationError& e) {
    return from_validation(e);
  } catch (const json::exception& e) {
    return error(400, "invalid_request", e.what());
  } catch (const CurrencyMismatch& e) {
    return error(500, "internal", e.what());
  } catch (const std::exception& e) {
    return error(500, "internal", e.what());
  }
}

Response ok(const json& body) { return {200, body.dump(), {}}; }

}  // namespace

Service::Service(DatasetBundle bundle, std::string allowed_origin)
    : bundle_(std::make_shared<const DatasetBundle>(std::move(bundle))), origin_(std::move(allowed_origin)) {
  etag_ = "\"" + bundle_digest(*bundle_) + "\"";
  bundle_body_ = io::bundle_summary(*bundle_).dump();
}

Response Service::get_bundle() const {
  Response r{200, bundle_body_, {}};
  r.headers["ETag"] = etag_;
  return r;
}

Response Service::post_evaluate(const std::string& body) const {
  return guarded([&] {
    const json req = parse_body(body);
    reject_unknown(req, {"route", "package", "currency", "price_basis"});
    const Route route = with_field("route", [&] { return parse_route(required_string(req, "route")); });
    if (!req.contains("package")) throw ValidationError("package", "package is required");
    const IncentivePackage pkg = io::package_from_json(req["package"]);
    return ok(io::to_json(evaluate(route, pkg, *bundle_, options_from(req))));
  });
}

Response Service::post_sweep(const std::string& body) const {
  return guarded([&] {
    const json req = parse_body(body);
    reject_unknown(req, {"route", "spec", "currency", "price_basis"});
    const Route route = with_field("route", [&] { return parse_route(required_string(req, "route")); });
    if (!req.contains("spec")) throw ValidationError("spec", "spec is required");
    const SweepSpec spec = io::sweep_spec_from_json(req["spec"]);
    const EvaluationOptions options = options_from(req);
    const auto rows = sweep(route, spec, *bundle_, bundle_->finance.defaults, options);
    return ok({{"route", std::string(to_string(route))},
               {"lever", std::string(to_string(spec.lever))},
               {"rows", io::to_json(rows, options.currency)}});
  });
}

Response Service::get_demand(const Query& query) const {
  return guarded([&] {
    for (const auto& [key, v] : query) {
      if (key != "year" && key != "policy" && key != "bound" && key != "interpolate") {
        throw ValidationError(key, "unknown query parameter '" + key + "'");
      }
    }
    auto year_it = query.find("year");
    if (year_it == query.end()) throw ValidationError("year", "year is required");
    const auto year = detail::parse_int(year_it->second);
    if (!year) throw ValidationError("year", "year must be an integer");

    bool interpolate = false;
    if (auto it = query.find("interpolate"); it != query.end()) {
      if (it->second == "true" || it->second == "1") {
        interpolate = true;
      } else if (it->second != "false" && it->second != "0") {
        throw ValidationError("interpolate", "interpolate must be true or false");
      }
    }

    std::vector<demand::Policy> policies = {demand::Policy::corsia, demand::Policy::probioqav, demand::Policy::total};
    std::vector<demand::CiBound> bounds = {demand::CiBound::lower, demand::CiBound::higher};
    if (auto it = query.find("policy"); it != query.end()) {
      policies = {with_field("policy", [&] { return demand::parse_policy(it->second); })};
    }
    if (auto it = query.find("bound"); it != query.end()) {
      bounds = {with_field("bound", [&] { return demand::parse_bound(it->second); })};
    }

    json records = json::array();
    for (auto p : policies) {
      for (auto b : bounds) {
        records.push_back(io::to_json(demand::demand_at(bundle_->demand, *year, p, b, interpolate)));
      }
    }
    return ok({{"records", records}});
  });
}

Response Service::handle(const std::string& method, const std::string& path, const Query& query,
                         const std::string& body) const {
  struct RouteEntry {
    const char* path;
    const char* method;
  };
  static constexpr RouteEntry kRoutes[] = {
      {"/v1/bundle", "GET"}, {"/v1/evaluate", "POST"}, {"/v1/sweep", "POST"}, {"/v1/demand", "GET"}};
  for (const auto& r : kRoutes) {
    if (path != r.path) continue;
    if (method != r.method) return error(405, "method_not_allowed", method + " is not allowed on " + path);
    if (path == "/v1/bundle") return get_bundle();
    if (path == "/v1/evaluate") return post_evaluate(body);
    if (path == "/v1/sweep") return post_sweep(body);
    return get_demand(query);
  }
  return error(404, "not_found", "no such endpoint: " + path);
}

PortInUse::PortInUse(const std::string& host, int port)
    : std::runtime_error("address " + host + ":" + std::to_string(port) + " is already in use") {}

namespace {

std::mutex g_server_mutex;
httplib::Server* g_server = nullptr;

void apply(const Service& service, const Response& in, httplib::Response& out) {
  out.status = in.status;
  for (const auto& [k, v] : in.headers) out.set_header(k, v);
  out.set_header("Access-Control-Allow-Origin", service.allowed_origin());
  out.set_content(in.body, kJson);
}

}  // namespace

void run_server(const Service& service, const ServerOptions& options, const std::function<void(int)>& on_ready) {
  httplib::Server server;
  server.set_socket_options([](socket_t sock) {
    int yes = 1;
    setsockopt(sock, SOL_SOCKET, SO_REUSEADDR, reinterpret_cast<const void*>(&yes), sizeof(yes));
  });

  auto dispatch = [&service](const httplib::Request& req, httplib::Response& res) {
    Query query;
    for (const auto& [k, v] : req.params) query.emplace(k, v);
    apply(service, service.handle(req.method, req.path, query, req.body), res);
  };
  server.Get(R"(/.*)", dispatch);
  server.Post(R"(/.*)", dispatch);
  server.Put(R"(/.*)", dispatch);
  server.Delete(R"(/.*)", dispatch);
  server.Options(R"(/.*)", [&service](const httplib::Request&, httplib::Response& res) {
    res.status = 204;
    res.set_header("Access-Control-Allow-Origin", service.allowed_origin());
    res.set_header("Access-Control-Allow-Methods", "GET, POST, OPTIONS");
    res.set_header("Access-Control-Allow-Headers", "Content-Type");
    res.set_header("Access-Control-Max-Age", "600");
  });

  int port = options.port;
  if (port == 0) {
    port = server.bind_to_any_port(options.host);
    if (port < 0) throw PortInUse(options.host, options.port);
  } else if (!server.bind_to_port(options.host, port)) {
    throw PortInUse(options.host, port);
  }

  {
    std::lock_guard<std::mutex> lock(g_server_mutex);
    g_server = &server;
  }
  if (on_ready) on_ready(port);
  server.listen_after_bind();
  std::lock_guard<std::mutex> lock(g_server_mutex);
  g_server = nullptr;
}

void stop_server() {
  std::lock_guard<std::mutex> lock(g_server_mutex);
  if (g_server) g_server->stop();
}

}  // namespace saftea::service
