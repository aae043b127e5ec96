#pragma once

#include <functional>
#include <map>
#include <memory>
#include <stdexcept>
#include <string>

#include "saftea/reference_data.hpp"

namespace saftea::service {

/// A transport-independent response. Every non-2xx body is an ApiError object
/// {"code", "message", "field"}.
struct Response {
  int status = 200;
  std::string body;
  std::map<std::string, std::string> headers;
};

using Query = std::map<std::string, std::string>;

/// Request handlers over one immutable bundle snapshot. All methods are const and
/// safe to call concurrently.
class Service {
 public:
  explicit Service(DatasetBundle bundle, std::string allowed_origin = "*");

  Response get_bundle() const;
  Response post_evaluate(const std::string& body) const;
  Response post_sweep(const std::string& body) const;
  Response get_demand(const Query& query) const;

  /// Routes a request by method and path; unknown paths give 404, wrong methods 405.
  Response handle(const std::string& method, const std::string& path, const Query& query,
                  const std::string& body) const;

  const DatasetBundle& bundle() const { return *bundle_; }
  const std::string& etag() const { return etag_; }
  const std::string& allowed_origin() const { return origin_; }

 private:
  std::shared_ptr<const DatasetBundle> bundle_;
  std::string etag_;
  std::string bundle_body_;
  std::string origin_;
};

class PortInUse : public std::runtime_error {
 public:
  PortInUse(const std::string& host, int port);
};

struct ServerOptions {
  std::string host = "127.0.0.1";
  int port = 8080;
};

/// Binds and serves until `stop_server` is called or the process is interrupted.
/// `on_ready` receives the bound port once listening (useful with port 0).
/// Throws PortInUse when the address cannot be bound.
void run_server(const Service& service, const ServerOptions& options,
                const std::function<void(int)>& on_ready = {});

/// Stops a server currently running in this process; no-op otherwise.
void stop_server();

}  // namespace saftea::service
