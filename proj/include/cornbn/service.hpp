#pragma once

#include <memory>
#include <string>

#include <nlohmann/json.hpp>

#include "cornbn/evidence.hpp"
#include "cornbn/model_io.hpp"

namespace cornbn {

struct ServiceResponse {
  int status = 200;
  nlohmann::ordered_json body;
};

/// Request handlers over one immutable model. Safe to call concurrently.
class ModelService {
 public:
  explicit ModelService(LearnedModel model);

  const LearnedModel& model() const { return model_; }

  ServiceResponse health() const;
  ServiceResponse describe() const;
  // {"evidence": {name: bin index or label}}
  ServiceResponse infer(const std::string& body) const;
  // {"variable": name, "base_evidence": {name: bin index or label}}
  ServiceResponse whatif(const std::string& body) const;

  // Bins may be given as an index or as the bin's label.
  EvidenceSet parse_evidence(const nlohmann::json& j) const;

 private:
  LearnedModel model_;
};

/// HTTP front end: GET /health, GET /model, POST /infer, POST /whatif.
class HttpServer {
 public:
  explicit HttpServer(std::shared_ptr<const ModelService> service);
  ~HttpServer();
  HttpServer(const HttpServer&) = delete;
  HttpServer& operator=(const HttpServer&) = delete;

  // Port 0 picks a free port. Returns the bound port.
  int bind(const std::string& host, int port);
  void listen();  // blocks until stop()
  void start();   // listen on a background thread
  void stop();

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace cornbn
