#include "cornbn/service.hpp"

#include <algorithm>
#include <thread>

#include <fmt/format.h>
#include <httplib.h>
#include <spdlog/spdlog.h>

#include "cornbn/analysis.hpp"
#include "cornbn/errors.hpp"
#include "cornbn/inference.hpp"

namespace cornbn {

namespace {

int status_for(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::ImpossibleEvidence:
      return 422;
    case ErrorKind::InvalidArgument:
    case ErrorKind::UnknownVariable:
    case ErrorKind::BinOutOfRange:
    case ErrorKind::InvalidEvidence:
    case ErrorKind::SchemaError:
      return 400;
    default:
      return 500;
  }
}

ServiceResponse error_response(const Error& e) {
  nlohmann::ordered_json body;
  body["error"] = {{"kind", to_string(e.kind())}, {"message", e.what()}};
  return {status_for(e.kind()), std::move(body)};
}

nlohmann::json parse_body(const std::string& body) {
  if (body.empty()) return nlohmann::json::object();
  try {
    auto j = nlohmann::json::parse(body);
    if (!j.is_object()) throw Error(ErrorKind::SchemaError, "request body must be a JSON object");
    return j;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::SchemaError, fmt::format("malformed JSON: {}", e.what()));
  }
}

template <class F>
ServiceResponse guarded(F&& f) {
  try {
    return f();
  } catch (const Error& e) {
    return error_response(e);
  }
}

}  // namespace

ModelService::ModelService(LearnedModel model) : model_(std::move(model)) {}

ServiceResponse ModelService::health() const {
  nlohmann::ordered_json body;
  body["status"] = "ok";
  body["variables"] = model_.net.size();
  return {200, std::move(body)};
}

ServiceResponse ModelService::describe() const { return {200, model_to_json(model_, false)}; }

EvidenceSet ModelService::parse_evidence(const nlohmann::json& j) const {
  const auto& cat = model_.net.catalog();
  if (j.is_null()) return EvidenceSet(cat, {});
  if (!j.is_object()) throw Error(ErrorKind::SchemaError, "evidence must be an object");
  std::map<std::string, int> ev;
  for (const auto& [name, value] : j.items()) {
    const auto& spec = cat.at(name);
    if (value.is_number_integer()) {
      ev[name] = value.get<int>();
    } else if (value.is_string()) {
      const auto& labels = spec.bins.labels();
      const auto label = value.get<std::string>();
      const auto it = std::find(labels.begin(), labels.end(), label);
      if (it == labels.end()) {
        throw Error(ErrorKind::BinOutOfRange, fmt::format("'{}' has no bin labeled '{}'", name, label));
      }
      ev[name] = static_cast<int>(it - labels.begin());
    } else {
      throw Error(ErrorKind::SchemaError, fmt::format("bin for '{}' must be an index or a label", name));
    }
  }
  return EvidenceSet(cat, std::move(ev));
}

ServiceResponse ModelService::infer(const std::string& body) const {
  return guarded([&] {
    const auto j = parse_body(body);
    const auto evidence = parse_evidence(j.contains("evidence") ? j["evidence"] : nlohmann::json());
    const auto forecast = expected_yield(model_.net, evidence);
    const auto& cat = model_.net.catalog();
    nlohmann::ordered_json posteriors = nlohmann::ordered_json::object();
    for (int v = 0; v < cat.size(); ++v) {
      const auto& name = cat[v].name;
      if (evidence.contains(name)) continue;
      const auto probs = v == cat.target_index() ? forecast.posterior.probs
                                                 : posterior(model_.net, evidence, name).probs;
      posteriors[name] = std::vector<double>(probs.data(), probs.data() + probs.size());
    }
    nlohmann::ordered_json out;
    out["posteriors"] = std::move(posteriors);
    out["expected_yield"] = forecast.expected_yield;
    out["evidence"] = evidence.assignments();
    return ServiceResponse{200, std::move(out)};
  });
}

ServiceResponse ModelService::whatif(const std::string& body) const {
  return guarded([&] {
    const auto j = parse_body(body);
    if (!j.contains("variable") || !j["variable"].is_string()) {
      throw Error(ErrorKind::SchemaError, "'variable' must be a variable name");
    }
    const auto variable = j["variable"].get<std::string>();
    const auto base = parse_evidence(j.contains("base_evidence") ? j["base_evidence"] : nlohmann::json());
    nlohmann::ordered_json entries = nlohmann::ordered_json::array();
    for (const auto& e : cornbn::whatif(model_.net, variable, base)) {
      nlohmann::ordered_json item;
      item["bin"] = e.bin;
      item["label"] = e.label;
      item["expected_yield"] = e.expected_yield ? nlohmann::ordered_json(*e.expected_yield) : nlohmann::ordered_json(nullptr);
      entries.push_back(std::move(item));
    }
    nlohmann::ordered_json out;
    out["variable"] = variable;
    out["entries"] = std::move(entries);
    return ServiceResponse{200, std::move(out)};
  });
}

struct HttpServer::Impl {
  std::shared_ptr<const ModelService> service;
  httplib::Server server;
  std::thread thread;
};

namespace {

void reply(httplib::Response& res, const ServiceResponse& r) {
  res.status = r.status;
  res.set_content(r.body.dump(), "application/json");
}

}  // namespace

HttpServer::HttpServer(std::shared_ptr<const ModelService> service) : impl_(std::make_unique<Impl>()) {
  impl_->service = std::move(service);
  auto svc = impl_->service;
  auto& s = impl_->server;
  s.Get("/health", [svc](const httplib::Request&, httplib::Response& res) { reply(res, svc->health()); });
  s.Get("/model", [svc](const httplib::Request&, httplib::Response& res) { reply(res, svc->describe()); });
  s.Post("/infer", [svc](const httplib::Request& req, httplib::Response& res) { reply(res, svc->infer(req.body)); });
  s.Post("/whatif",
         [svc](const httplib::Request& req, httplib::Response& res) { reply(res, svc->whatif(req.body)); });
  s.set_logger([](const httplib::Request& req, const httplib::Response& res) {
    spdlog::debug("{} {} -> {}", req.method, req.path, res.status);
  });
}

HttpServer::~HttpServer() { stop(); }

int HttpServer::bind(const std::string& host, int port) {
  int bound = port == 0 ? impl_->server.bind_to_any_port(host) : (impl_->server.bind_to_port(host, port) ? port : -1);
  if (bound < 0) throw Error(ErrorKind::IoError, fmt::format("cannot bind {}:{}", host, port));
  return bound;
}

void HttpServer::listen() { impl_->server.listen_after_bind(); }

void HttpServer::start() {
  impl_->thread = std::thread([this] { impl_->server.listen_after_bind(); });
  impl_->server.wait_until_ready();
}

void HttpServer::stop() {
  impl_->server.stop();
  if (impl_->thread.joinable()) impl_->thread.join();
}

}  // namespace cornbn
