// Copyright 2026 The kbqa Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "kbqa/http_service.hpp"

#include <httplib.h>

namespace kbqa {

std::pair<int, nlohmann::json> error_response(const std::exception& e) {
  nlohmann::json body = {{"error", e.what()}};
  if (const auto* p = dynamic_cast<const ParseError*>(&e)) {
    body["kind"] = "parse";
    body["line"] = p->line();
    body["column"] = p->column();
    body["expected"] = p->expected();
    return {400, body};
  }
  if (const auto* c = dynamic_cast<const ConsistencyError*>(&e)) {
    body["kind"] = "consistency";
    body["node"] = c->node_id();
    body["cornerstone"] = c->cornerstone();
    return {409, body};
  }
  if (const auto* m = dynamic_cast<const MappingError*>(&e)) {
    body["kind"] = "mapping";
    body["slot"] = m->slot();
    body["term"] = m->term();
    return {422, body};
  }
  if (dynamic_cast<const SessionExpired*>(&e)) return {410, (body["kind"] = "expired", body)};
  if (dynamic_cast<const LookupError*>(&e)) return {404, (body["kind"] = "not_found", body)};
  if (dynamic_cast<const RuleRejected*>(&e)) return {422, (body["kind"] = "rejected", body)};
  if (dynamic_cast<const UnsupportedError*>(&e)) return {422, (body["kind"] = "unsupported", body)};
  if (dynamic_cast<const InstantiationError*>(&e)) return {422, (body["kind"] = "conclusion", body)};
  if (dynamic_cast<const ValidationError*>(&e)) return {400, (body["kind"] = "validation", body)};
  if (dynamic_cast<const nlohmann::json::exception*>(&e)) return {400, (body["kind"] = "json", body)};
  return {500, (body["kind"] = "internal", body)};
}

struct HttpService::Impl {
  Engine& engine;
  httplib::Server server;

  explicit Impl(Engine& e) : engine(e) { routes(); }

  static void send(httplib::Response& res, int status, const nlohmann::json& body) {
    res.status = status;
    res.set_header("Access-Control-Allow-Origin", "*");
    res.set_content(body.dump(), "application/json");
  }

  template <typename F>
  static void guard(httplib::Response& res, F&& f) {
    try {
      send(res, 200, f());
    } catch (const std::exception& e) {
      auto [status, body] = error_response(e);
      send(res, status, body);
    }
  }

  static nlohmann::json body_of(const httplib::Request& req) {
    auto j = nlohmann::json::parse(req.body.empty() ? std::string("{}") : req.body);
    if (!j.is_object()) throw ValidationError("request body must be a JSON object");
    return j;
  }

  static std::optional<bool> pretag_flag(const nlohmann::json& j) {
    if (!j.contains("pretagged") || j.at("pretagged").is_null()) return std::nullopt;
    return j.at("pretagged").get<bool>();
  }

  void routes() {
    server.Post("/analyze", [this](const httplib::Request& req, httplib::Response& res) {
      guard(res, [&] {
        auto j = body_of(req);
        return engine.analyze(j.at("question").get<std::string>(), pretag_flag(j)).to_json(true);
      });
    });
    server.Post("/answer", [this](const httplib::Request& req, httplib::Response& res) {
      guard(res, [&] {
        auto j = body_of(req);
        return engine.answer(j.at("question").get<std::string>(), pretag_flag(j));
      });
    });
    server.Post(R"(/answer/([^/]+)/choice)", [this](const httplib::Request& req, httplib::Response& res) {
      guard(res, [&] {
        auto j = body_of(req);
        return engine.resume(req.matches[1].str(), j.at("selection").get<std::string>());
      });
    });
    server.Get("/kb", [this](const httplib::Request&, httplib::Response& res) {
      guard(res, [&] { return scrdr::to_json(*engine.kb()); });
    });
    server.Get("/kb/stats", [this](const httplib::Request&, httplib::Response& res) {
      guard(res, [&] { return engine.kb_stats(); });
    });
    server.Get("/kb/path", [this](const httplib::Request& req, httplib::Response& res) {
      guard(res, [&] {
        if (!req.has_param("question")) throw ValidationError("missing query parameter 'question'");
        std::optional<bool> pretagged;
        if (req.has_param("pretagged")) pretagged = req.get_param_value("pretagged") == "true";
        auto a = engine.analyze(req.get_param_value("question"), pretagged);
        return a.to_json(false);
      });
    });
    server.Post("/kb/exception", [this](const httplib::Request& req, httplib::Response& res) {
      guard(res, [&] { return engine.add_exception(KbEditRequest::from_json(body_of(req))); });
    });
    server.Get("/ontology/summary", [this](const httplib::Request&, httplib::Response& res) {
      guard(res, [&] { return engine.ontology_summary(); });
    });
    server.Get("/health", [](const httplib::Request&, httplib::Response& res) {
      send(res, 200, {{"status", "ok"}});
    });
  }
};

HttpService::HttpService(Engine& engine) : impl_(std::make_unique<Impl>(engine)) {}
HttpService::~HttpService() = default;

int HttpService::bind(const std::string& host, int port) {
  if (port == 0) return impl_->server.bind_to_any_port(host);
  return impl_->server.bind_to_port(host, port) ? port : -1;
}

bool HttpService::listen() { return impl_->server.listen_after_bind(); }

void HttpService::stop() { impl_->server.stop(); }

}  // namespace kbqa
