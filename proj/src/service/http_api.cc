// Copyright 2026 The Epiwatch Authors.
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

#include "epiwatch/service/http_api.h"

#include <httplib.h>

#include <charconv>
#include <functional>

#include "epiwatch/ingest/document_json.h"
#include "epiwatch/util/error.h"

namespace epiwatch {

namespace {

using nlohmann::json;
using Handler = std::function<void(const httplib::Request&, httplib::Response&)>;

void SendJson(httplib::Response& res, const json& body, int status = 200) {
  res.status = status;
  res.set_content(body.dump(), "application/json; charset=utf-8");
}

void SendError(httplib::Response& res, int status, const std::string& message,
               const std::vector<std::string>& offenders = {}) {
  json body = {{"error", message}};
  if (!offenders.empty()) body["offenders"] = offenders;
  SendJson(res, body, status);
}

Handler Guard(Handler fn) {
  return [fn = std::move(fn)](const httplib::Request& req, httplib::Response& res) {
    try {
      fn(req, res);
    } catch (const ValidationError& e) {
      SendError(res, 400, e.what(), e.offenders());
    } catch (const InvalidInput& e) {
      SendError(res, 400, e.what());
    } catch (const json::exception& e) {
      SendError(res, 400, std::string("malformed JSON: ") + e.what());
    } catch (const NotFound& e) {
      SendError(res, 404, e.what());
    } catch (const Conflict& e) {
      SendError(res, 409, e.what());
    } catch (const std::exception& e) {
      SendError(res, 500, e.what());
    }
  };
}

uint64_t PathId(const httplib::Request& req) {
  const std::string s = req.matches[1];
  uint64_t v = 0;
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || p != s.data() + s.size()) throw InvalidInput("bad id " + s);
  return v;
}

json ParseBody(const httplib::Request& req) {
  if (req.body.empty()) throw InvalidInput("request body required");
  return json::parse(req.body);
}

std::multimap<std::string, std::string> Params(const httplib::Request& req) {
  return {req.params.begin(), req.params.end()};
}

}  // namespace

json ToJson(const DuplicateCluster& c) {
  auto history = json::array();
  for (const auto& [doc_id, count] : c.count_history) {
    history.push_back({{"doc_id", doc_id}, {"count", count}});
  }
  return {{"cluster_id", c.cluster_id},
          {"member_ids", c.member_ids},
          {"exemplar_id", c.exemplar_id},
          {"count_history", history}};
}

void RegisterApi(httplib::Server* server, Engine* engine) {
  server->set_default_headers({{"Access-Control-Allow-Origin", "*"}});
  server->Options(R"(/api/.*)", [](const httplib::Request&, httplib::Response& res) {
    res.set_header("Access-Control-Allow-Methods", "GET, POST, OPTIONS");
    res.set_header("Access-Control-Allow-Headers", "Content-Type");
    res.status = 204;
  });

  server->Get("/api/health", Guard([engine](const httplib::Request&, httplib::Response& res) {
    SendJson(res, {{"status", "ok"}, {"documents", engine->size()}});
  }));

  server->Get("/api/search", Guard([engine](const httplib::Request& req, httplib::Response& res) {
    SendJson(res, engine->SearchJson(ParseQuery(Params(req))));
  }));

  server->Get("/api/graph", Guard([engine](const httplib::Request& req, httplib::Response& res) {
    size_t top_n = 10;
    if (req.has_param("top_n")) {
      const auto s = req.get_param_value("top_n");
      auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), top_n);
      if (ec != std::errc() || p != s.data() + s.size() || top_n < 1) {
        throw InvalidInput("top_n must be a positive integer");
      }
    }
    auto params = Params(req);
    params.erase("top_n");
    SendJson(res, engine->GraphJson(ParseQuery(params), top_n));
  }));

  server->Get(R"(/api/documents/([0-9a-f]+))",
              Guard([engine](const httplib::Request& req, httplib::Response& res) {
                const std::string id = req.matches[1];
                auto doc = engine->GetDocument(id);
                if (!doc) throw NotFound("no document " + id);
                SendJson(res, *doc);
              }));

  server->Get(R"(/api/clusters/(\d+))",
              Guard([engine](const httplib::Request& req, httplib::Response& res) {
                const uint64_t id = PathId(req);
                auto cluster = engine->GetCluster(id);
                if (!cluster) throw NotFound("no cluster " + std::to_string(id));
                SendJson(res, ToJson(*cluster));
              }));

  server->Post(R"(/api/triage/([0-9a-f]+))",
               Guard([engine](const httplib::Request& req, httplib::Response& res) {
                 const json body = ParseBody(req);
                 const auto decision = ParseTriageDecision(body.at("decision").get<std::string>());
                 const auto actor = body.value("actor", "");
                 if (actor.empty()) throw InvalidInput("actor required");
                 SendJson(res, engine->Triage(req.matches[1], decision, actor));
               }));

  server->Get("/api/narratives", Guard([engine](const httplib::Request& req, httplib::Response& res) {
    if (!req.has_param("date")) throw InvalidInput("date parameter required");
    const auto s = req.get_param_value("date");
    auto day = ParseDate(s);
    if (!day) throw InvalidInput("date must be YYYY-MM-DD, got " + s);
    SendJson(res, engine->ListNarratives(*day));
  }));

  server->Get(R"(/api/narratives/(\d+))",
              Guard([engine](const httplib::Request& req, httplib::Response& res) {
                const uint64_t id = PathId(req);
                auto n = engine->GetNarrative(id);
                if (!n) throw NotFound("no narrative " + std::to_string(id));
                SendJson(res, *n);
              }));

  server->Post("/api/reports", Guard([engine](const httplib::Request& req, httplib::Response& res) {
    Report draft = ReportFromJson(ParseBody(req));
    SendJson(res, ToJson(engine->CreateReport(std::move(draft))), 201);
  }));

  server->Get(R"(/api/reports/(\d+))",
              Guard([engine](const httplib::Request& req, httplib::Response& res) {
                const uint64_t id = PathId(req);
                auto r = engine->GetReport(id);
                if (!r) throw NotFound("no report " + std::to_string(id));
                SendJson(res, ToJson(*r));
              }));

  server->Get(R"(/api/reports/(\d+)/export)",
              Guard([engine](const httplib::Request& req, httplib::Response& res) {
                res.set_content(engine->ExportReport(PathId(req)), "text/html; charset=utf-8");
              }));

  server->Get(R"(/api/geo/(-?\d+))",
              Guard([engine](const httplib::Request& req, httplib::Response& res) {
                const std::string s = req.matches[1];
                GeoId id = 0;
                std::from_chars(s.data(), s.data() + s.size(), id);
                SendJson(res, engine->GeoJson(id));
              }));
}

}  // namespace epiwatch
