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

#ifndef EPIWATCH_SERVICE_HTTP_API_H_
#define EPIWATCH_SERVICE_HTTP_API_H_

#include <json.hpp>

#include "epiwatch/dedup/cluster_index.h"
#include "epiwatch/service/engine.h"

namespace httplib {
class Server;
}

namespace epiwatch {

nlohmann::json ToJson(const DuplicateCluster& c);

// Registers the JSON API under /api on `server`. Errors are returned as
// {"error": ..., "offenders": [...]} with status 400 (bad input), 404, 409
// (triage conflict) or 500. `engine` must outlive the server.
void RegisterApi(httplib::Server* server, Engine* engine);

}  // namespace epiwatch

#endif  // EPIWATCH_SERVICE_HTTP_API_H_
