// bmv/server.hpp - HTTP/JSON service over the core
//
//   POST /sessions                                  -> 201 {id}
//   POST /sessions/{id}/model                       model text, or {"text", "path"?}
//   GET  /sessions/{id}/configs                     {path, configs: [names]}
//   PUT  /sessions/{id}/configs                     whole `.properties` text
//   GET  /sessions/{id}/configs/{name}              {name, text, config, errors}
//   PUT  /sessions/{id}/configs/{name}              one section, header optional
//   POST /sessions/{id}/configs/{name}/clone        {"newName"?}
//   POST /sessions/{id}/configs/{name}/rename       {"newName"}
//   POST /sessions/{id}/configs/{name}/delete
//   POST /sessions/{id}/configs/save                writes the file back to its path
//   GET  /sessions/{id}/warnings?config=NAME
//   POST /sessions/{id}/jobs                        {kind, configName, baseState?, limit?, invariant?, timeoutMs?} -> 202
//   GET  /sessions/{id}/jobs
//   GET  /jobs/{id}
//   POST /jobs/{id}/cancel
//   GET  /jobs/{id}/state.json, /jobs/{id}/state.dot   optional ?index=N
//
// Errors: 400 malformed request, 404 unknown id, 409 name collision,
// 422 `{"errors": [{key, message, location}]}`.
#pragma once

#include <memory>
#include <string>

namespace bmv
{

struct ServerOptions
{
  std::string static_dir;  // served under `/` when nonempty
};

class Server
{
public:
  explicit Server(ServerOptions options = {});
  ~Server();

  Server(const Server &) = delete;
  Server & operator=(const Server &) = delete;

  /// Binds to `port`, or to a free port when `port` is 0. Returns the bound
  /// port or -1.
  int bind(const std::string & host, int port);
  /// Serves until stop(). Call after bind().
  bool listen();
  void stop();
  [[nodiscard]] bool running() const;

private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace bmv
