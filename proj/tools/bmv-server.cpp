// bmv-server - HTTP front end for the web workbench
//
//   bmv-server [--host 127.0.0.1] [--port 8080] [--static DIR]

#include <csignal>
#include <iostream>

#include <CLI11.hpp>

#include "bmv/server.hpp"

namespace
{

bmv::Server * active = nullptr;

void on_signal(int)
{
  if (active != nullptr) active->stop();
}

}  // namespace

int main(int argc, char ** argv)
{
  CLI::App app{"bmv-server - bounded model validator HTTP service"};
  std::string host = "127.0.0.1";
  int port = 8080;
  std::string static_dir;
  app.add_option("--host", host, "bind address")->capture_default_str();
  app.add_option("--port", port, "port, 0 picks a free one")->capture_default_str()->check(CLI::Range(0, 65535));
  app.add_option("--static", static_dir, "directory served under /")->check(CLI::ExistingDirectory);
  CLI11_PARSE(app, argc, argv);

  bmv::Server server(bmv::ServerOptions{static_dir});
  const int bound = server.bind(host, port);
  if (bound < 0) {
    std::cerr << "bmv-server: cannot bind " << host << ":" << port << '\n';
    return 2;
  }
  active = &server;
  std::signal(SIGINT, on_signal);
  std::signal(SIGTERM, on_signal);
  std::cout << "listening on http://" << host << ":" << bound << std::endl;
  server.listen();
  active = nullptr;
  return 0;
}
