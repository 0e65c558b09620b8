#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "httplib.h"

#include "eavfoil/service/api.hpp"

int main(int argc, char** argv) {
  std::string embeddings, patterns, host = "127.0.0.1";
  int port = 8080;
  eavfoil::service::SessionConfig config;
  CLI::App app{"HTTP session service"};
  app.add_option("--embeddings", embeddings, "word vector table")->required()->check(CLI::ExistingFile);
  app.add_option("--patterns", patterns, "utterance pattern file")->required()->check(CLI::ExistingFile);
  app.add_option("--host", host, "bind address");
  app.add_option("--port", port, "bind port")->check(CLI::Range(1, 65535));
  app.add_option("--m", config.induce.m, "m-estimate smoothing")->check(CLI::NonNegativeNumber);
  app.add_option("--max-body", config.induce.max_body_len, "maximum clause body length");
  app.add_option("--tau", config.disambiguation.tau, "disambiguation confidence ratio")
      ->check(CLI::Range(0.0, 1.0));
  app.add_option("--log", config.inference_log_path, "append inference records to this file");
  CLI11_PARSE(app, argc, argv);

  std::shared_ptr<const eavfoil::service::Resources> resources;
  try {
    resources = eavfoil::service::Resources::load(patterns, embeddings);
  } catch (const eavfoil::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  eavfoil::service::Api api(resources, config);

  httplib::Server server;
  auto handler = [&api](const httplib::Request& req, httplib::Response& res) {
    auto out = api.handle(req.method, req.path, req.body);
    res.status = out.status;
    res.set_content(out.body, out.content_type);
  };
  server.Get(R"(/session/.*)", handler);
  server.Post(R"(/session(/.*)?)", handler);

  std::cerr << "listening on " << host << ":" << port << "\n";
  if (!server.listen(host, port)) {
    std::cerr << "error: cannot listen on " << host << ":" << port << "\n";
    return 1;
  }
  return 0;
}
