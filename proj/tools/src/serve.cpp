#include <csignal>
#include <iostream>
#include <memory>

#include "common.hpp"
#include "explorank/binning.hpp"
#include "explorank/error.hpp"
#include "explorank/service.hpp"

namespace explorank::cli {

namespace {

struct ServeArgs {
  GraphInputs graph;
  std::string index;
  std::string host = "127.0.0.1";
  int port = 8080;
  std::size_t cap = RankConfig{}.candidate_cap;
  std::size_t cold_start = RankConfig{}.cold_start_visits;
  std::size_t window = 0;
  std::size_t k = ServiceOptions{}.default_k;
};

HttpServer* running = nullptr;

extern "C" void on_signal(int) {
  if (running) running->stop();
}

int run_serve(const ServeArgs& args) {
  std::shared_ptr<const AttributedGraph> graph;
  std::shared_ptr<const SurpriseIndex> index;
  if (!args.index.empty()) {
    StageTimer t("load index");
    auto bundle = read_index_file(args.index);
    graph = std::make_shared<const AttributedGraph>(std::move(bundle.graph));
    index = std::make_shared<const SurpriseIndex>(std::move(bundle.index));
  } else if (!args.graph.nodes.empty() && !args.graph.edges.empty() && !args.graph.schema.empty()) {
    auto g = std::make_shared<const AttributedGraph>(load_inputs(args.graph));
    StageTimer t("precompute");
    index = std::make_shared<const SurpriseIndex>(
        SurpriseIndex::build(*g, build_binnings(*g), std::vector<double>(g->feature_count(), 1.0)));
    graph = std::move(g);
  } else {
    throw InvalidArgument("serve needs --index or all of --nodes, --edges and --schema");
  }

  ServiceOptions options;
  options.rank.candidate_cap = args.cap;
  options.rank.cold_start_visits = args.cold_start;
  if (args.window > 0) options.window = args.window;
  options.default_k = args.k;
  ExplorationService service(graph, index, options);
  HttpServer server(service);
  const int port = server.bind(args.host, args.port);
  std::cerr << "listening on http://" << args.host << ':' << port << '\n';
  running = &server;
  std::signal(SIGINT, on_signal);
  std::signal(SIGTERM, on_signal);
  server.listen();
  running = nullptr;
  return ok;
}

}  // namespace

void register_serve(CLI::App& app, int& status) {
  auto args = std::make_shared<ServeArgs>();
  auto* cmd = app.add_subcommand("serve", "Serve the exploration HTTP API");
  cmd->add_option("--index", args->index, "Index file written by precompute")
      ->envname("EXPLORANK_INDEX")
      ->check(CLI::ExistingFile);
  add_graph_options(*cmd, args->graph, false);
  cmd->add_option("--host", args->host, "Listen address")->envname("EXPLORANK_HOST");
  cmd->add_option("--port", args->port, "Listen port, 0 picks a free one")
      ->envname("EXPLORANK_PORT")
      ->check(CLI::Range(0, 65535));
  cmd->add_option("--cap", args->cap, "Candidate cap, 0 for none")->envname("EXPLORANK_CAP");
  cmd->add_option("--cold-start", args->cold_start, "Visits before interest ranking activates")
      ->envname("EXPLORANK_COLD_START");
  cmd->add_option("--window", args->window, "Profile window in visits, 0 for the whole session")
      ->envname("EXPLORANK_WINDOW");
  cmd->add_option("--k", args->k, "Default k")->envname("EXPLORANK_K")->check(CLI::PositiveNumber);
  cmd->callback([args, &status] { status = run_serve(*args); });
}

}  // namespace explorank::cli
