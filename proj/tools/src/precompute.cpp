#include <iostream>
#include <memory>

#include "common.hpp"
#include "explorank/binning.hpp"
#include "explorank/surprise_index.hpp"

namespace explorank::cli {

namespace {

struct PrecomputeArgs {
  GraphInputs graph;
  std::string out;
  std::string binnings_out;
  std::vector<std::string> lambda;
  unsigned parallel = 1;
  bool no_local = false;
  std::size_t max_candidates = MdlOptions{}.max_candidates;
};

int run_precompute(const PrecomputeArgs& args) {
  const auto g = load_inputs(args.graph);
  const auto lambda = parse_lambda(g.schema(), args.lambda, std::vector<double>(g.feature_count(), 1.0));

  std::vector<Binning> binnings;
  {
    StageTimer t("binning");
    binnings = build_binnings(g, MdlOptions{args.max_candidates});
  }
  for (const auto& b : binnings) std::cerr << g.schema()[b.feature()].name << ": " << b.bin_count() << " bins\n";

  SurpriseIndexOptions options;
  options.store_local = !args.no_local;
  options.threads = args.parallel;
  auto index = [&] {
    StageTimer t("surprise");
    return SurpriseIndex::build(g, std::move(binnings), lambda, options);
  }();
  {
    StageTimer t("write");
    write_index_file(args.out, g, index);
    if (!args.binnings_out.empty()) write_binnings_file(args.binnings_out, g, index);
  }
  std::cerr << "wrote " << index.node_count() << " node records to " << args.out << '\n';
  return ok;
}

}  // namespace

void register_precompute(CLI::App& app, int& status) {
  auto args = std::make_shared<PrecomputeArgs>();
  auto* cmd = app.add_subcommand("precompute", "Build binnings and the surprise index for a graph");
  add_graph_options(*cmd, args->graph, true);
  cmd->add_option("--out", args->out, "Index file to write")->required();
  cmd->add_option("--binnings-out", args->binnings_out, "Also write binnings and global histograms as JSON");
  cmd->add_option("--lambda", args->lambda, "Feature weight override name=weight (repeatable)");
  cmd->add_option("--parallel", args->parallel, "Worker threads")->check(CLI::Range(1u, 256u));
  cmd->add_option("--max-candidates", args->max_candidates, "MDL candidate cut limit per feature")
      ->check(CLI::PositiveNumber);
  cmd->add_flag("--no-local", args->no_local, "Do not store local distributions in the index");
  cmd->callback([args, &status] { status = run_precompute(*args); });
}

}  // namespace explorank::cli
