#include "common.hpp"

#include <cstdio>
#include <iostream>

#include "explorank/derived_features.hpp"
#include "explorank/error.hpp"

namespace explorank::cli {

StageTimer::~StageTimer() {
  const auto ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start_).count();
  std::fprintf(stderr, "%-12s %10.2f ms\n", stage_.c_str(), ms);
}

void add_graph_options(CLI::App& cmd, GraphInputs& in, bool required) {
  auto* nodes = cmd.add_option("--nodes", in.nodes, "Node table: id,label,<features...>")->check(CLI::ExistingFile);
  auto* edges = cmd.add_option("--edges", in.edges, "Edge table: src,dst")->check(CLI::ExistingFile);
  auto* schema = cmd.add_option("--schema", in.schema, "Schema JSON {\"features\":[{name,kind}]}")
                     ->check(CLI::ExistingFile);
  cmd.add_option("--derive", in.derive, "Derived features to append: degree, pagerank")
      ->delimiter(',')
      ->check(CLI::IsMember({"degree", "pagerank"}));
  if (required) {
    nodes->required();
    edges->required();
    schema->required();
  } else {
    nodes->envname("EXPLORANK_NODES");
    edges->envname("EXPLORANK_EDGES");
    schema->envname("EXPLORANK_SCHEMA");
  }
}

AttributedGraph load_inputs(const GraphInputs& in) {
  LoadResult loaded = [&] {
    StageTimer t("load");
    return load_graph_files(in.edges, in.nodes, load_schema_file(in.schema));
  }();
  const auto& r = loaded.report;
  std::cerr << "nodes " << loaded.graph.node_count() << ", edges " << loaded.graph.edge_count()
            << ", self-loops dropped " << r.self_loops_dropped << ", duplicate edges " << r.duplicate_edges
            << ", isolated nodes dropped " << r.isolated_dropped.size() << '\n';
  if (in.derive.empty()) return std::move(loaded.graph);
  StageTimer t("derive");
  return with_derived_features(loaded.graph, in.derive);
}

std::vector<double> parse_lambda(const GraphSchema& schema, const std::vector<std::string>& specs,
                                 std::vector<double> base) {
  for (const auto& spec : specs) {
    const auto eq = spec.find('=');
    if (eq == std::string::npos) throw InvalidArgument("--lambda expects name=weight, got '" + spec + "'");
    const auto name = spec.substr(0, eq);
    const auto j = schema.find(name);
    if (!j) throw InvalidArgument("--lambda names unknown feature '" + name + "'");
    try {
      std::size_t used = 0;
      base[*j] = std::stod(spec.substr(eq + 1), &used);
      if (used != spec.size() - eq - 1) throw std::invalid_argument("trailing");
    } catch (const std::logic_error&) {
      throw InvalidArgument("--lambda weight for '" + name + "' is not a number");
    }
  }
  return base;
}

}  // namespace explorank::cli
