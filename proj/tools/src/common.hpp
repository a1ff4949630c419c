#pragma once

#include <chrono>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "explorank/graph.hpp"
#include "explorank/index_io.hpp"

namespace explorank::cli {

enum ExitCode : int { ok = 0, usage_error = 1, data_error = 2 };

/// Options shared by every command that loads a graph from tables.
struct GraphInputs {
  std::string nodes;
  std::string edges;
  std::string schema;
  std::vector<std::string> derive;
};

void add_graph_options(CLI::App& cmd, GraphInputs& in, bool required);

/// Loads the tables, appends derived features and reports drops on stderr.
AttributedGraph load_inputs(const GraphInputs& in);

/// Applies `name=weight` overrides on top of `base`, in schema order.
std::vector<double> parse_lambda(const GraphSchema& schema, const std::vector<std::string>& specs,
                                 std::vector<double> base);

/// Prints "<stage>  <ms>" to stderr when it goes out of scope.
class StageTimer {
 public:
  explicit StageTimer(std::string stage) : stage_(std::move(stage)), start_(std::chrono::steady_clock::now()) {}
  ~StageTimer();
  StageTimer(const StageTimer&) = delete;
  StageTimer& operator=(const StageTimer&) = delete;

 private:
  std::string stage_;
  std::chrono::steady_clock::time_point start_;
};

void register_precompute(CLI::App& app, int& status);
void register_rank(CLI::App& app, int& status);
void register_bench(CLI::App& app, int& status);
void register_serve(CLI::App& app, int& status);

}  // namespace explorank::cli
