#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>

#include <nlohmann/json.hpp>

#include "common.hpp"
#include "explorank/error.hpp"
#include "explorank/ranking.hpp"
#include "explorank/service.hpp"

namespace explorank::cli {

namespace {

struct RankArgs {
  std::string index;
  std::string focus;
  std::size_t k = 10;
  std::string mode = "combined";
  std::vector<std::string> visits;
  std::vector<std::string> exclude;
  std::vector<std::string> lambda;
  std::optional<double> w_s;
  std::string restore;
  std::string session = "cli";
  std::string precision = "6";
  std::size_t cap = RankConfig{}.candidate_cap;
  bool json = false;
};

void print_table(const AttributedGraph& g, const RankResult& result, ScoreFormat fmt) {
  const char* num = fmt.full ? "%22.17g" : "%10.6f";
  const auto cell = [&](double v) { std::printf(num, fmt(v)); };
  std::printf("# mode %s%s, %zu candidates\n", std::string(to_string(result.used)).c_str(),
              result.cold_start ? " (cold start)" : "", result.candidates_scored);
  std::printf("%-4s %-16s %-24s %6s %*s %*s %*s\n", "rank", "id", "label", "degree", fmt.full ? 22 : 10, "s",
              fmt.full ? 22 : 10, "r", fmt.full ? 22 : 10, "t");
  std::size_t rank = 0;
  for (const auto& n : result.neighbors) {
    std::printf("%-4zu %-16s %-24s %6zu ", ++rank, g.external_id(n.node).c_str(), g.label(n.node).c_str(),
                g.degree(n.node));
    cell(n.surprise);
    std::printf(" ");
    if (n.interest) {
      cell(*n.interest);
    } else {
      std::printf("%*s", fmt.full ? 22 : 10, "-");
    }
    std::printf(" ");
    cell(n.score);
    std::printf("\n");
  }
}

int run_rank(const RankArgs& args) {
  const auto bundle = read_index_file(args.index);
  const auto& g = bundle.graph;
  const auto& index = bundle.index;
  const ScoreFormat fmt{args.precision == "full"};

  SessionProfile profile = [&] {
    if (args.restore.empty()) {
      SessionProfile p(args.session, index.binnings());
      p.set_lambda(index.lambda());
      return p;
    }
    std::ifstream in(args.restore);
    if (!in) throw Error("cannot open session file " + args.restore);
    return restore_session(nlohmann::ordered_json::parse(in), g, index.binnings());
  }();
  if (!args.lambda.empty()) profile.set_lambda(parse_lambda(g.schema(), args.lambda, profile.lambda()));
  if (args.w_s) profile.set_blend({*args.w_s, 1.0 - *args.w_s});
  for (const auto& v : args.visits) profile.record_visit(g, g.require(v));

  RankRequest request;
  request.focus = g.require(args.focus);
  request.k = args.k;
  request.mode = parse_rank_mode(args.mode);
  for (const auto& id : args.exclude) request.exclude.push_back(g.require(id));

  RankConfig config;
  config.candidate_cap = args.cap;
  const Ranker ranker(g, index, config);
  const auto result = ranker.rank_neighbors(profile, request);
  if (args.json) {
    std::cout << rank_result_json(g, result, profile.id(), request.focus, fmt).dump() << '\n';
  } else {
    print_table(g, result, fmt);
  }
  return ok;
}

}  // namespace

void register_rank(CLI::App& app, int& status) {
  auto args = std::make_shared<RankArgs>();
  auto* cmd = app.add_subcommand("rank", "Rank the neighbors of a focus node");
  cmd->add_option("--index", args->index, "Index file written by precompute")->required()->check(CLI::ExistingFile);
  cmd->add_option("--focus", args->focus, "Focus node id")->required();
  cmd->add_option("--k", args->k, "Number of neighbors to return")->check(CLI::PositiveNumber);
  cmd->add_option("--mode", args->mode, "surprise, interest or combined")
      ->check(CLI::IsMember({"surprise", "interest", "combined"}));
  cmd->add_option("--visits", args->visits, "Visited node ids seeding a throwaway session")->delimiter(',');
  cmd->add_option("--exclude", args->exclude, "Node ids already displayed")->delimiter(',');
  cmd->add_option("--lambda", args->lambda, "Feature weight override name=weight (repeatable)");
  cmd->add_option("--w-s", args->w_s, "Surprise blend weight; w_r = 1 - w_s")->check(CLI::Range(0.0, 1.0));
  cmd->add_option("--restore", args->restore, "Session snapshot to start from")->check(CLI::ExistingFile);
  cmd->add_option("--session", args->session, "Session id reported in JSON output");
  cmd->add_option("--cap", args->cap, "Candidate cap, 0 for none");
  cmd->add_option("--precision", args->precision, "6 or full")->check(CLI::IsMember({"6", "full"}));
  cmd->add_flag("--json", args->json, "Print the service's JSON response body");
  cmd->callback([args, &status] { status = run_rank(*args); });
}

}  // namespace explorank::cli
