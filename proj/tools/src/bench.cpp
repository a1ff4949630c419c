#include <fstream>
#include <iostream>
#include <memory>

#include "common.hpp"
#include "explorank/error.hpp"
#include "explorank/synthetic.hpp"

namespace explorank::cli {

namespace {

struct BenchArgs {
  std::vector<std::string> synthetic;
  std::string order = "both";
  std::size_t repeats = BenchConfig{}.repeats;
  std::size_t k = BenchConfig{}.k;
  std::uint64_t seed = BenchConfig{}.seed;
  std::string out;
};

std::vector<std::size_t> parse_sizes(const std::string& list, const char* what) {
  std::vector<std::size_t> out;
  for (const auto& item : CLI::detail::split(list, ',')) {
    try {
      std::size_t used = 0;
      const auto v = std::stoull(item, &used);
      if (used != item.size() || v == 0) throw std::invalid_argument(item);
      out.push_back(static_cast<std::size_t>(v));
    } catch (const std::logic_error&) {
      throw InvalidArgument(std::string(what) + " list entry '" + item + "' is not a positive integer");
    }
  }
  if (out.empty()) throw InvalidArgument(std::string(what) + " list is empty");
  return out;
}

int run_bench(const BenchArgs& args) {
  BenchConfig config;
  if (!args.synthetic.empty()) {
    config.neighborhoods = parse_sizes(args.synthetic.at(0), "neighborhood");
    config.features = parse_sizes(args.synthetic.at(1), "feature");
  }
  if (args.order == "both") {
    config.orders = {WalkOrder::rand, WalkOrder::hop};
  } else {
    config.orders = {parse_walk_order(args.order)};
  }
  config.repeats = args.repeats;
  config.k = args.k;
  config.seed = args.seed;

  std::ofstream file;
  if (!args.out.empty()) {
    file.open(args.out);
    if (!file) throw Error("cannot write " + args.out);
  }
  std::ostream& out = args.out.empty() ? std::cout : file;
  out << "n,f,order,mean_ms,stdev_ms,calls,js_per_call\n";
  const auto rows = explorank::run_bench(config, [&](const BenchRow& r) {
    out << r.neighborhood << ',' << r.features << ',' << to_string(r.order) << ',' << r.mean_ms << ','
        << r.stdev_ms << ',' << r.calls << ',' << r.js_per_call << '\n'
        << std::flush;
  });
  for (const auto& f : fit_bench(rows)) {
    out << "# fit axis=" << f.axis << " order=" << to_string(f.order)
        << (f.axis == "neighbors" ? " f=" : " n=") << f.fixed << " slope=" << f.fit.slope
        << " intercept=" << f.fit.intercept << " r2=" << f.fit.r_squared << '\n';
  }
  bool counts_ok = true;
  for (const auto& r : rows) {
    if (!r.js_count_consistent || r.js_per_call != r.neighborhood * r.features) counts_ok = false;
  }
  out << "# js_count " << (counts_ok ? "n*f" : "MISMATCH") << '\n';
  return ok;
}

}  // namespace

void register_bench(CLI::App& app, int& status) {
  auto args = std::make_shared<BenchArgs>();
  auto* cmd = app.add_subcommand("bench", "Time warm rankings on synthetic neighborhoods");
  cmd->add_option("--synthetic", args->synthetic, "Neighborhood sizes and feature counts, e.g. 1000,2000 8")
      ->expected(2);
  cmd->add_option("--order", args->order, "Focus walk: rand, hop or both")
      ->check(CLI::IsMember({"rand", "hop", "both"}));
  cmd->add_option("--repeats", args->repeats, "Timed calls per configuration")->check(CLI::PositiveNumber);
  cmd->add_option("--k", args->k, "Neighbors returned per call")->check(CLI::PositiveNumber);
  cmd->add_option("--seed", args->seed, "Generator seed");
  cmd->add_option("--out", args->out, "Write the table here instead of stdout");
  cmd->callback([args, &status] { status = run_bench(*args); });
}

}  // namespace explorank::cli
