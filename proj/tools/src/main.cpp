#include <iostream>

#include "common.hpp"
#include "explorank/error.hpp"

int main(int argc, char** argv) {
  using namespace explorank;
  CLI::App app{"Surprise and interest ranking for attributed graph exploration", "explorank"};
  app.require_subcommand(1);
  int status = cli::ok;
  cli::register_precompute(app, status);
  cli::register_rank(app, status);
  cli::register_bench(app, status);
  cli::register_serve(app, status);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? cli::ok : cli::usage_error;
  } catch (const InvalidArgument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return cli::usage_error;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return cli::data_error;
  }
  return status;
}
