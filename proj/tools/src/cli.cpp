#include "rqtool/cli.hpp"

#include <iostream>

#include "common.hpp"
#include "rq/error.hpp"

namespace rqtool {

namespace {

int exit_code(rq::ErrorCode code) {
  using rq::ErrorCode;
  switch (code) {
    case ErrorCode::Io:
      return 3;
    case ErrorCode::NonHermitianSpectrum:
    case ErrorCode::DegenerateDenominator:
    case ErrorCode::UnityViolation:
    case ErrorCode::DivergedLoss:
    case ErrorCode::NonFinite:
      return 4;
    default:
      return 2;
  }
}

}  // namespace

int run(const std::vector<std::string>& args) {
  CLI::App app{"Riesz-quincunx smoothing, decomposition and segmentation", "rqtool"};
  app.set_version_flag("--version", version());
  app.require_subcommand(1);
  add_denoise(app);
  add_decompose(app);
  add_timeseries(app);
  add_train(app);
  add_segment(app);
  add_metrics(app);
  add_bank_inspect(app);
  add_synth(app);

  // CLI11 parses in reverse order when handed a vector.
  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 1;
  } catch (const rq::Error& e) {
    std::cerr << "rqtool: " << e.what() << "\n";
    return exit_code(e.code());
  } catch (const std::filesystem::filesystem_error& e) {
    std::cerr << "rqtool: Io: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "rqtool: error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}

int cli_main(int argc, char** argv) {
  std::vector<std::string> args;
  for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
  return run(args);
}

}  // namespace rqtool
