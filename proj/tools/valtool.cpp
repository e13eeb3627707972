#include "valtool/scenario.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

using namespace valtool;

namespace {

constexpr int kOk = 0, kFault = 1, kInvalid = 2;

std::optional<Scenario> load(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    std::cerr << path << ": cannot open\n";
    return std::nullopt;
  }
  std::stringstream ss;
  ss << in.rdbuf();
  try {
    return parse_scenario(ss.str());
  } catch (const ParseError& e) {
    std::cerr << path << ":" << e.line << ":" << e.column << ": error: " << e.what() << "\n";
  } catch (const Error& e) {
    std::cerr << path << ": error: " << e.what() << "\n";
  }
  return std::nullopt;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"valtool: valuations on two-dimensional regular local rings"};
  app.require_subcommand(1);

  std::string file;
  std::size_t depth = 4;
  std::uint64_t seed = 1;
  std::string bound = "12";
  std::string format = "text";

  auto* run = app.add_subcommand("run", "parse, validate and execute the [run] commands of a scenario");
  run->add_option("file", file, "scenario file")->required();
  run->add_option("--depth", depth, "alignment and presentation depth")->capture_default_str();
  run->add_option("--format", format, "report format")
      ->check(CLI::IsMember({"text", "csv", "dot"}))
      ->capture_default_str();
  run->add_option("--seed", seed, "seed for random samples")->capture_default_str();
  run->add_option("--value-bound", bound, "largest value of random test elements in splitting reports")
      ->capture_default_str();

  auto* check = app.add_subcommand("check", "parse and validate a scenario");
  check->add_option("file", file, "scenario file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? kOk : kFault;
  }

  auto s = load(file);
  if (!s) return kInvalid;

  CheckResult chk = check_scenario(*s);
  if (check->parsed()) {
    std::cout << render_text(chk.report);
    std::cout << (chk.ok ? "ok\n" : "invalid\n");
    return chk.ok ? kOk : kInvalid;
  }
  if (!chk.ok) {
    std::cerr << render_text(chk.report);
    return kInvalid;
  }

  RunOptions opt;
  opt.depth = depth;
  opt.seed = seed;
  try {
    opt.value_bound = parse_value(bound, {}).q0;
  } catch (const Error& e) {
    std::cerr << "--value-bound: " << e.what() << "\n";
    return kFault;
  }
  Format f = format == "csv" ? Format::Csv : (format == "dot" ? Format::Dot : Format::Text);
  try {
    Report rep = run_scenario(*s, opt);
    std::cout << render(rep, f);
    return rep.faulted() ? kFault : kOk;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kFault;
  }
}
