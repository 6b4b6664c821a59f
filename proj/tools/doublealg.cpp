#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

#include "doublealg.hpp"

namespace {

int usage_error(const std::string& msg) {
  std::cerr << "doublealg: " << msg << "\n";
  return 2;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exact verification of double Lie algebroid structures"};
  std::string action, noun, path, format = "text";
  doublealg::RunOptions opt;
  std::size_t split = 0;

  std::string commands;
  for (const auto& c : doublealg::known_commands()) commands += "\n  " + c;
  app.footer("Commands:" + commands);
  app.set_version_flag("--version", std::string("doublealg ") + doublealg::kToolVersion);
  app.add_option("action", action, "check, build, extract or dualize")->required();
  app.add_option("object", noun, "what to check or build")->required();
  app.add_option("model", path, "model file, - for stdin")->required();
  app.add_option("--format", format, "report format")->check(CLI::IsMember({"text", "json"}));
  app.add_option("--seed", opt.seed, "seed for randomized oracles");
  app.add_flag("--timing", opt.timing, "record per-check wall time");
  auto* target = app.add_option("--target", "block name to act on (default: last block of the kind)");
  auto* split_opt = app.add_option("--split", split, "rank of A for extract matched");

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }
  if (*target) opt.target = target->as<std::string>();
  if (*split_opt) opt.split = split;

  std::string text;
  if (path == "-") {
    std::ostringstream ss;
    ss << std::cin.rdbuf();
    text = ss.str();
  } else {
    std::ifstream in(path, std::ios::binary);
    if (!in) return usage_error("cannot read '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    text = ss.str();
  }

  doublealg::Report report;
  try {
    report = doublealg::run(action + " " + noun, text, opt);
  } catch (const doublealg::ModelError& e) {
    return usage_error(path + ":" + std::to_string(e.line()) + ":" + std::to_string(e.column()) + ": " + e.what());
  } catch (const doublealg::Error& e) {
    return usage_error(e.what());
  }
  std::cout << (format == "json" ? doublealg::emit_json(report) : doublealg::emit_text(report));
  return report.pass() ? 0 : 1;
}
