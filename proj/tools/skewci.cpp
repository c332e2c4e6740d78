#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

#include "skewci/cli.hpp"

int main(int argc, char** argv) {
  namespace sc = skewci::cli;
  CLI::App app{"Cohomology operators, Ext, supports and Poincare series over skew complete intersections"};
  std::string command, config, cache, out, window, semantics;
  app.add_option("command", command, "Command; overrides the config's command field")
      ->check(CLI::IsMember(sc::commands()));
  app.add_option("--config", config, "Job config (JSON)")->required()->check(CLI::ExistingFile);
  app.add_option("--cache", cache, "Resolution cache directory");
  app.add_option("--out", out, "Write the JSON report here");
  app.add_option("--window", window, "Window overrides, e.g. c=8,D=10,h=3");
  app.add_option("--semantics", semantics, "Support semantics")->check(CLI::IsMember({"fiber", "full"}));
  CLI11_PARSE(app, argc, argv);

  sc::RunResult res;
  try {
    std::ifstream in(config);
    std::stringstream ss;
    ss << in.rdbuf();
    sc::JobConfig cfg = sc::parse_config(ss.str());
    if (!command.empty()) cfg.command = command;
    if (!cache.empty()) cfg.cache = cache;
    if (!out.empty()) cfg.out = out;
    if (!semantics.empty()) cfg.semantics = semantics;
    if (!window.empty()) sc::apply_window(cfg.window, window);
    res = sc::run(cfg);
    if (!cfg.out.empty()) {
      std::ofstream o(cfg.out);
      o << res.report.dump(2) << '\n';
      if (!o) {
        std::cerr << "cannot write " << cfg.out << '\n';
        return 2;
      }
    }
  } catch (const sc::ConfigError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  (res.status ? std::cerr : std::cout) << res.text;
  return res.status;
}
