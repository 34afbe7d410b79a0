#include <CLI11.hpp>
#include <fstream>
#include <iostream>
#include <sstream>

#include "kvwave/config.hpp"
#include "kvwave/error.hpp"

int main(int argc, char** argv) {
  CLI::App app{"kvwavelab: energy, resolvent and quasimode experiments for a damped coupled wave system"};
  std::string command, config_path;
  std::vector<std::string> sets;
  app.add_option("command", command, "simulate | scan | quasimode | audit | spectrum | stationary")->required();
  app.add_option("--config", config_path, "key=value or JSON config file");
  app.add_option("--set", sets, "override one key, key=value")->take_all();
  CLI11_PARSE(app, argc, argv);

  std::string text;
  if (!config_path.empty()) {
    std::ifstream in(config_path);
    if (!in) {
      std::cerr << "error: cannot read " << config_path << '\n';
      return 2;
    }
    std::stringstream ss;
    ss << in.rdbuf();
    text = ss.str();
  }

  kvwave::Overrides overrides;
  for (const auto& s : sets) {
    auto eq = s.find('=');
    if (eq == std::string::npos) {
      std::cerr << "error: --set expects key=value, got '" << s << "'\n";
      return 2;
    }
    overrides.emplace_back(s.substr(0, eq), s.substr(eq + 1));
  }

  kvwave::RunConfig config;
  try {
    kvwave::Overrides all = overrides;
    all.emplace_back("command", command);
    config = kvwave::parse_config(text, all);
    if (text.find("command") != std::string::npos) {
      // a command named in the file has to agree with the positional one
      kvwave::RunConfig from_file = kvwave::parse_config(text, overrides);
      if (from_file.command != config.command)
        throw kvwave::Error(kvwave::ErrorCode::ValidationError,
                            "command: config file says '" + kvwave::to_string(from_file.command) + "'");
    }
  } catch (const kvwave::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return kvwave::run(config, std::cout);
}
