#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <json.hpp>

#include "secrd/commands.hpp"

namespace {

struct Invocation {
  std::string config_path;
  std::string preset;
  std::uint64_t seed = 0;
  std::string out;
};

// Loads the config document; --seed and --out are the only values a flag may replace.
nlohmann::json load_document(const Invocation& inv, const CLI::App& sub) {
  nlohmann::json doc = nlohmann::json::object();
  if (!inv.config_path.empty()) {
    std::ifstream f(inv.config_path);
    if (!f) throw secrd::ConfigError("cannot read config " + inv.config_path);
    try {
      doc = nlohmann::json::parse(f);
    } catch (const nlohmann::json::parse_error& e) {
      throw secrd::ConfigError("config " + inv.config_path + " is not valid JSON: " + e.what());
    }
  }
  if (!inv.preset.empty()) {
    if (doc.is_object() && doc.contains("preset") && doc["preset"] != inv.preset)
      throw secrd::ConfigError("--preset conflicts with the config's preset");
    doc["preset"] = inv.preset;
  }
  if (sub.count("--seed")) doc["seed"] = inv.seed;
  if (sub.count("--out")) doc["out"] = inv.out;
  return doc;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Secrecy and distortion exponent toolkit for Shannon cipher systems"};
  app.require_subcommand(1);
  Invocation inv;
  for (const std::string& name : secrd::kCommandNames) {
    CLI::App* sub = app.add_subcommand(name);
    sub->add_option("config", inv.config_path, "JSON run configuration")->check(CLI::ExistingFile);
    sub->add_option("--preset", inv.preset, "start from a named configuration")
        ->check(CLI::IsMember(secrd::kPresetNames));
    sub->add_option("--seed", inv.seed, "master seed");
    sub->add_option("--out", inv.out, "output path prefix");
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }
  CLI::App* sub = app.get_subcommands().front();
  if (inv.config_path.empty() && inv.preset.empty()) {
    std::cerr << "config error: give a config file or --preset\n";
    return 1;
  }
  nlohmann::json doc;
  try {
    doc = load_document(inv, *sub);
  } catch (const secrd::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 1;
  }
  return secrd::run_command(sub->get_name(), doc, {std::cout, std::cerr});
}
