#include <functional>
#include <iostream>
#include <map>
#include <sstream>

#include <CLI11.hpp>

#include "latlab/commands.hpp"

namespace {

struct NullBuf : std::streambuf {
  int overflow(int c) override { return c; }
};

void emit_error(const char* kind, const std::exception& e) {
  std::cerr << "{\"error\":\"" << kind << "\",\"message\":\"" << e.what()
            << "\"}\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"latlab: semi-stable limit laws of lattice random-exponential sums"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_dir;
  bool quiet = false;
  app.add_option("--config", config_path, "experiment config (JSON)")->required();
  app.add_option("--out", out_dir, "output directory (default: config's output)");
  app.add_flag("--quiet", quiet, "suppress the summary log");

  using Command = void (*)(const latlab::ExperimentConfig&, const std::string&,
                           std::ostream&);
  std::map<std::string, Command> dispatch{
      {"analyze", latlab::cmd_analyze},
      {"verify-conditions", latlab::cmd_verify_conditions},
      {"compare-cf", latlab::cmd_compare_cf},
      {"largedev", latlab::cmd_largedev},
      {"limit", latlab::cmd_limit},
      {"sample", latlab::cmd_sample},
  };
  for (const auto& [name, fn] : dispatch) {
    app.add_subcommand(name)->fallthrough();
  }

  CLI11_PARSE(app, argc, argv);
  const std::string cmd = app.get_subcommands().front()->get_name();

  NullBuf null_buf;
  std::ostream null_stream(&null_buf);
  std::ostream& log = quiet ? null_stream : std::cout;

  try {
    latlab::ExperimentConfig cfg = latlab::ExperimentConfig::from_file(config_path);
    if (out_dir.empty()) out_dir = cfg.output;
    dispatch.at(cmd)(cfg, out_dir, log);
  } catch (const latlab::ConfigInvalid& e) {
    emit_error("config", e);
    return 2;
  } catch (const latlab::CapExceeded& e) {
    emit_error("cap", e);
    return 4;
  } catch (const latlab::Error& e) {
    emit_error("numeric", e);
    return 3;
  }
  return 0;
}
