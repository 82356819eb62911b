#include "cli_common.hpp"
#include "commands.hpp"

#include "sepals/error.hpp"

#include <algorithm>
#include <iostream>

namespace {

int report(int code, const char* name, const std::string& message) {
  nlohmann::ordered_json err;
  err["error"] = name;
  err["message"] = message;
  err["exit_code"] = code;
  std::cerr << err.dump() << '\n';
  return code;
}

}  // namespace

int main(int argc, char** argv) {
  using namespace sepals;
  using namespace sepals::cli;

  CLI::App app{"Extreme partial least squares with shrinkage priors"};
  app.set_version_flag("--version", SEPALS_VERSION);
  app.require_subcommand(1);
  app.footer("All flags may also be supplied through --config <file.json>; explicit flags win.");
  register_commands(app);

  try {
    std::vector<std::string> args = expand_config(argc, argv);
    std::reverse(args.begin(), args.end());
    app.parse(args);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsage;
  } catch (const UsageError& e) {
    return report(kUsage, "UsageError", e.what());
  } catch (const IoError& e) {
    return report(kIo, "IoError", e.what());
  } catch (const DomainError& e) {
    return report(kUsage, e.name(), e.what());
  } catch (const BadThreshold& e) {
    return report(kUsage, e.name(), e.what());
  } catch (const Error& e) {
    return report(kNumerical, e.name(), e.what());
  } catch (const std::filesystem::filesystem_error& e) {
    return report(kIo, "IoError", e.what());
  }
  return kOk;
}
