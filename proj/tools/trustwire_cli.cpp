// trustwire: command-line front end for keys, scenarios and the general-user flow.

#include <filesystem>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "trustwire/simharness.hpp"

namespace tw = trustwire;

namespace {

void print_outcomes(const std::vector<tw::ExchangeOutcome>& outcomes, const std::string& format) {
  if (format == "table" || format == "both") std::cout << tw::format_table(outcomes);
  if (format == "both") std::cout << '\n';
  if (format == "lines" || format == "both") std::cout << tw::format_lines(outcomes);
}

int report(const std::vector<tw::ExchangeOutcome>& outcomes, const std::string& format) {
  print_outcomes(outcomes, format);
  int unmet = 0;
  for (const auto& o : outcomes) {
    if (!o.expectation_met) {
      std::cerr << "row " << o.row << " (" << o.source << "->" << o.target << " " << o.code
                << "): expectation not met\n";
      ++unmet;
    }
  }
  return unmet == 0 ? 0 : 1;
}

void write_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw tw::ConfigError("cannot write " + path.string());
  out << text;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Trust-graded information sharing between agencies"};
  app.require_subcommand(1);

  // keygen
  auto* keygen = app.add_subcommand("keygen", "Generate a deterministic key pair");
  unsigned bits = tw::kDefaultKeyBits;
  std::uint64_t seed = 0;
  std::string out_prefix;
  keygen->add_option("--bits", bits, "Modulus size in bits (even, >= 32)")->capture_default_str();
  keygen->add_option("--seed", seed, "Generator seed")->required();
  keygen->add_option("--out", out_prefix, "Write <prefix>.pub and <prefix>.key instead of printing");

  // run
  auto* run = app.add_subcommand("run", "Run a scenario file");
  std::string scenario_path;
  std::string format = "table";
  run->add_option("--scenario", scenario_path, "Scenario file")->required()->check(CLI::ExistingFile);
  run->add_option("--format", format, "table, lines or both")
      ->check(CLI::IsMember({"table", "lines", "both"}))
      ->capture_default_str();

  // table1
  auto* table1 = app.add_subcommand("table1", "Run the built-in Table 1 scenario");
  table1->add_option("--format", format, "table, lines or both")
      ->check(CLI::IsMember({"table", "lines", "both"}))
      ->capture_default_str();

  // inject
  auto* inject = app.add_subcommand("inject", "Run a scenario with one fault injected");
  std::string fault_spec;
  std::size_t fault_row = 0;
  inject->add_option("--scenario", scenario_path, "Scenario file (default: built-in Table 1)")
      ->check(CLI::ExistingFile);
  inject->add_option("--row", fault_row, "0-based script row")->required();
  inject->add_option("--fault", fault_spec,
                     "flip-byte:K[:request|response][:wire|envelope], swap:J, replay or wrong-target-key")
      ->required();
  inject->add_option("--format", format, "table, lines or both")
      ->check(CLI::IsMember({"table", "lines", "both"}))
      ->capture_default_str();

  // register-user
  auto* reg = app.add_subcommand("register-user", "Register a general user with an agency");
  std::string agency, user, out_path;
  reg->add_option("--scenario", scenario_path, "Scenario file holding the agency")->required()->check(CLI::ExistingFile);
  reg->add_option("--agency", agency, "Agency id")->required();
  reg->add_option("--user", user, "New user id")->required();
  reg->add_option("--out", out_path, "Where to write the updated scenario (default: in place)");

  // query
  auto* query = app.add_subcommand("query", "Query an agency as a general user");
  std::string password, code, kind = "items";
  query->add_option("--scenario", scenario_path, "Scenario file holding the agency")->required()->check(CLI::ExistingFile);
  query->add_option("--agency", agency, "Agency id")->required();
  query->add_option("--user", user, "User id")->required();
  query->add_option("--password", password, "Password issued at registration")->required();
  query->add_option("--code", code, "Terrorist code")->required();
  query->add_option("--kind", kind, "items or activities")
      ->check(CLI::IsMember({"items", "activities"}))
      ->capture_default_str();

  CLI11_PARSE(app, argc, argv);

  try {
    if (*keygen) {
      const tw::KeyPair pair = tw::generate_keypair(bits, seed);
      if (out_prefix.empty()) {
        std::cout << tw::to_key_file(pair.pub) << tw::to_key_file(pair.priv);
      } else {
        write_file(out_prefix + ".pub", tw::to_key_file(pair.pub));
        write_file(out_prefix + ".key", tw::to_key_file(pair.priv));
        std::cout << "wrote " << out_prefix << ".pub and " << out_prefix << ".key\n";
      }
      return 0;
    }
    if (*run) return report(tw::run_scenario(tw::load_scenario_file(scenario_path)), format);
    if (*table1) return report(tw::run_scenario(tw::canonical_table1_scenario()), format);
    if (*inject) {
      tw::Scenario base =
          scenario_path.empty() ? tw::canonical_table1_scenario() : tw::load_scenario_file(scenario_path);
      return report(tw::run_scenario(tw::inject_fault(std::move(base), fault_row, tw::Fault::parse(fault_spec))),
                    format);
    }
    if (*reg) {
      tw::Scenario scenario = tw::load_scenario_file(scenario_path);
      tw::Network network(scenario);
      const tw::AgencyId id(agency);
      tw::AgencyNode& node = network.node(id);
      const std::string issued = node.register_user(user);
      scenario.agency(id)->users.push_back(node.accounts().find(user)->second);
      tw::save_scenario_file(scenario, out_path.empty() ? scenario_path : out_path);
      std::cout << "user " << user << " registered with " << agency << "; password: " << issued << '\n';
      return 0;
    }
    if (*query) {
      tw::Network network(tw::load_scenario_file(scenario_path));
      const auto results =
          network.node(tw::AgencyId(agency)).user_query(user, password, code, tw::parse_query_kind(kind));
      for (const auto& r : results) std::cout << r << '\n';
      return 0;
    }
  } catch (const tw::Error& e) {
    std::cerr << tw::error_class_name(e.error_class()) << ": " << e.what() << '\n';
    return 2;
  }
  return 0;
}
