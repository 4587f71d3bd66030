#include <iostream>

#include "CLI11.hpp"
#include "lsd_cli.hpp"

namespace {

using namespace lsd;
using namespace lsd::cli;

struct Flags {
  std::string input, family, params, emit, out, format = "text";
  std::size_t grid = 0;
};

StateDocument load(const Flags& f) {
  const ParamMap overrides = parse_params(f.params);
  if (!f.input.empty() && !f.family.empty()) fail(ErrorKind::ParseError, "give either --input or --family, not both");
  if (!f.input.empty()) return load_document(read_json(f.input), overrides);
  if (f.family.empty()) fail(ErrorKind::ParseError, "a state needs --input or --family");
  return family_document(f.family, Json(), overrides);
}

int run(const std::string& command, const Flags& f) {
  const bool structured = f.format == "structured";
  if (command == "analyze") {
    StateDocument doc = load(f);
    render(analyze(doc), structured, std::cout);
    return 0;
  }
  if (command == "decompose") {
    StateDocument doc = load(f);
    const LSDecomposition dec = decompose_document(doc);
    const Json report = decomposition_json(doc, dec);
    if (!f.emit.empty()) emit(f.emit, doc, dec, report);
    render(report, structured, std::cout);
    return 0;
  }
  if (command == "verify") {
    Json report;
    if (!f.input.empty() && std::filesystem::is_directory(f.input)) {
      report = verify_emitted(f.input);
    } else {
      StateDocument doc = load(f);
      report = verify(doc, decompose_document(doc), f.grid);
    }
    render(report, structured, std::cout);
    return report["result"] == "PASS" ? 0 : 4;
  }
  // sweep
  if (f.family.empty()) fail(ErrorKind::ParseError, "sweep needs --family");
  const SweepSpec spec = parse_sweep(f.family, f.params);
  if (f.out.empty()) {
    sweep(spec, std::cout);
  } else {
    std::ofstream file(f.out);
    if (!file) fail(ErrorKind::ParseError, "cannot write " + f.out);
    sweep(spec, file);
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Lewenstein-Sanpera decompositions, entanglement measures and an optimality oracle"};
  app.require_subcommand(1);
  Flags f;
  const auto state_flags = [&](CLI::App* sub) {
    sub->add_option("--input", f.input, "state document (JSON); for verify also an --emit directory");
    sub->add_option("--family", f.family, "family tag: bd22 icd bd23 werner isotropic locc1 locc3 horodecki33 multi_iso");
    sub->add_option("--params", f.params, "k=v,... (sweep: one name=start:stop:steps)");
    sub->add_option("--format", f.format, "output format")->check(CLI::IsMember({"text", "structured"}));
  };
  auto* analyze = app.add_subcommand("analyze", "dims, spectrum, PPT, concurrence and bounds");
  auto* decompose = app.add_subcommand("decompose", "closed-form decomposition");
  auto* verify = app.add_subcommand("verify", "closed form against the oracle");
  auto* sweep = app.add_subcommand("sweep", "one-parameter sweep to CSV");
  for (auto* sub : {analyze, decompose, verify, sweep}) state_flags(sub);
  decompose->add_option("--emit", f.emit, "directory for rho/rho_s/rho_e/decomposition JSON");
  verify->add_option("--grid", f.grid, "grid points per axis (0 = defaults)");
  sweep->add_option("--out", f.out, "CSV path (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }
  try {
    return run(app.get_subcommands().front()->get_name(), f);
  } catch (const lsd::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return exit_code(e.kind());
  }
}
