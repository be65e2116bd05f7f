// qsym: symmetry detection and breaking for QBF in prenex CNF.

#include <CLI11.hpp>
#include <json.hpp>

#include <fstream>
#include <functional>
#include <iostream>
#include <optional>

#include "qsym/benchgen.hpp"
#include "qsym/breaker.hpp"
#include "qsym/detect.hpp"
#include "qsym/error.hpp"
#include "qsym/qdimacs.hpp"
#include "qsym/strategy.hpp"

namespace {

enum Exit { kOk = 0, kUsage = 1, kInput = 2, kCap = 3, kVerifyFailed = 10 };

void write_text(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw qsym::Error(qsym::ErrorKind::Input, "cannot write '" + path + "'");
  out << text;
}

qsym::QbfInstance load(const std::string& path) {
  qsym::QbfInstance instance = qsym::parse_qdimacs(qsym::read_text(path));
  for (const auto& w : instance.warnings) std::cerr << "warning: " << w << '\n';
  return instance;
}

std::vector<qsym::SignedPermutation> generators_for(const qsym::QbfInstance& instance,
                                                    const std::string& path) {
  if (!path.empty()) {
    auto gens = qsym::parse_generators(qsym::read_text(path), instance.num_vars);
    qsym::GeneratorSet checked(instance.prefix, gens);
    return checked.generators();
  }
  qsym::Detection d = qsym::detect_symmetries(instance);
  for (const auto& w : d.warnings) std::cerr << "warning: " << w << '\n';
  return d.generators;
}

struct BreakArgs {
  std::string input = "-";
  bool exists = false, forall = false, both = false;
  std::string generators;
  std::size_t products = 1;
  bool full_group = false;
  bool no_compress = false;
  std::string output = "-";
  std::string dnf;
};

qsym::Selection selection_of(std::size_t products, bool full_group) {
  qsym::Selection s;
  if (full_group) s.policy = qsym::Selection::Policy::FullGroup;
  else if (products > 1) {
    s.policy = qsym::Selection::Policy::Products;
    s.max_length = products;
  }
  return s;
}

int run_break(const BreakArgs& a) {
  const int modes = int(a.exists) + int(a.forall) + int(a.both);
  if (modes != 1) {
    std::cerr << "error: choose exactly one of --exists, --forall, --both\n";
    return kUsage;
  }
  if ((a.forall || a.both) && a.dnf.empty()) {
    std::cerr << "error: --forall and --both need --dnf PATH for the cube sidecar\n";
    return kUsage;
  }
  const auto instance = load(a.input);
  const auto gens = generators_for(instance, a.generators);
  qsym::EncodeOptions opts;
  opts.compress_identity = !a.no_compress;
  opts.selection = selection_of(a.products, a.full_group);

  std::vector<qsym::EncodedBreaker> enc;
  qsym::AugmentMode mode = qsym::AugmentMode::ConjoinCnf;
  if (a.exists || a.both)
    enc.push_back(qsym::encode_existential_cnf(instance.prefix, instance.num_vars, gens, opts));
  if (a.forall || a.both) {
    if (!enc.empty()) opts.first_aux = enc.back().num_vars + 1;
    enc.push_back(qsym::encode_universal_dnf(instance.prefix, instance.num_vars, gens, opts));
    mode = a.both ? qsym::AugmentMode::Combined : qsym::AugmentMode::AttachDnf;
  }
  const auto augmented = qsym::augment_instance(instance, enc, mode);
  write_text(a.output, augmented.qdimacs());
  if (augmented.cubes) write_text(a.dnf, augmented.dnf());
  return kOk;
}

struct VerifyArgs {
  std::string input = "-";
  std::string generators;
  bool json = false;
  std::size_t solver_cap = 24;
  std::uint64_t strategy_cap = 1u << 16;
  std::size_t group_cap = 10000;
};

enum class Status { Pass, Fail, Skipped };

struct Check {
  std::string name;
  Status status;
  std::string detail;
};

int run_verify(const VerifyArgs& a) {
  const auto instance = load(a.input);
  const auto gens = generators_for(instance, a.generators);
  const qsym::TruthOptions truth{a.solver_cap};
  const qsym::OrbitOptions orbit{a.strategy_cap, a.group_cap};
  std::vector<Check> checks;

  auto run = [&](const std::string& name, const std::function<std::string()>& body) {
    try {
      const std::string failure = body();
      checks.push_back({name, failure.empty() ? Status::Pass : Status::Fail, failure});
    } catch (const qsym::SizeError& e) {
      checks.push_back({name, Status::Skipped, e.what()});
    }
  };
  auto expect = [](bool ok, const std::string& message) { return ok ? std::string() : message; };

  run("generators-are-symmetries", [&] {
    for (const auto& g : gens)
      if (!qsym::is_syntactic_symmetry(g, instance))
        return "generator " + qsym::to_cycle_notation(g) + " is not a symmetry";
    return std::string();
  });

  const auto psi_e = qsym::lex_leader_formula(instance.prefix, gens).formula();
  const auto psi_a = qsym::universal_lex_leader_formula(instance.prefix, gens).formula();
  const qsym::Formula phi = instance.matrix_formula();

  std::optional<bool> base;
  auto base_truth = [&] {
    if (!base) base = qsym::qbf_truth(instance, truth);
    return *base;
  };

  run("exists-breaker-true", [&] {
    return expect(qsym::qbf_truth(instance.prefix, psi_e, truth), "P.psi is false");
  });
  run("forall-breaker-false", [&] {
    return expect(!qsym::qbf_truth(instance.prefix, psi_a, truth), "P.psi is true");
  });
  run("conjoin-preserves-truth", [&] {
    const bool t = base_truth();
    if (qsym::qbf_truth(instance.prefix, phi && psi_e, truth) != t)
      return std::string("formula-level conjunction changes the truth value");
    const auto enc = qsym::encode_existential_cnf(instance.prefix, instance.num_vars, gens);
    const auto aug = qsym::augment_instance(instance, std::span(&enc, 1),
                                            qsym::AugmentMode::ConjoinCnf);
    return expect(qsym::qbf_truth(aug.instance, truth) == t,
                  "encoded conjunction changes the truth value");
  });
  run("attach-preserves-truth", [&] {
    const bool t = base_truth();
    if (qsym::qbf_truth(instance.prefix, phi || psi_a, truth) != t)
      return std::string("formula-level disjunction changes the truth value");
    const auto enc = qsym::encode_universal_dnf(instance.prefix, instance.num_vars, gens);
    const auto aug = qsym::augment_instance(instance, std::span(&enc, 1),
                                            qsym::AugmentMode::AttachDnf);
    return expect(qsym::qbf_truth(aug.instance, *aug.cubes, truth) == t,
                  "encoded cubes change the truth value");
  });
  run("combined-preserves-truth", [&] {
    const bool t = base_truth();
    if (qsym::qbf_truth(instance.prefix, (phi || psi_a) && psi_e, truth) != t)
      return std::string("formula-level combination changes the truth value");
    std::vector<qsym::EncodedBreaker> enc;
    enc.push_back(qsym::encode_existential_cnf(instance.prefix, instance.num_vars, gens));
    qsym::EncodeOptions opts;
    opts.first_aux = enc.back().num_vars + 1;
    enc.push_back(qsym::encode_universal_dnf(instance.prefix, instance.num_vars, gens, opts));
    const auto aug = qsym::augment_instance(instance, enc, qsym::AugmentMode::Combined);
    return expect(qsym::qbf_truth(aug.instance, *aug.cubes, truth) == t,
                  "encoded combination changes the truth value");
  });
  run("exists-orbit-coverage", [&] {
    const auto r = qsym::verify_breaker(instance.prefix, gens, psi_e, orbit);
    return expect(r.passed(), std::to_string(r.uncovered.size()) + " of " +
                                  std::to_string(r.orbits) + " orbits uncovered");
  });
  run("forall-orbit-coverage", [&] {
    const auto r = qsym::verify_universal_breaker(instance.prefix, gens, psi_a, orbit);
    return expect(r.passed(), std::to_string(r.uncovered.size()) + " of " +
                                  std::to_string(r.orbits) + " orbits uncovered");
  });

  bool failed = false, skipped = false;
  for (const auto& c : checks) {
    failed |= c.status == Status::Fail;
    skipped |= c.status == Status::Skipped;
  }
  auto label = [](Status s) {
    return s == Status::Pass ? "pass" : s == Status::Fail ? "fail" : "skipped";
  };
  if (a.json) {
    nlohmann::json report;
    report["input"] = a.input;
    report["generators"] = gens.size();
    report["passed"] = !failed;
    for (const auto& c : checks)
      report["checks"].push_back({{"name", c.name}, {"status", label(c.status)}, {"detail", c.detail}});
    std::cout << report.dump(2) << '\n';
  } else {
    for (const auto& c : checks) {
      std::cout << c.name << ": " << label(c.status);
      if (!c.detail.empty()) std::cout << " (" << c.detail << ')';
      std::cout << '\n';
    }
  }
  return failed ? kVerifyFailed : skipped ? kCap : kOk;
}

int exit_code(const qsym::Error& e) {
  return e.kind() == qsym::ErrorKind::Size ? kCap : kInput;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Symmetry detection and breaking for quantified Boolean formulas"};
  app.require_subcommand(1);

  std::string input = "-", output = "-";
  std::function<int()> action;

  auto* parse = app.add_subcommand("parse", "Validate and normalize a QDIMACS file");
  parse->add_option("file", input, "QDIMACS input, - for stdin");
  parse->add_option("-o,--output", output, "Output path");
  parse->callback([&] {
    action = [&] {
      write_text(output, qsym::serialize_qdimacs(load(input)));
      return int(kOk);
    };
  });

  std::uint64_t budget = 1'000'000;
  bool collapse = false;
  auto* detect = app.add_subcommand("detect", "Print symmetry generators in cycle notation");
  detect->add_option("file", input, "QDIMACS input, - for stdin");
  detect->add_option("--budget", budget, "Search node limit");
  detect->add_flag("--collapse-binary", collapse, "Encode binary clauses as edges");
  detect->add_option("-o,--output", output, "Output path");
  detect->callback([&] {
    action = [&] {
      qsym::DetectOptions opts;
      opts.budget = budget;
      opts.graph.collapse_binary = collapse;
      const auto d = qsym::detect_symmetries(load(input), opts);
      for (const auto& w : d.warnings) std::cerr << "warning: " << w << '\n';
      write_text(output, qsym::format_generators(d.generators));
      return int(kOk);
    };
  });

  BreakArgs break_args;
  auto* brk = app.add_subcommand("break", "Add a lex-leader symmetry breaker");
  brk->add_option("file", break_args.input, "QDIMACS input, - for stdin");
  brk->add_flag("--exists", break_args.exists, "Conjoin the existential breaker as clauses");
  brk->add_flag("--forall", break_args.forall, "Attach the universal breaker as cubes");
  brk->add_flag("--both", break_args.both, "Both breakers");
  brk->add_option("--generators", break_args.generators, "Generator file (default: detect)");
  brk->add_option("--products", break_args.products, "Use products of up to L generators")
      ->check(CLI::Range(std::size_t{1}, std::size_t{16}));
  brk->add_flag("--full-group", break_args.full_group, "Use every group element");
  brk->add_flag("--no-compress", break_args.no_compress, "Keep chain links for fixed variables");
  brk->add_option("-o,--output", break_args.output, "Augmented QDIMACS output");
  brk->add_option("--dnf", break_args.dnf, "Cube sidecar output");
  brk->callback([&] { action = [&] { return run_break(break_args); }; });

  VerifyArgs verify_args;
  auto* verify = app.add_subcommand("verify", "Check breaker properties with the brute-force oracles");
  verify->add_option("file", verify_args.input, "QDIMACS input, - for stdin");
  verify->add_option("--generators", verify_args.generators, "Generator file (default: detect)");
  verify->add_flag("--json", verify_args.json, "Machine-readable report");
  verify->add_option("--solver-cap", verify_args.solver_cap, "Variable limit of the solver");
  verify->add_option("--strategy-cap", verify_args.strategy_cap, "Strategy enumeration limit");
  verify->add_option("--group-cap", verify_args.group_cap, "Group closure limit");
  verify->callback([&] { action = [&] { return run_verify(verify_args); }; });

  std::size_t cap = 24;
  std::string sidecar;
  auto* solve = app.add_subcommand("solve", "Decide a small QBF by search");
  solve->add_option("file", input, "QDIMACS input, - for stdin");
  solve->add_option("--cap", cap, "Variable limit");
  solve->add_option("--dnf", sidecar, "Cube sidecar; the matrix becomes CNF or DNF");
  solve->callback([&] {
    action = [&] {
      const auto instance = load(input);
      bool value;
      if (sidecar.empty()) {
        value = qsym::qbf_truth(instance, qsym::TruthOptions{cap});
      } else {
        const auto cubes = qsym::parse_dnf(qsym::read_text(sidecar));
        if (!(cubes.prefix == instance.prefix))
          throw qsym::ValidationError("sidecar prefix differs from the instance prefix");
        value = qsym::qbf_truth(instance, cubes.cubes, qsym::TruthOptions{cap});
      }
      std::cout << (value ? "TRUE" : "FALSE") << '\n';
      return int(kOk);
    };
  });

  auto* gen = app.add_subcommand("gen", "Generate benchmark instances");
  gen->require_subcommand(1);
  int kbkf_n = 1;
  auto* kbkf = gen->add_subcommand("kbkf", "KBKF_n family");
  kbkf->add_option("n", kbkf_n, "Size parameter")->required()->check(CLI::PositiveNumber);
  kbkf->add_option("-o,--output", output, "Output path");
  kbkf->callback([&] {
    action = [&] {
      write_text(output, qsym::serialize_qdimacs(qsym::gen_kbkf(kbkf_n)));
      return int(kOk);
    };
  });

  qsym::RandomQbfOptions rnd;
  std::string blocks, planted_out;
  auto* random = gen->add_subcommand("random", "Random prenex CNF");
  random->add_option("--seed", rnd.seed, "Random seed");
  random->add_option("--vars", rnd.vars, "Variable count")->check(CLI::PositiveNumber);
  random->add_option("--clauses", rnd.clauses, "Clause count")->check(CLI::NonNegativeNumber);
  random->add_option("--blocks", blocks, "Block pattern such as a2e3");
  random->add_option("--max-len", rnd.max_clause_len, "Longest clause")->check(CLI::PositiveNumber);
  random->add_flag("--planted", rnd.planted, "Plant a symmetry");
  random->add_option("--planted-out", planted_out, "Write the planted generator here");
  random->add_option("-o,--output", output, "Output path");
  random->callback([&] {
    action = [&] {
      if (!blocks.empty()) rnd.blocks = qsym::parse_block_pattern(blocks);
      const auto generated = qsym::gen_random_qbf(rnd);
      write_text(output, qsym::serialize_qdimacs(generated.instance));
      if (generated.planted && !planted_out.empty())
        write_text(planted_out, qsym::format_generators(std::span(&*generated.planted, 1)));
      return int(kOk);
    };
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  try {
    return action ? action() : int(kUsage);
  } catch (const qsym::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return exit_code(e);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kInput;
  }
}
