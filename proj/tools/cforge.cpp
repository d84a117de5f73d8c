#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "cforge/harness.hpp"
#include "cforge/surface.hpp"
#include "cforge/translate.hpp"

using namespace cforge;

namespace {

enum Exit { kOk = 0, kBlame = 1, kInputError = 2, kViolation = 3, kFuel = 4 };

std::uint64_t defaultFuel() {
  if (const char* env = std::getenv("COERCION_FORGE_FUEL")) {
    try {
      return std::stoull(env);
    } catch (const std::exception&) {
      std::cerr << "warning: ignoring malformed COERCION_FORGE_FUEL=" << env << "\n";
    }
  }
  return 1000000;
}

struct Source {
  std::string name;
  std::string text;
  Dialect dialect = Dialect::LamS;
};

Source loadSource(const std::string& path, const std::string& inline_, const std::string& dialectFlag) {
  Source s;
  if (!inline_.empty()) {
    s.name = "<expr>";
    s.text = inline_;
  } else {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot read " + path);
    std::stringstream buf;
    buf << in.rdbuf();
    s.name = path;
    s.text = buf.str();
    s.dialect = dialectForPath(path);
  }
  if (dialectFlag == "lamsx") s.dialect = Dialect::LamSx;
  if (dialectFlag == "lams") s.dialect = Dialect::LamS;
  return s;
}

// Parses and typechecks; lamS programs come back annotated.
Program loadProgram(const Source& s, Type* type = nullptr) {
  Program p = parseProgram(s.text, s.dialect);
  if (s.dialect == Dialect::LamS) {
    Type t = typecheckProgram(p);
    if (type) *type = t;
    return annotateProgram(p);
  }
  Type t = typecheckProgramX(p);
  if (type) *type = t;
  return p;
}

int report(const std::string& name, const std::exception& e) {
  if (auto* pe = dynamic_cast<const ParseError*>(&e)) {
    std::cerr << name << ":" << pe->what() << "\n";
    return kInputError;
  }
  if (auto* te = dynamic_cast<const TypeError*>(&e)) {
    std::cerr << name << ": " << te->code << " (" << te->rule << "): " << te->what() << "\n";
    return kInputError;
  }
  if (dynamic_cast<const CoercionError*>(&e)) {
    std::cerr << name << ": " << e.what() << "\n";
    return kInputError;
  }
  if (dynamic_cast<const StuckError*>(&e)) {
    std::cerr << name << ": stuck: " << e.what() << "\n";
    return kViolation;
  }
  std::cerr << name << ": " << e.what() << "\n";
  return kInputError;
}

int outcomeExit(OutcomeKind k) {
  switch (k) {
    case OutcomeKind::Value: return kOk;
    case OutcomeKind::Blamed: return kBlame;
    default: return kFuel;
  }
}

bool parseSeedRange(const std::string& text, std::uint64_t& a, std::uint64_t& b) {
  auto dots = text.find("..");
  try {
    if (dots == std::string::npos) {
      a = b = std::stoull(text);
    } else {
      a = std::stoull(text.substr(0, dots));
      b = std::stoull(text.substr(dots + 2));
    }
  } catch (const std::exception&) {
    return false;
  }
  return a <= b;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"coercion-forge: interpreters and checks for two space-efficient coercion calculi"};
  app.require_subcommand(1);

  std::string file, expr, dialect;
  std::uint64_t fuel = defaultFuel();
  bool trace = false, metrics = false, optTrOp = false;

  auto* check = app.add_subcommand("check", "Typecheck a program and print its type");
  check->add_option("file", file, "Source file (.lams or .lamsx)")->required();
  check->add_option("--dialect", dialect, "Override the dialect")->check(CLI::IsMember({"lams", "lamsx"}));

  auto* eval = app.add_subcommand("eval", "Evaluate a program");
  eval->add_option("file", file, "Source file (.lams or .lamsx)");
  eval->add_option("-e", expr, "Inline program text");
  eval->add_option("--fuel", fuel, "Maximum number of reduction steps");
  eval->add_flag("--trace", trace, "Print every step");
  eval->add_flag("--metrics", metrics, "Append a space report line");
  eval->add_option("--dialect", dialect, "Override the dialect")->check(CLI::IsMember({"lams", "lamsx"}));

  auto* translate = app.add_subcommand("translate", "Translate a lamS program to coercion-passing style");
  translate->add_option("file", file, "Source file (.lams)")->required();
  translate->add_flag("--opt-trop", optTrOp, "Drop identity continuations on primitive results");

  auto* simcheck = app.add_subcommand("simcheck", "Check step-by-step simulation of a lamS program");
  simcheck->add_option("file", file, "Source file (.lams)")->required();
  simcheck->add_option("--fuel", fuel, "Maximum number of lamS steps");

  std::string seeds = "0..99";
  int depth = 8;
  bool fuzzSim = false, fuzzInv = false;
  std::uint64_t fuzzFuel = 100000;
  unsigned threads = 0;
  auto* fuzz = app.add_subcommand("fuzz", "Differential testing over generated programs");
  fuzz->add_option("--seeds", seeds, "Seed range A..B (inclusive)");
  fuzz->add_option("--depth", depth, "Maximum generation depth");
  fuzz->add_option("--fuel", fuzzFuel, "lamS fuel (lamSx gets ten times as much)");
  fuzz->add_flag("--simulation", fuzzSim, "Also run the simulation check");
  fuzz->add_flag("--invariants", fuzzInv, "Also run the invariant suite and translation typing");
  fuzz->add_option("--threads", threads, "Worker threads (0: all cores)");
  bool emit = false;
  fuzz->add_flag("--emit", emit, "Print the generated programs instead of checking them");

  std::string benchName;
  std::uint64_t benchN = 0;
  std::string benchDialect = "lams";
  auto* bench = app.add_subcommand("bench", "Space benchmark");
  bench->add_option("name", benchName, "Benchmark name")->required()->check(CLI::IsMember({"evenodd"}));
  bench->add_option("n", benchN, "Parameter")->required();
  bench->add_option("--dialect", benchDialect, "lams or lamsx")->check(CLI::IsMember({"lams", "lamsx"}));
  bench->add_flag("--trace", trace, "Print every step");
  bench->add_flag("--opt-trop", optTrOp, "Translate with the Tr-Op optimisation");
  bench->add_option("--fuel", fuel, "Maximum number of steps");

  CLI11_PARSE(app, argc, argv);

  std::string name = expr.empty() ? file : "<expr>";
  try {
    if (*check) {
      Type t;
      Source s = loadSource(file, "", dialect);
      loadProgram(s, &t);
      std::cout << printType(t) << "\n";
      return kOk;
    }
    if (*eval) {
      if (file.empty() && expr.empty()) {
        std::cerr << "eval: give a file or -e\n";
        return kInputError;
      }
      Source s = loadSource(file, expr, dialect);
      Program p = loadProgram(s);
      StepObserver obs;
      std::uint64_t n = 0;
      if (trace)
        obs = [&](const Term&, const StepResult& r) {
          std::cout << "step " << ++n << " " << r.kind << " " << r.rule << ": " << printTerm(r.next) << "\n";
        };
      SpaceReport rep = measureRun(p, fuel, obs);
      std::cout << rep.outcome << "\n";
      if (metrics) std::cout << rep.toJson().dump() << "\n";
      return outcomeExit(rep.kind);
    }
    if (*translate) {
      Source s = loadSource(file, "", "lams");
      Program p = loadProgram(s);
      std::cout << printProgram(transProgram(p, optTrOp));
      return kOk;
    }
    if (*simcheck) {
      Source s = loadSource(file, "", "lams");
      Program p = loadProgram(s);
      Verdict v = simulationCheck(p, fuel);
      std::cout << v.toJson().dump() << "\n";
      return v.ok() ? kOk : kViolation;
    }
    if (*fuzz) {
      CorpusOptions opt;
      if (!parseSeedRange(seeds, opt.firstSeed, opt.lastSeed)) {
        std::cerr << "fuzz: bad seed range " << seeds << "\n";
        return kInputError;
      }
      if (emit) {
        for (std::uint64_t seed = opt.firstSeed; seed <= opt.lastSeed; ++seed) {
          GenConfig cfg;
          cfg.seed = seed;
          cfg.maxDepth = depth;
          std::cout << "# seed " << seed << "\n" << printProgram(genWellTyped(cfg));
        }
        return kOk;
      }
      opt.maxDepth = depth;
      opt.fuel = fuzzFuel;
      opt.simulation = fuzzSim;
      opt.invariants = opt.typing = fuzzInv;
      opt.threads = threads;
      CorpusSummary sum = runCorpus(opt, [](const Verdict& v) { std::cout << v.toJson().dump() << "\n"; });
      nlohmann::ordered_json j;
      j["record"] = "summary";
      j["programs"] = sum.programs;
      j["values"] = sum.values;
      j["blames"] = sum.blames;
      j["fuelOuts"] = sum.fuelOuts;
      j["disagreements"] = sum.disagreements;
      j["simulationFailures"] = sum.simulationFailures;
      j["invariantViolations"] = sum.invariantViolations;
      j["typingFailures"] = sum.typingFailures;
      j["generationFailures"] = sum.generationFailures;
      std::cout << j.dump() << "\n";
      return sum.failures.empty() ? kOk : kViolation;
    }
    if (*bench) {
      std::uint64_t n = 0;
      StepObserver obs;
      if (trace) {
        Program p = evenOddProgram(benchN);
        if (benchDialect == "lamsx") p = transProgram(p, optTrOp);
        std::cout << printTerm(p.main) << "\n";
        obs = [&](const Term&, const StepResult& r) {
          std::cout << "step " << ++n << " " << r.kind << " " << r.rule << ": " << printTerm(r.next) << "\n";
        };
      }
      SpaceReport rep =
          spaceBench(benchN, benchDialect == "lamsx" ? Dialect::LamSx : Dialect::LamS, fuel, obs, optTrOp);
      std::cout << rep.toJson().dump() << "\n";
      return outcomeExit(rep.kind);
    }
  } catch (const std::exception& e) {
    return report(name, e);
  }
  return kOk;
}
