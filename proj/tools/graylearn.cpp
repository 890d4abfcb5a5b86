#include <fstream>
#include <iostream>
#include <set>

#include "common.hpp"
#include "graylearn/automata_io.hpp"
#include "graylearn/teacher.hpp"

namespace graylearn::cli {

void add_run_flags(CLI::App& app, RunFlags& flags) {
  app.add_option("--max-witness-len", flags.max_witness_len, "Cap on the two-map witness length");
  app.add_option("--max-candidates", flags.max_candidates,
                 "Minimal candidates compared exactly before the two-map formula is used");
  app.add_option("--solver", flags.solver, "internal or external:<command>");
  app.add_option("--seed", flags.seed, "Solver seed (0 = default order)");
  app.add_option("--max-iterations", flags.max_iterations, "Learner iteration limit");
  app.add_option("--emit-dimacs", flags.emit_dimacs, "Directory receiving every solved instance");
  app.add_option("--stats", flags.stats, "Statistics format")->check(CLI::IsMember({"json", "text"}));
  app.add_option("--config", flags.config, "JSON file with default flag values")->check(CLI::ExistingFile);
}

RunFlags resolve(const RunFlags& flags) {
  RunFlags out = flags;
  if (!flags.config) return out;
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(read_file(*flags.config));
  } catch (const nlohmann::json::exception& e) {
    throw std::runtime_error("config " + *flags.config + ": " + e.what());
  }
  if (!j.is_object()) throw std::runtime_error("config " + *flags.config + ": expected an object");
  for (const auto& [key, value] : j.items()) {
    try {
      if (key == "max-witness-len") {
        if (!out.max_witness_len) out.max_witness_len = value.get<std::size_t>();
      } else if (key == "max-candidates") {
        if (!out.max_candidates) out.max_candidates = value.get<std::size_t>();
      } else if (key == "solver") {
        if (!out.solver) out.solver = value.get<std::string>();
      } else if (key == "seed") {
        if (!out.seed) out.seed = value.get<std::uint64_t>();
      } else if (key == "max-iterations") {
        if (!out.max_iterations) out.max_iterations = value.get<std::size_t>();
      } else if (key == "emit-dimacs") {
        if (!out.emit_dimacs) out.emit_dimacs = value.get<std::string>();
      } else if (key == "stats") {
        if (!out.stats) out.stats = value.get<std::string>();
      } else {
        throw std::runtime_error("unknown key");
      }
    } catch (const std::exception& e) {
      throw std::runtime_error("config " + *flags.config + ": key " + key + ": " + e.what());
    }
  }
  if (out.stats && *out.stats != "json" && *out.stats != "text")
    throw std::runtime_error("config: stats must be json or text");
  return out;
}

LearnerConfig learner_config(const RunFlags& f) {
  LearnerConfig c;
  c.solver = SolverConfig::from_environment();
  if (f.solver) c.solver.backend = *f.solver;
  if (f.seed) c.solver.seed = *f.seed;
  if (f.max_witness_len) c.max_witness_len = *f.max_witness_len;
  if (f.max_candidates) c.max_candidates = *f.max_candidates;
  if (f.max_iterations) c.max_iterations = *f.max_iterations;
  if (f.emit_dimacs) {
    std::filesystem::create_directories(*f.emit_dimacs);
    c.emit_dimacs = *f.emit_dimacs;
  }
  return c;
}

nlohmann::json stats_json(const LearnerStats& s) {
  return {
      {"membership_queries", s.membership_queries},
      {"equivalence_queries", s.equivalence_queries},
      {"solver_sat_calls", s.solver_sat_calls()},
      {"solver_calls_by_family",
       {{"mm", s.mm_sat_calls},
        {"candidates", s.candidate_sat_calls},
        {"wit1", s.wit1_sat_calls},
        {"wit2", s.wit2_sat_calls}}},
      {"competing_witnesses", s.competing_witnesses},
      {"iterations", s.iterations},
      {"final_n", s.final_n},
      {"learned_states", s.learned_states},
      {"candidate_sizes", s.candidate_sizes},
      {"capped_searches", s.capped_searches},
      {"wall_ms", s.wall_ms},
  };
}

std::string stats_text(const LearnerStats& s) {
  std::string sizes;
  for (std::size_t x : s.candidate_sizes) sizes += (sizes.empty() ? "" : ",") + std::to_string(x);
  char wall[32];
  std::snprintf(wall, sizeof wall, "%.1f", s.wall_ms);
  return "membership_queries " + std::to_string(s.membership_queries) +
         "\nequivalence_queries " + std::to_string(s.equivalence_queries) +
         "\nsolver_sat_calls " + std::to_string(s.solver_sat_calls()) + " (mm " +
         std::to_string(s.mm_sat_calls) + ", candidates " + std::to_string(s.candidate_sat_calls) +
         ", wit1 " + std::to_string(s.wit1_sat_calls) + ", wit2 " +
         std::to_string(s.wit2_sat_calls) + ")\ncompeting_witnesses " +
         std::to_string(s.competing_witnesses) + "\niterations " + std::to_string(s.iterations) +
         "\nfinal_n " + std::to_string(s.final_n) + "\nlearned_states " +
         std::to_string(s.learned_states) + "\ncandidate_sizes " + (sizes.empty() ? "-" : sizes) +
         "\ncapped_searches " + std::to_string(s.capped_searches) + "\nwall_ms " + wall + "\n";
}

}  // namespace graylearn::cli

namespace {

using namespace graylearn;

struct LearnFlags {
  std::string target;
  std::optional<std::string> up;
  std::optional<std::string> out;
  std::optional<std::string> query_log;
  bool blackbox = false;
};

void print_stats(const LearnerStats& s, const cli::RunFlags& f) {
  if (f.stats.value_or("text") == "json") {
    std::cerr << cli::stats_json(s).dump(2) << '\n';
  } else {
    std::cerr << cli::stats_text(s);
  }
}

int cmd_learn(const LearnFlags& lf, const cli::RunFlags& raw) {
  cli::RunFlags f;
  Transducer target;
  Dfa up;
  try {
    f = cli::resolve(raw);
    target = load_transducer(lf.target);
    up = lf.up ? load_dfa(*lf.up) : Dfa::universal(target.input_alphabet());
    if (!(up.alphabet() == target.input_alphabet()))
      throw ParseError(0, "Up alphabet differs from the target input alphabet");
  } catch (const ParseError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  LearnerConfig config = cli::learner_config(f);
  std::set<std::string> seen;
  config.warn = [&](const std::string& msg) {
    if (seen.insert(msg.substr(0, msg.find('('))).second) std::cerr << "warning: " << msg << '\n';
  };
  SimulatedTeacher teacher(target, up);
  const Dfa learner_up = lf.blackbox ? Dfa::universal(target.input_alphabet()) : up;
  try {
    LearnResult r = learn(teacher, learner_up, target.output_alphabet(), config);
    const std::string text = print_transducer(r.transducer);
    if (lf.out) {
      std::ofstream(*lf.out) << text;
    } else {
      std::cout << text;
    }
    print_stats(r.stats, f);
    if (lf.query_log) std::ofstream(*lf.query_log) << teacher.export_log();
    return 0;
  } catch (const LearnerError& e) {
    std::cerr << "error: " << e.what() << '\n';
    print_stats(e.stats(), f);
    return 3;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Graybox active learning of subsequential transducers"};
  app.require_subcommand(1);

  LearnFlags lf;
  cli::RunFlags learn_flags;
  auto* learn = app.add_subcommand("learn", "Learn a hidden target transducer through a simulated teacher");
  learn->add_option("--target", lf.target, "Target transducer file")->required();
  learn->add_option("--up", lf.up, "Up DFA file (default: all words)");
  learn->add_option("--out", lf.out, "Write the learned transducer here instead of stdout");
  learn->add_option("--query-log", lf.query_log, "Write the teacher's query log here");
  learn->add_flag("--blackbox", lf.blackbox, "Learner assumes Up = all words; the teacher keeps --up");
  cli::add_run_flags(*learn, learn_flags);

  std::string suite;
  std::size_t jobs = 0;
  std::optional<std::string> report;
  cli::RunFlags bench_flags;
  auto* bench = app.add_subcommand("bench", "Compare graybox and blackbox learning on a suite");
  bench->add_option("suite", suite, "Directory of <name>.trans files with optional <name>.dfa")
      ->required()
      ->check(CLI::ExistingDirectory);
  bench->add_option("--jobs", jobs, "Worker threads (0 = hardware concurrency)");
  bench->add_option("--report", report, "Write the JSON report here");
  cli::add_run_flags(*bench, bench_flags);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }
  try {
    if (*learn) return cmd_learn(lf, learn_flags);
    cli::RunFlags f;
    try {
      f = cli::resolve(bench_flags);
    } catch (const std::exception& e) {
      std::cerr << "error: " << e.what() << '\n';
      return 2;
    }
    return cli::run_bench(suite, f, jobs, report);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}
