#include <algorithm>
#include <atomic>
#include <iostream>
#include <fstream>
#include <thread>

#include "common.hpp"
#include "graylearn/automata_io.hpp"
#include "graylearn/teacher.hpp"

namespace graylearn::cli {

namespace {

struct Side {
  bool ok = false;
  std::string error;
  std::size_t eq = 0, mq = 0, states = 0;
  double wall_ms = 0;
  LearnerStats stats;
};

struct Case {
  std::string name;
  Transducer target;
  Dfa up;
  bool has_up = false;
  Side gray, black;
};

// The teacher always answers for the target restricted to the case's Up; only
// the learner's side information varies.
Side run_side(const Case& c, const Dfa& up, const LearnerConfig& config) {
  Side s;
  SimulatedTeacher teacher(c.target, c.up);
  try {
    LearnResult r = learn(teacher, up, c.target.output_alphabet(), config);
    s.ok = true;
    s.states = r.transducer.num_states();
    s.stats = r.stats;
  } catch (const LearnerError& e) {
    s.error = e.what();
    s.stats = e.stats();
  } catch (const std::exception& e) {
    s.error = e.what();
  }
  s.eq = teacher.equivalence_queries();
  s.mq = teacher.membership_queries();
  s.wall_ms = s.stats.wall_ms;
  if (s.ok && (s.eq != s.stats.equivalence_queries || s.mq != s.stats.membership_queries)) {
    s.ok = false;
    s.error = "learner statistics disagree with the teacher's counters";
  }
  return s;
}

// "pass" when the graybox query count respects the size bound, "n/a" for
// targets with empty domain on Up.
std::string size_bound_column(const Side& s) {
  if (!s.ok) return "error";
  if (s.states == 0) return "n/a";
  return s.eq <= s.states ? "pass" : "fail";
}

nlohmann::json side_json(const Side& s) {
  nlohmann::json j = {{"ok", s.ok},
                      {"equivalence_queries", s.eq},
                      {"membership_queries", s.mq},
                      {"learned_states", s.states},
                      {"wall_ms", s.wall_ms},
                      {"stats", stats_json(s.stats)}};
  if (!s.ok) j["error"] = s.error;
  return j;
}

std::string fmt_ms(double ms) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.1f", ms);
  return buf;
}

std::string aligned(const std::vector<std::vector<std::string>>& rows) {
  std::vector<std::size_t> w;
  for (const auto& r : rows)
    for (std::size_t i = 0; i < r.size(); ++i) {
      if (w.size() <= i) w.push_back(0);
      w[i] = std::max(w[i], r[i].size());
    }
  std::string out;
  for (const auto& r : rows) {
    for (std::size_t i = 0; i < r.size(); ++i) {
      if (i) out += "  ";
      out += i == 0 ? r[i] + std::string(w[i] - r[i].size(), ' ')
                    : std::string(w[i] - r[i].size(), ' ') + r[i];
    }
    out += '\n';
  }
  return out;
}

}  // namespace

int run_bench(const std::filesystem::path& suite, const RunFlags& f, std::size_t jobs,
              const std::optional<std::string>& report) {
  std::vector<std::filesystem::path> files;
  for (const auto& e : std::filesystem::directory_iterator(suite))
    if (e.is_regular_file() && e.path().extension() == ".trans") files.push_back(e.path());
  std::sort(files.begin(), files.end());

  std::vector<Case> cases;
  try {
    for (const auto& p : files) {
      Case c;
      c.name = p.stem().string();
      c.target = load_transducer(p);
      auto dfa_path = p;
      dfa_path.replace_extension(".dfa");
      c.has_up = std::filesystem::exists(dfa_path);
      c.up = c.has_up ? load_dfa(dfa_path) : Dfa::universal(c.target.input_alphabet());
      if (!(c.up.alphabet() == c.target.input_alphabet()))
        throw ParseError(0, c.name + ": Up alphabet differs from the target input alphabet");
      cases.push_back(std::move(c));
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }

  const LearnerConfig config = learner_config(f);
  if (jobs == 0) jobs = std::max(1u, std::thread::hardware_concurrency());
  jobs = std::min(jobs, std::max<std::size_t>(1, cases.size() * 2));
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i; (i = next++) < cases.size() * 2;) {
      Case& c = cases[i / 2];
      if (i % 2 == 0) {
        c.gray = run_side(c, c.up, config);
      } else {
        c.black = run_side(c, Dfa::universal(c.target.input_alphabet()), config);
      }
    }
  };
  std::vector<std::thread> pool;
  for (std::size_t j = 0; j < jobs; ++j) pool.emplace_back(worker);
  for (auto& t : pool) t.join();

  nlohmann::json j = {{"cases", nlohmann::json::array()}};
  std::vector<std::vector<std::string>> rows{
      {"case", "gray_eq", "gray_mq", "gray_size", "gray_ms", "black_eq", "black_mq", "black_size",
       "black_ms", "bound"}};
  std::size_t failures = 0, geq = 0, gmq = 0, beq = 0, bmq = 0;
  for (const auto& c : cases) {
    const std::string thm = size_bound_column(c.gray);
    if (!c.gray.ok || !c.black.ok || thm == "fail") ++failures;
    geq += c.gray.eq, gmq += c.gray.mq, beq += c.black.eq, bmq += c.black.mq;
    j["cases"].push_back({{"name", c.name},
                          {"graybox", side_json(c.gray)},
                          {"blackbox", side_json(c.black)},
                          {"size_bound", thm}});
    auto size = [](const Side& s) { return s.ok ? std::to_string(s.states) : "err"; };
    rows.push_back({c.name, std::to_string(c.gray.eq), std::to_string(c.gray.mq), size(c.gray),
                    fmt_ms(c.gray.wall_ms), std::to_string(c.black.eq), std::to_string(c.black.mq),
                    size(c.black), fmt_ms(c.black.wall_ms), thm});
  }
  j["aggregate"] = {{"cases", cases.size()},
                    {"failures", failures},
                    {"graybox_equivalence_queries", geq},
                    {"graybox_membership_queries", gmq},
                    {"blackbox_equivalence_queries", beq},
                    {"blackbox_membership_queries", bmq}};
  rows.push_back({"total", std::to_string(geq), std::to_string(gmq), "", "", std::to_string(beq),
                  std::to_string(bmq), "", "", failures ? std::to_string(failures) + " failed" : "ok"});

  if (report) std::ofstream(*report) << j.dump(2) << '\n';
  if (f.stats.value_or("text") == "json") {
    std::cout << j.dump(2) << '\n';
  } else {
    std::cout << aligned(rows);
  }
  for (const auto& c : cases) {
    if (!c.gray.ok) std::cerr << c.name << " graybox: " << c.gray.error << '\n';
    if (!c.black.ok) std::cerr << c.name << " blackbox: " << c.black.error << '\n';
  }
  return failures ? 1 : 0;
}

}  // namespace graylearn::cli
