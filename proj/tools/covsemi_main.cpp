#include <filesystem>
#include <fstream>
#include <iostream>

#include "CLI11.hpp"

#include "covsemi/config.hpp"

namespace fs = std::filesystem;
using covsemi::config::experiment;
using covsemi::config::json;

namespace {

void write_file(const fs::path& path, const std::string& content) {
  fs::create_directories(path.parent_path().empty() ? "." : path.parent_path());
  std::ofstream os(path, std::ios::binary);
  if (!os) throw covsemi::validation_error("cannot open output file " + path.string());
  os << content;
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"covsemi - braid-move orbits of branch/handle data, component counts of "
               "Hurwitz spaces, and C-group invariants"};
  std::string config_path, task_override, out_dir = ".";
  int threads = 0;
  std::int64_t seed = -1;
  app.add_option("--config", config_path, "experiment config (JSON)")->required();
  app.add_option("--task", task_override, "override the config's task");
  app.add_option("--threads", threads, "worker threads for orbit expansion");
  app.add_option("--out", out_dir, "output directory");
  app.add_option("--seed", seed, "seed for randomized property checks");
  CLI11_PARSE(app, argc, argv);

  try {
    std::ifstream in(config_path);
    if (!in) {
      std::cerr << "error: cannot read config " << config_path << "\n";
      return 2;
    }
    json raw;
    try {
      raw = json::parse(in);
    } catch (const json::parse_error& e) {
      std::cerr << "error: config is not valid JSON: " << e.what() << "\n";
      return 2;
    }
    experiment e = covsemi::config::parse_experiment(raw);
    if (!task_override.empty()) e.task = task_override;
    if (threads > 0) e.threads = threads;
    if (seed >= 0) e.seed = static_cast<std::uint64_t>(seed);
    if (e.task.empty()) {
      std::cerr << "error: no task given\n";
      return 2;
    }

    auto res = covsemi::config::run_experiment(e, std::cout);
    fs::path out(out_dir);
    std::string payload = res.result.dump(2) + "\n";
    write_file(out / e.out_json, payload);
    std::cout << payload;
    if (!res.csv.empty()) {
      write_file(out / e.out_csv, res.csv);
      std::cout << "wrote " << (out / e.out_csv).string() << "\n";
    }
    if (!res.dot.empty()) {
      write_file(out / e.out_dot, res.dot);
      std::cout << "wrote " << (out / e.out_dot).string() << "\n";
    }
    return res.exit_code;
  } catch (const covsemi::validation_error& e) {
    std::cerr << "validation error: " << e.what() << "\n";
    return 2;
  } catch (const covsemi::budget_exceeded& e) {
    std::cerr << "budget exceeded: " << e.what() << "\n";
    return 3;
  } catch (const covsemi::internal_error& e) {
    std::cerr << "internal consistency failure: " << e.what() << "\n";
    return 4;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 4;
  }
}
