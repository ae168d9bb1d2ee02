// Command-line front end. Talks to the library only through the C API.
#include <pthread.h>
#include <signal.h>

#include <csignal>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "vidrec/vidrec.h"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitData = 2;

struct Failure {
  vidrec_status status;
};

void check(vidrec_status status) {
  if (status != VIDREC_OK) throw Failure{status};
}

std::string take(char* s) {
  std::string out = s ? s : "";
  vidrec_string_free(s);
  return out;
}

using ConfigPtr = std::unique_ptr<vidrec_config, decltype(&vidrec_config_free)>;
using ArtifactPtr = std::unique_ptr<vidrec_artifact, decltype(&vidrec_artifact_free)>;

ConfigPtr make_config(const std::string& file, const std::vector<std::string>& overrides) {
  vidrec_config* raw = nullptr;
  check(vidrec_config_new(&raw));
  ConfigPtr config(raw, vidrec_config_free);
  if (!file.empty()) check(vidrec_config_load_file(config.get(), file.c_str()));
  for (const auto& kv : overrides) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos) {
      std::cerr << "error: --set expects key=value, got '" << kv << "'\n";
      throw Failure{VIDREC_ERR_USAGE};
    }
    check(vidrec_config_set(config.get(), kv.substr(0, eq).c_str(), kv.substr(eq + 1).c_str()));
  }
  return config;
}

ArtifactPtr load(const std::string& path) {
  vidrec_artifact* raw = nullptr;
  check(vidrec_artifact_load(path.c_str(), &raw));
  return ArtifactPtr(raw, vidrec_artifact_free);
}

std::string output_path(const std::string& out) { return out.empty() ? "/dev/stdout" : out; }

// host:port with the port optional.
void split_bind(const std::string& bind, std::string& host, int& port) {
  const auto colon = bind.rfind(':');
  if (colon == std::string::npos) {
    host = bind;
    return;
  }
  host = bind.substr(0, colon);
  try {
    std::size_t used = 0;
    port = std::stoi(bind.substr(colon + 1), &used);
    if (used != bind.size() - colon - 1) throw std::invalid_argument("port");
  } catch (const std::exception&) {
    std::cerr << "error: bad bind address '" << bind << "'\n";
    throw Failure{VIDREC_ERR_USAGE};
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Graph-based video recommendation from viewing logs"};
  app.set_version_flag("--version", std::string(vidrec_version()));
  app.require_subcommand(1);

  std::string config_file;
  std::vector<std::string> overrides;
  app.add_option("--config", config_file, "key = value config file")->check(CLI::ExistingFile);
  app.add_option("--set", overrides, "override one config key (key=value), repeatable");

  // Stage dumps.
  std::string events;
  std::string out;
  bool tensor = false;
  struct Stage {
    const char* command;
    const char* stage;
    const char* help;
  };
  const Stage stages[] = {
      {"ingest", "ingest", "viewing percentage per (film, user)"},
      {"similarity", "similarity", "film x film average similarity matrix"},
      {"graph", "graph", "film graph edge list"},
      {"centrality", "centrality", "degree, closeness, betweenness and average centrality"},
      {"cluster", "cluster", "modularity clusters"},
      {"profiles", "profiles", "per-user preferred and non-preferred films"},
  };
  std::vector<std::pair<CLI::App*, const Stage*>> stage_commands;
  for (const auto& s : stages) {
    auto* sub = app.add_subcommand(s.command, s.help);
    sub->add_option("events", events, "events CSV")->required()->check(CLI::ExistingFile);
    sub->add_option("-o,--out", out, "output CSV (default stdout)");
    if (std::string(s.command) == "similarity") {
      sub->add_flag("--tensor", tensor, "dump per-user dual similarity instead (-1 = not comparable)");
    }
    stage_commands.emplace_back(sub, &s);
  }

  auto* synth = app.add_subcommand("synth", "generate a synthetic events CSV from the synth.* keys");
  synth->add_option("-o,--out", out, "output CSV (default stdout)");

  std::string artifact_path;
  std::string dump_dir;
  auto* run = app.add_subcommand("run", "run every stage and save the artifact");
  run->add_option("events", events, "events CSV")->required()->check(CLI::ExistingFile);
  run->add_option("-a,--artifact", artifact_path, "artifact output path")->required();
  run->add_option("--dump-dir", dump_dir, "also write each stage's CSV here");

  std::string user;
  std::size_t k = 10;
  bool all_users = false;
  auto* rec = app.add_subcommand("recommend", "recommend films from a saved artifact");
  rec->add_option("-a,--artifact", artifact_path, "artifact path")->required()->check(CLI::ExistingFile);
  auto* user_opt = rec->add_option("-u,--user", user, "user id");
  auto* all_opt = rec->add_flag("--all", all_users, "export lists for every known user");
  user_opt->excludes(all_opt);
  rec->add_option("-k", k, "list length")->check(CLI::Range(std::size_t{1}, std::size_t{1000000}));
  rec->add_option("-o,--out", out, "output CSV (default stdout)");

  std::string method = "proposed";
  std::string report_dir;
  auto* eval = app.add_subcommand("evaluate", "offline sign-agreement evaluation");
  eval->add_option("events", events, "events CSV")->required()->check(CLI::ExistingFile);
  eval->add_option("-m,--method", method,
                   "proposed, random, oracle, inverted_oracle, knn, naive_bayes or all");
  eval->add_option("--report-dir", report_dir, "write <method>.json reports here");
  eval->add_option("-o,--out", out, "summary CSV (default stdout)");

  std::string bind;
  auto* serve = app.add_subcommand("serve", "serve recommendations over HTTP");
  serve->add_option("-a,--artifact", artifact_path, "artifact path")->required()->check(CLI::ExistingFile);
  serve->add_option("--bind", bind, "host:port (default from VIDREC_BIND, then serve.* keys)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    const auto config = make_config(config_file, overrides);

    for (const auto& [sub, s] : stage_commands) {
      if (!sub->parsed()) continue;
      const char* stage = tensor ? "similarity-tensor" : s->stage;
      check(vidrec_run_stage(config.get(), events.c_str(), stage, output_path(out).c_str()));
      return kExitOk;
    }

    if (synth->parsed()) {
      check(vidrec_synth(config.get(), output_path(out).c_str()));
      return kExitOk;
    }

    if (run->parsed()) {
      vidrec_artifact* raw = nullptr;
      check(vidrec_pipeline_run(config.get(), events.c_str(), &raw));
      const ArtifactPtr artifact(raw, vidrec_artifact_free);
      check(vidrec_artifact_save(artifact.get(), artifact_path.c_str()));
      if (!dump_dir.empty()) {
        std::filesystem::create_directories(dump_dir);
        for (const char* stage : {"ingest", "similarity", "graph", "centrality", "cluster", "profiles"}) {
          const auto path = (std::filesystem::path(dump_dir) / (std::string(stage) + ".csv")).string();
          check(vidrec_run_stage(config.get(), events.c_str(), stage, path.c_str()));
        }
      }
      std::cerr << "films " << vidrec_artifact_film_count(artifact.get()) << ", users "
                << vidrec_artifact_user_count(artifact.get()) << ", clusters "
                << vidrec_artifact_cluster_count(artifact.get()) << ", modularity "
                << vidrec_artifact_modularity(artifact.get()) << "\n";
      return kExitOk;
    }

    if (rec->parsed()) {
      const auto artifact = load(artifact_path);
      if (all_users) {
        check(vidrec_artifact_export_recommendations(artifact.get(), k, output_path(out).c_str()));
        return kExitOk;
      }
      if (user.empty()) {
        std::cerr << "error: recommend needs --user or --all\n";
        return kExitUsage;
      }
      vidrec_reclist* raw = nullptr;
      check(vidrec_recommend(artifact.get(), user.c_str(), k, &raw));
      std::unique_ptr<vidrec_reclist, decltype(&vidrec_reclist_free)> list(raw, vidrec_reclist_free);
      FILE* dest = out.empty() ? stdout : std::fopen(out.c_str(), "w");
      if (!dest) {
        std::cerr << "error: cannot write '" << out << "'\n";
        return kExitData;
      }
      std::fprintf(dest, "user_id,rank,film_id,rs_ef\n");
      for (std::size_t i = 0; i < vidrec_reclist_size(list.get()); ++i) {
        std::fprintf(dest, "%s,%zu,%s,%.17g\n", user.c_str(), i + 1, vidrec_reclist_film(list.get(), i),
                     vidrec_reclist_score(list.get(), i));
      }
      if (dest != stdout) std::fclose(dest);
      if (vidrec_reclist_cold_start(list.get())) std::cerr << "no preference history: cold-start list\n";
      return kExitOk;
    }

    if (eval->parsed()) {
      std::vector<std::string> methods{method};
      if (method == "all") methods = {"proposed", "random", "knn", "naive_bayes", "oracle", "inverted_oracle"};
      std::string summary = take([&] {
        char* s = nullptr;
        check(vidrec_report_summary(nullptr, 1, &s));
        return s;
      }()) + "\n";
      if (!report_dir.empty()) std::filesystem::create_directories(report_dir);
      for (const auto& m : methods) {
        vidrec_report* raw = nullptr;
        check(vidrec_evaluate(config.get(), events.c_str(), m.c_str(), &raw));
        std::unique_ptr<vidrec_report, decltype(&vidrec_report_free)> report(raw, vidrec_report_free);
        char* row = nullptr;
        check(vidrec_report_summary(report.get(), 0, &row));
        summary += take(row) + "\n";
        if (!report_dir.empty()) {
          char* json = nullptr;
          check(vidrec_report_json(report.get(), &json));
          std::ofstream file(std::filesystem::path(report_dir) / (m + ".json"));
          file << take(json) << "\n";
          if (!file) throw Failure{VIDREC_ERR_IO};
        }
      }
      if (out.empty()) {
        std::cout << summary;
      } else {
        std::ofstream file(out);
        file << summary;
        if (!file) throw Failure{VIDREC_ERR_IO};
      }
      return kExitOk;
    }

    if (serve->parsed()) {
      char* host_raw = nullptr;
      char* port_raw = nullptr;
      check(vidrec_config_get(config.get(), "serve.host", &host_raw));
      check(vidrec_config_get(config.get(), "serve.port", &port_raw));
      std::string host = take(host_raw);
      int port = std::stoi(take(port_raw));
      if (const char* env = std::getenv("VIDREC_BIND"); env && *env) split_bind(env, host, port);
      if (!bind.empty()) split_bind(bind, host, port);

      // Block the stop signals before any server thread exists so that only
      // sigwait below sees them.
      sigset_t stop_signals;
      sigemptyset(&stop_signals);
      sigaddset(&stop_signals, SIGINT);
      sigaddset(&stop_signals, SIGTERM);
      pthread_sigmask(SIG_BLOCK, &stop_signals, nullptr);

      const auto artifact = load(artifact_path);
      vidrec_server* raw = nullptr;
      check(vidrec_server_start(artifact.get(), host.c_str(), port, &raw));
      std::unique_ptr<vidrec_server, decltype(&vidrec_server_free)> server(raw, vidrec_server_free);
      std::cerr << "listening on " << host << ":" << vidrec_server_port(server.get()) << "\n";
      int signal = 0;
      sigwait(&stop_signals, &signal);
      vidrec_server_stop(server.get());
      return kExitOk;
    }
  } catch (const Failure& f) {
    const char* message = vidrec_last_error();
    if (message && *message) std::cerr << "error: " << message << "\n";
    return f.status == VIDREC_ERR_USAGE ? kExitUsage : kExitData;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitData;
  }
  return kExitUsage;
}
