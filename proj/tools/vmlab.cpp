// Command-line laboratory: field maps, ray traces, characteristic studies,
// constraint audits, energy audits, a single Picard diagnostic step, and a
// manifest-driven assertion suite.

#include <CLI11.hpp>

#include "vml/harness.hpp"

namespace {

nlohmann::json load_config(const std::string& path, std::string* raw) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw vml::domain_error("cannot open config file " + path);
  std::ostringstream ss;
  ss << is.rdbuf();
  *raw = ss.str();
  return nlohmann::json::parse(*raw);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"vmlab: asymptotic field and characteristic laboratory"};
  app.require_subcommand(1);

  std::string config_path, out_dir = ".";
  int threads = 1;
  std::uint64_t seed = 0;
  app.add_option("--config", config_path, "JSON configuration file")
      ->required();
  app.add_option("--out", out_dir, "output directory");
  app.add_option("--threads", threads, "worker threads for table builds");
  app.add_option("--seed", seed, "RNG seed for probe sampling");

  std::string sub;
  for (const char* name : {"field-map", "ray-trace", "characteristics",
                           "constraints", "energy-audit", "picard-step",
                           "suite"}) {
    app.add_subcommand(name)->callback([&sub, name] { sub = name; });
  }

  CLI11_PARSE(app, argc, argv);

  try {
    std::string raw;
    const nlohmann::json cfg = load_config(config_path, &raw);
    vml::harness::RunContext ctx;
    ctx.out_dir = out_dir;
    ctx.threads = std::max(1, threads);
    ctx.seed = seed;
    ctx.config_hash = vml::harness::fnv1a(raw);

    if (sub == "field-map") return vml::harness::run_field_map(cfg, ctx);
    if (sub == "ray-trace") return vml::harness::run_ray_trace(cfg, ctx);
    if (sub == "characteristics")
      return vml::harness::run_characteristics(cfg, ctx);
    if (sub == "constraints") return vml::harness::run_constraints(cfg, ctx);
    if (sub == "energy-audit") return vml::harness::run_energy_audit(cfg, ctx);
    if (sub == "picard-step") return vml::harness::run_picard_step(cfg, ctx);
    if (sub == "suite") return vml::harness::run_suite(cfg, ctx);
    std::fprintf(stderr, "unknown subcommand\n");
    return 2;
  } catch (const nlohmann::json::exception& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }
}
