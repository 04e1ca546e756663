#include "dpm/driver.hpp"

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <stdexcept>
#include <thread>

#include "dpm/mms.hpp"

namespace dpm {

void RunConfig::validate() const {
  TestCase::by_id(test_id);  // throws on unknown ids
  if (meshes.empty()) throw std::invalid_argument("mesh list is empty");
  for (std::size_t i = 0; i < meshes.size(); ++i) {
    const int n = meshes[i];
    if (n != 31 && n != 63 && n != 127 && n != 255)
      throw std::invalid_argument("mesh must be one of 31, 63, 127, 255");
    if (i > 0 && meshes[i] <= meshes[i - 1])
      throw std::invalid_argument("mesh list must be strictly increasing");
  }
  if (order != 2 && order != 3)
    throw std::invalid_argument("order must be 2 or 3");
  if (t_final <= 0.0)
    throw std::invalid_argument("final time must be positive");
  if (harmonics < 0)
    throw std::invalid_argument("harmonics count cannot be negative");
  if (jobs < 1) throw std::invalid_argument("jobs must be at least 1");
  PerturbTargets::parse(perturb);  // throws on unknown targets
}

namespace {

std::string output_directory(const RunConfig& config) {
  if (!config.out_dir.empty()) return config.out_dir;
  if (const char* env = std::getenv("DPM_OUT_DIR"); env && *env)
    return env;
  return ".";
}

void write_atomic(const std::string& path, const std::string& content) {
  const std::string tmp = path + ".tmp";
  {
    std::FILE* f = std::fopen(tmp.c_str(), "w");
    if (!f) throw std::runtime_error("cannot open " + tmp + " for writing");
    if (std::fwrite(content.data(), 1, content.size(), f) != content.size()) {
      std::fclose(f);
      throw std::runtime_error("short write to " + tmp);
    }
    std::fclose(f);
  }
  std::filesystem::rename(tmp, path);
}

void append_cell(std::string& out, double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.6e", v);
  out += buf;
}

void append_rate(std::string& out, double coarse, double fine, bool first) {
  out += ',';
  if (!first) append_cell(out, convergence_rate(coarse, fine));
}

std::string format_bulk_dump(const GridSpec& spec, const PointSets& sets,
                             const RunResult& run) {
  char buf[96];
  std::snprintf(buf, sizeof(buf), "# N=%d R=%g t=%g\n", run.cells, run.radius,
                run.final_time);
  std::string out = buf;
  for (std::int32_t idx : sets.m_plus) {
    int j, k, l;
    spec.coords(idx, j, k, l);
    std::snprintf(buf, sizeof(buf), "%.10e %.10e %.10e %.10e\n", spec.coord(j),
                  spec.coord(k), spec.coord(l), run.final_bulk[idx]);
    out += buf;
  }
  return out;
}

std::string format_surface_dump(const RunResult& run) {
  char buf[96];
  std::snprintf(buf, sizeof(buf), "# N=%d R=%g t=%g\n", run.cells, run.radius,
                run.final_time);
  std::string out = buf;
  const SurfaceGrid grid;
  for (int j = 0; j < grid.n_theta; ++j)
    for (int k = 0; k < grid.n_phi; ++k) {
      std::snprintf(buf, sizeof(buf), "%.10e %.10e %.10e\n", grid.theta(j),
                    grid.phi(k), run.final_surface(j, k));
      out += buf;
    }
  return out;
}

}  // namespace

std::string format_csv(const std::vector<RunResult>& runs) {
  std::string out =
      "N,E_inf_bulk,rate,E_l2_bulk,rate,E_h1_bulk,rate,E_inf_surf,rate,"
      "E_l2_surf,rate,E_h1_surf,rate,E_inf_gradx,rate,E_inf_grady,rate,"
      "E_inf_gradz,rate,cond_normal,seconds\n";
  for (std::size_t i = 0; i < runs.size(); ++i) {
    const RunResult& r = runs[i];
    const bool first = (i == 0);
    const RunResult& p = runs[first ? 0 : i - 1];
    out += std::to_string(r.cells);
    out += ',';
    append_cell(out, r.bulk.e_inf);
    append_rate(out, p.bulk.e_inf, r.bulk.e_inf, first);
    out += ',';
    append_cell(out, r.bulk.e_l2);
    append_rate(out, p.bulk.e_l2, r.bulk.e_l2, first);
    out += ',';
    append_cell(out, r.bulk.e_h1);
    append_rate(out, p.bulk.e_h1, r.bulk.e_h1, first);
    out += ',';
    append_cell(out, r.surf.e_inf);
    append_rate(out, p.surf.e_inf, r.surf.e_inf, first);
    out += ',';
    append_cell(out, r.surf.e_l2);
    append_rate(out, p.surf.e_l2, r.surf.e_l2, first);
    out += ',';
    append_cell(out, r.surf.e_h1);
    append_rate(out, p.surf.e_h1, r.surf.e_h1, first);
    out += ',';
    append_cell(out, r.bulk.e_grad_x);
    append_rate(out, p.bulk.e_grad_x, r.bulk.e_grad_x, first);
    out += ',';
    append_cell(out, r.bulk.e_grad_y);
    append_rate(out, p.bulk.e_grad_y, r.bulk.e_grad_y, first);
    out += ',';
    append_cell(out, r.bulk.e_grad_z);
    append_rate(out, p.bulk.e_grad_z, r.bulk.e_grad_z, first);
    out += ',';
    append_cell(out, r.cond_first);
    out += ',';
    append_cell(out, r.seconds);
    out += '\n';
  }
  return out;
}

StudyResult run_study(const RunConfig& config) {
  config.validate();
  const std::string out_dir = output_directory(config);
  std::filesystem::create_directories(out_dir);

  const TestCase tc = TestCase::by_id(config.test_id);
  const bool keep = config.dump_bulk || config.dump_surface;

  std::vector<RunResult> runs(config.meshes.size());
  std::vector<std::exception_ptr> errors(config.meshes.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&]() {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= config.meshes.size()) return;
      try {
        RunOptions opts;
        opts.test_id = config.test_id;
        opts.cells = config.meshes[i];
        opts.harmonics = config.harmonics;
        opts.order = config.order;
        opts.perturb = PerturbTargets::parse(config.perturb);
        opts.seed = config.seed;
        opts.t_final = config.t_final;
        opts.verbose = config.verbose;
        opts.keep_final_fields = keep;
        runs[i] = run_simulation(opts);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  const std::size_t nworkers =
      std::min<std::size_t>(config.jobs, config.meshes.size());
  if (nworkers <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (std::size_t i = 0; i < nworkers; ++i) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  for (const auto& e : errors)
    if (e) std::rethrow_exception(e);

  StudyResult study;
  study.csv_path = out_dir + "/" + config.test_id + ".csv";
  write_atomic(study.csv_path, format_csv(runs));

  if (keep) {
    for (const RunResult& r : runs) {
      const std::string stem =
          out_dir + "/" + config.test_id + "_N" + std::to_string(r.cells);
      if (config.dump_bulk) {
        const GridSpec spec =
            GridSpec::standard(tc.radius(), r.cells, config.t_final);
        const PointSets sets = classify_nodes(spec);
        write_atomic(stem + "_bulk.dat", format_bulk_dump(spec, sets, r));
      }
      if (config.dump_surface)
        write_atomic(stem + "_surface.dat", format_surface_dump(r));
    }
  }
  study.runs = std::move(runs);
  return study;
}

}  // namespace dpm
