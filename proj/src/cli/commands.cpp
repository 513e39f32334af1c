#include "qclbm/cli/commands.hpp"

#include <chrono>
#include <cmath>
#include <fstream>
#include <limits>
#include <map>

#include <fmt/chrono.h>
#include <fmt/format.h>

#include "qclbm/carleman.hpp"
#include "qclbm/cli/csv.hpp"
#include "qclbm/cli/pipeline.hpp"
#include "qclbm/cli/plot.hpp"
#include "qclbm/error.hpp"
#include "qclbm/lbm.hpp"
#include "qclbm/resources.hpp"

namespace qclbm::cli {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::vector<double> lid_values(const RunConfig& c) {
  return c.use_case == BoundaryKind::LidDriven ? c.v_lid : std::vector<double>{0.0};
}

const char* source_name(hhl::SpectrumSource s) {
  return s == hhl::SpectrumSource::Exact ? "exact" : "substituted";
}

std::string suffix(const LatticeGrid& grid, double omega) {
  std::string s = fmt::format("{}_nx{}_ny{}_om{}", to_string(grid.boundary()), grid.nx(), grid.ny(), omega);
  if (grid.boundary() == BoundaryKind::LidDriven) s += fmt::format("_v{}", grid.lid_velocity()[1]);
  return s;
}

fs::path cache_dir(const CommandContext& ctx) {
  return ctx.cache_dir.empty() ? ctx.out_dir / "cache" : ctx.cache_dir;
}

void finish(const CommandContext& ctx, const std::string& command, CommandResult& result) {
  const fs::path path = ctx.out_dir / fmt::format("manifest_{}.json", command);
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::Io, fmt::format("cannot write {}", path.string()));
  out << manifest(ctx, command, result).dump(2) << '\n';
}

json resource_json(const resources::ResourceEstimate& r) {
  return {{"generic_bound", resources::to_string(r.generic_bound)},
          {"local_bound", resources::to_string(r.local_bound)},
          {"reinit_bound", resources::to_string(r.reinit_bound)},
          {"register_bound", resources::to_string(r.register_bound)},
          {"q_tilde", r.q_tilde},
          {"n_t_padded", r.n_t_padded},
          {"n_i", r.n_i}};
}

}  // namespace

// ---------------------------------------------------------------- rmse

CommandResult cmd_carleman_rmse(const CommandContext& ctx) {
  const RunConfig& c = ctx.config;
  fs::create_directories(ctx.out_dir);

  struct Task {
    int nx, ny;
    double omega, v;
  };
  std::vector<Task> tasks;
  for (std::size_t i = 0; i < c.nx.size(); ++i) {
    for (const double omega : c.omega) {
      for (const double v : lid_values(c)) tasks.push_back({c.nx[i], c.ny_for(i), omega, v});
    }
  }

  std::vector<std::vector<CsvRow>> rows(tasks.size());
  std::vector<CsvTable> fields(tasks.size());
  std::vector<std::string> field_names(tasks.size());

  run_parallel(tasks.size(), ctx.threads, [&](std::size_t k) {
    const Task& t = tasks[k];
    const LatticeGrid grid = make_grid(c.use_case, t.nx, t.ny, t.v);
    const DistributionField f0 = initial_field(grid, c.init);

    std::vector<DistributionField> lbm{f0};
    lbm.reserve(static_cast<std::size_t>(c.rmse_steps) + 1);
    for (int s = 0; s < c.rmse_steps; ++s) lbm.push_back(lbm::lbm_step(lbm.back(), grid, t.omega));

    for (const int order : c.carleman_order) {
      const carleman::CarlemanSystem sys(grid, t.omega, order);
      carleman::CarlemanState state = carleman::make_state(f0, sys);
      for (int s = 0; s <= c.rmse_steps; ++s) {
        if (s > 0) state = carleman::step(state, sys);
        const double e = carleman::rmse(std::span<const double>(state.f.data(), static_cast<std::size_t>(state.f.size())),
                                        lbm[static_cast<std::size_t>(s)].values());
        rows[k].push_back({std::string(to_string(c.use_case)), t.nx, t.ny, t.omega, t.v, order, s, e});
      }
    }

    const DistributionField& last = lbm.back();
    CsvTable& field = fields[k];
    field.schema = "velocity";
    field.columns = {"x", "y", "rho", "ux", "uy", "speed"};
    for (int y = 0; y < grid.ny(); ++y) {
      for (int x = 0; x < grid.nx(); ++x) {
        const std::size_t n = grid.site(x, y);
        const Vec2 u = lbm::velocity(last, n);
        field.rows.push_back({x, y, lbm::density(last, n), u[0], u[1], std::hypot(u[0], u[1])});
      }
    }
    field_names[k] = fmt::format("velocity_{}_t{}.csv", suffix(grid, t.omega), c.rmse_steps);
  });

  CommandResult result;
  CsvTable table{"rmse", {"use_case", "nx", "ny", "omega", "v_lid", "order", "t", "rmse"}, {}};
  for (auto& r : rows) table.rows.insert(table.rows.end(), r.begin(), r.end());
  write_csv(ctx.out_dir / "rmse.csv", table);
  result.outputs.push_back("rmse.csv");
  for (std::size_t k = 0; k < tasks.size(); ++k) {
    write_csv(ctx.out_dir / field_names[k], fields[k]);
    result.outputs.push_back(field_names[k]);
  }
  finish(ctx, "carleman-rmse", result);
  return result;
}

// ---------------------------------------------------------------- spectra

CommandResult cmd_spectra(const CommandContext& ctx) {
  const RunConfig& c = ctx.config;
  fs::create_directories(ctx.out_dir);
  SpectrumProvider provider(spectra::SpectrumCache(cache_dir(ctx)), c.dimension_cap);

  struct Task {
    int nx, ny;
    double omega, v;
    int n_steps;
    bool reference;
  };
  std::vector<Task> tasks;
  for (const int nt : c.n_steps) {
    for (const double omega : c.omega) {
      for (const double v : lid_values(c)) {
        tasks.push_back({c.reference_nx, c.reference_nx, omega, v, nt, true});
        for (std::size_t i = 0; i < c.nx.size(); ++i) {
          if (c.nx[i] == c.reference_nx && c.ny_for(i) == c.reference_nx) continue;
          tasks.push_back({c.nx[i], c.ny_for(i), omega, v, nt, false});
        }
      }
    }
  }

  std::vector<std::optional<spectra::Spectrum>> spectra_out(tasks.size());
  run_parallel(tasks.size(), ctx.threads, [&](std::size_t k) {
    const Task& t = tasks[k];
    spectra_out[k] = provider.get(make_grid(c.use_case, t.nx, t.ny, t.v), t.omega, t.n_steps);
  });

  CommandResult result;
  CsvTable summary{"spectra",
                   {"use_case", "nx", "ny", "omega", "v_lid", "n_steps", "dim", "n_positive", "lambda_min",
                    "lambda_max", "n_clock_min", "key"},
                   {}};
  CsvTable zeta_table{"zeta",
                      {"use_case", "omega", "v_lid", "n_steps", "nx", "ny", "reference_nx", "total_counts", "zeta"},
                      {}};
  const spectra::SpectrumHistogram* ref_hist = nullptr;
  std::vector<spectra::SpectrumHistogram> hists(tasks.size());
  for (std::size_t k = 0; k < tasks.size(); ++k) {
    const Task& t = tasks[k];
    const spectra::Spectrum& s = *spectra_out[k];
    const std::string key = s.descriptor().key();
    summary.rows.push_back({std::string(to_string(c.use_case)), t.nx, t.ny, t.omega, t.v, t.n_steps,
                            static_cast<long long>(s.size()), static_cast<long long>(s.positive_count()),
                            s.lambda_min(), s.lambda_max(), hhl::clock_minimum(s), key});
    hists[k] = spectra::histogram(s, c.bin_width);
    CsvTable h{"histogram", {"bin_lo", "bin_hi", "count"}, {}};
    for (std::size_t b = 0; b < hists[k].counts.size(); ++b) {
      h.rows.push_back({hists[k].bin_lo(b), hists[k].bin_hi(b), static_cast<long long>(hists[k].counts[b])});
    }
    const std::string name = fmt::format("hist_{}.csv", key);
    write_csv(ctx.out_dir / name, h);
    result.outputs.push_back(name);

    if (t.reference) {
      ref_hist = &hists[k];
      continue;
    }
    zeta_table.rows.push_back({std::string(to_string(c.use_case)), t.omega, t.v, t.n_steps, t.nx, t.ny,
                               c.reference_nx, static_cast<long long>(hists[k].total()),
                               spectra::zeta(hists[k], *ref_hist)});
  }
  write_csv(ctx.out_dir / "spectra.csv", summary);
  write_csv(ctx.out_dir / "zeta.csv", zeta_table);
  result.outputs.insert(result.outputs.begin(), {"spectra.csv", "zeta.csv"});
  result.spectrum_keys = provider.keys();
  finish(ctx, "spectra", result);
  return result;
}

// ---------------------------------------------------------------- hhl

CommandResult cmd_hhl(const CommandContext& ctx) {
  const RunConfig& c = ctx.config;
  fs::create_directories(ctx.out_dir);
  SpectrumProvider provider(spectra::SpectrumCache(cache_dir(ctx)), c.dimension_cap);

  struct Group {
    int nx, ny;
    double omega, v;
    int n_steps;
  };
  std::vector<Group> groups;
  for (std::size_t i = 0; i < c.nx.size(); ++i) {
    for (const double omega : c.omega) {
      for (const double v : lid_values(c)) {
        for (const int nt : c.n_steps) groups.push_back({c.nx[i], c.ny_for(i), omega, v, nt});
      }
    }
  }

  const std::vector<std::string> keys{"use_case", "nx", "ny", "omega", "v_lid", "n_steps",
                                      "t0", "n_clock", "c_p", "spectrum_source"};
  CsvTable main{"hhl", keys, {}};
  for (const char* col : {"status", "eps_full", "eps_evolved_max", "eps_evolved_median", "p_ancilla",
                          "p_success", "lambda_max", "n_clock_min", "n_b", "generic_bound", "local_bound"}) {
    main.columns.emplace_back(col);
  }
  CsvTable blocks{"hhl_blocks", keys, {}};
  for (const char* col : {"block", "t", "eps"}) blocks.columns.emplace_back(col);

  std::vector<std::vector<CsvRow>> main_rows(groups.size());
  std::vector<std::vector<CsvRow>> block_rows(groups.size());

  run_parallel(groups.size(), ctx.threads, [&](std::size_t g) {
    const Group& gr = groups[g];
    const LatticeGrid grid = make_grid(c.use_case, gr.nx, gr.ny, gr.v);
    const DistributionField f0 = initial_field(grid, c.init);
    const PreparedSystem base = prepare_system(grid, gr.omega, gr.n_steps, 0, f0);
    const auto basis = spectra::Eigenbasis::from_embedding(base.embedding, c.dimension_cap);

    std::optional<spectra::Spectrum> rotation;
    if (c.spectrum_source == hhl::SpectrumSource::Exact) {
      rotation = spectrum_from_basis(basis, base.descriptor());
      provider.note(rotation->descriptor());
    } else {
      const LatticeGrid small = make_grid(c.use_case, c.reference_nx, c.reference_nx, gr.v);
      rotation = spectra::substituted_spectrum(provider.get(small, gr.omega, gr.n_steps), base.descriptor());
    }

    for (const int t0 : c.t0) {
      const PreparedSystem prepared = t0 == 0 ? base : with_t0(base, t0, f0);
      for (const int nc : c.n_clock) {
        for (const double cp : c.c_p) {
          const CsvRow key{std::string(to_string(c.use_case)), gr.nx, gr.ny, gr.omega, gr.v, gr.n_steps,
                           t0, nc, cp, std::string(source_name(c.spectrum_source))};
          const auto res = resources::cnot_bounds(static_cast<std::uint64_t>(nc), grid.sites(), kQ,
                                                  static_cast<std::uint64_t>(gr.n_steps), c.q_tilde);
          CsvRow row = key;
          try {
            const HhlRun run =
                run_prepared(prepared, basis, *rotation, hhl::HhlConfig{nc, cp, c.spectrum_source});
            const auto evolved = evolved_block_errors(run);
            double worst = 0.0;
            for (const double e : evolved) worst = std::max(worst, e);
            row.insert(row.end(), {std::string("ok"), run.result.fidelity_error, worst, median(evolved),
                                   run.result.p_ancilla, run.result.p_success, run.result.lambda_max_used,
                                   run.n_clock_min, run.result.qubit_counts.system});
            for (std::size_t b = 0; b < run.block_errors.size(); ++b) {
              CsvRow br = key;
              br.insert(br.end(), {static_cast<long long>(b), static_cast<long long>(t0 + static_cast<int>(b)),
                                   run.block_errors[b]});
              block_rows[g].push_back(std::move(br));
            }
          } catch (const Error& e) {
            row.insert(row.end(), {std::string(to_string(e.code())), kNaN, kNaN, kNaN, kNaN, kNaN,
                                   rotation->lambda_max(), hhl::clock_minimum(*rotation), base.embedding.n_b});
          }
          row.insert(row.end(), {resources::to_string(res.generic_bound), resources::to_string(res.local_bound)});
          main_rows[g].push_back(std::move(row));
        }
      }
    }
  });

  for (auto& r : main_rows) main.rows.insert(main.rows.end(), r.begin(), r.end());
  for (auto& r : block_rows) blocks.rows.insert(blocks.rows.end(), r.begin(), r.end());
  write_csv(ctx.out_dir / "hhl.csv", main);
  write_csv(ctx.out_dir / "hhl_blocks.csv", blocks);
  CommandResult result;
  result.outputs = {"hhl.csv", "hhl_blocks.csv"};
  result.spectrum_keys = provider.keys();
  finish(ctx, "hhl", result);
  return result;
}

// ---------------------------------------------------------------- resources

CommandResult cmd_resources(const CommandContext& ctx) {
  const RunConfig& c = ctx.config;
  fs::create_directories(ctx.out_dir);
  CsvTable table{"resources",
                 {"nx", "ny", "L", "Q", "n_steps", "n_clock", "q_tilde", "generic_bound", "local_bound",
                  "reinit_bound", "register_bound", "n_i"},
                 {}};
  for (std::size_t i = 0; i < c.nx.size(); ++i) {
    const auto sites = static_cast<std::uint64_t>(c.nx[i]) * static_cast<std::uint64_t>(c.ny_for(i));
    for (const int nt : c.n_steps) {
      for (const int nc : c.n_clock) {
        const auto r = resources::cnot_bounds(static_cast<std::uint64_t>(nc), sites, kQ,
                                              static_cast<std::uint64_t>(nt), c.q_tilde);
        table.rows.push_back({c.nx[i], c.ny_for(i), static_cast<long long>(sites), kQ, nt, nc,
                              static_cast<long long>(c.q_tilde), resources::to_string(r.generic_bound),
                              resources::to_string(r.local_bound), resources::to_string(r.reinit_bound),
                              resources::to_string(r.register_bound), r.n_i});
      }
    }
  }
  write_csv(ctx.out_dir / "resources.csv", table);
  CommandResult result;
  result.outputs = {"resources.csv"};
  finish(ctx, "resources", result);
  return result;
}

// ---------------------------------------------------------------- plot

CommandResult cmd_plot(const std::vector<fs::path>& csv_paths, const fs::path& out_dir) {
  if (csv_paths.empty()) throw Error(ErrorCode::InvalidArgument, "plot: no CSV files given");
  // Validate every input before writing anything.
  for (const auto& p : csv_paths) {
    const CsvDocument doc = read_csv(p);
    if (doc.rows.empty()) {
      throw Error(ErrorCode::InvalidArgument, fmt::format("plot: {} has no data rows", p.string()));
    }
    if (!plot::has_plot(doc.schema)) {
      throw Error(ErrorCode::InvalidArgument, fmt::format("plot: no plot defined for schema '{}'", doc.schema));
    }
  }
  fs::create_directories(out_dir);
  CommandResult result;
  for (const auto& p : csv_paths) {
    for (auto& f : plot::plot_csv(p, out_dir)) result.outputs.push_back(std::move(f));
  }
  return result;
}

// ---------------------------------------------------------------- manifest

json manifest(const CommandContext& ctx, const std::string& command, const CommandResult& result) {
  const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  json j;
  j["command"] = command;
  j["tool_version"] = kToolVersion;
  j["timestamp"] = fmt::format("{:%Y-%m-%dT%H:%M:%SZ}", fmt::gmtime(now));
  j["config"] = to_json(ctx.config);
  j["threads"] = ctx.threads;
  j["spectrum_cache_keys"] = result.spectrum_keys;
  json outputs = json::array();
  for (const auto& p : result.outputs) outputs.push_back(p.generic_string());
  j["outputs"] = outputs;

  json estimates = json::array();
  const RunConfig& c = ctx.config;
  for (std::size_t i = 0; i < c.nx.size(); ++i) {
    const auto sites = static_cast<std::uint64_t>(c.nx[i]) * static_cast<std::uint64_t>(c.ny_for(i));
    for (const int nt : c.n_steps) {
      for (const int nc : c.n_clock) {
        json e = resource_json(resources::cnot_bounds(static_cast<std::uint64_t>(nc), sites, kQ,
                                                      static_cast<std::uint64_t>(nt), c.q_tilde));
        e["nx"] = c.nx[i];
        e["ny"] = c.ny_for(i);
        e["n_steps"] = nt;
        e["n_clock"] = nc;
        e["n_b"] = static_cast<int>(std::ceil(std::log2(2.0 * (nt + 1) * static_cast<double>(sites * kQ))));
        estimates.push_back(std::move(e));
      }
    }
  }
  j["resource_estimates"] = estimates;
  return j;
}

json error_record(const std::exception& e) {
  std::string code = "Internal";
  if (const auto* qe = dynamic_cast<const Error*>(&e)) code = std::string(to_string(qe->code()));
  return {{"error", {{"code", code}, {"message", e.what()}}}};
}

}  // namespace qclbm::cli
