#include "turbbench/evalproto/evaluate.hpp"

#include <spdlog/spdlog.h>

#include <chrono>
#include <fstream>
#include <mutex>
#include <set>

#include "turbbench/imgcore/parallel.hpp"
#include "turbbench/stabilize/mao_gilles.hpp"

namespace turbbench {

namespace {

std::filesystem::path default_workdir(const std::filesystem::path& out_csv) {
  const auto dir = out_csv.has_parent_path() ? out_csv.parent_path() : std::filesystem::path(".");
  return dir / "external";
}

EvalRecord record_stub(const ManifestEntry& entry, const PipelineSpec& pipeline, const EvalOptions& options) {
  EvalRecord r;
  r.scene_id = entry.scene_id;
  r.L_km = entry.combo.L_km;
  r.a = entry.combo.a;
  r.b = entry.combo.b;
  r.cn2 = entry.cn2;
  r.stabilizer = pipeline.stabilizer_label();
  r.deblurrer = pipeline.deblurrer_label();
  r.ssim_mode = options.ssim.mode;
  return r;
}

}  // namespace

Image run_pipeline(const Sequence& seq, const std::filesystem::path& seq_dir,
                   const PipelineSpec& pipeline, const std::filesystem::path& workdir) {
  if (const auto* b = std::get_if<BuiltinPipeline>(&pipeline.body)) {
    Image stabilized = stabilize(seq, b->stabilizer);
    if (!b->deblur) return stabilized;
    return deblur(stabilized, seq.params, *b->deblur);
  }
  const auto& ext = std::get<ExternalPipeline>(pipeline.body);
  const auto base = workdir / pipeline.name;
  return run_external_restorer(seq_dir, ext.command,
                               ExternalRun{base.string() + ".png", base.string() + ".log"},
                               ext.timeout_s);
}

EvalRecord evaluate_one(const DatasetManifest& manifest, const ManifestEntry& entry,
                        const PipelineSpec& pipeline, const EvalOptions& options) {
  EvalRecord r = record_stub(entry, pipeline, options);
  const auto seq_dir = manifest.sequence_dir(entry);
  const auto workdir = (options.workdir.empty() ? std::filesystem::path("external") : options.workdir) /
                       entry.scene_id / entry.combo.dir_name();
  const auto start = std::chrono::steady_clock::now();
  try {
    const Image gt = load_ground_truth(seq_dir);
    Image restored;
    if (pipeline.is_external()) {
      restored = run_pipeline(Sequence{}, seq_dir, pipeline, workdir);
    } else {
      restored = run_pipeline(load_sequence(seq_dir), seq_dir, pipeline, workdir);
    }
    r.wall_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
    r.psnr_db = psnr(gt, restored);
    r.ssim = ssim(gt, restored, options.ssim);
    r.status = RowStatus::Ok;
  } catch (const ExternalTimeout& e) {
    r.status = RowStatus::Timeout;
    spdlog::warn("{} / {}: {}", entry.path, pipeline.name, e.what());
  } catch (const ExternalMissingOutput& e) {
    r.status = RowStatus::MissingOutput;
    spdlog::warn("{} / {}: {}", entry.path, pipeline.name, e.what());
  } catch (const std::exception& e) {
    r.status = RowStatus::Error;
    spdlog::warn("{} / {}: {}", entry.path, pipeline.name, e.what());
  }
  if (r.status != RowStatus::Ok) {
    r.wall_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  }
  return r;
}

EvalSummary evaluate(const DatasetManifest& manifest, const std::vector<PipelineSpec>& pipelines,
                     const std::filesystem::path& out_csv, const EvalOptions& options) {
  options.ssim.validate();
  std::set<std::pair<std::string, std::string>> labels;
  for (const auto& p : pipelines) {
    p.validate();
    if (!labels.insert({p.stabilizer_label(), p.deblurrer_label()}).second) {
      throw InvalidArgument("pipelines share the CSV labels " + p.stabilizer_label() + "/" +
                            p.deblurrer_label());
    }
  }
  EvalOptions opts = options;
  if (opts.workdir.empty()) opts.workdir = default_workdir(out_csv);

  const auto existing = read_results(out_csv);
  std::set<EvalRecord::Key> done;
  for (const auto& r : existing) {
    if (r.status == RowStatus::Ok) done.insert(r.key());
  }

  struct Task {
    const ManifestEntry* entry;
    const PipelineSpec* pipeline;
  };
  std::vector<Task> tasks;
  EvalSummary summary;
  for (const auto& entry : manifest.entries) {
    for (const auto& p : pipelines) {
      ++summary.tasks;
      EvalRecord probe = record_stub(entry, p, opts);
      if (done.count(probe.key()) != 0) {
        ++summary.skipped;
        continue;
      }
      tasks.push_back({&entry, &p});
    }
  }

  if (out_csv.has_parent_path()) std::filesystem::create_directories(out_csv.parent_path());
  const bool fresh = existing.empty() && (!std::filesystem::exists(out_csv) ||
                                          std::filesystem::file_size(out_csv) == 0);
  std::ofstream out(out_csv, std::ios::app);
  if (!out) throw IoError("cannot open " + out_csv.string());
  if (fresh) out << kResultsHeader << '\n' << std::flush;

  std::mutex writer;
  parallel_for(tasks.size(), opts.workers, [&](std::size_t i) {
    const EvalRecord r = evaluate_one(manifest, *tasks[i].entry, *tasks[i].pipeline, opts);
    std::lock_guard lock(writer);
    out << format_record(r) << '\n' << std::flush;
    if (r.status == RowStatus::Ok) {
      ++summary.ok;
    } else {
      ++summary.failed;
    }
  });
  out.close();

  write_results(out_csv, canonicalize(read_results(out_csv)));
  return summary;
}

}  // namespace turbbench
