#pragma once

#include <filesystem>
#include <vector>

#include "turbbench/evalproto/metrics.hpp"
#include "turbbench/evalproto/pipeline.hpp"
#include "turbbench/evalproto/results_csv.hpp"
#include "turbbench/turbsim/dataset.hpp"

namespace turbbench {

struct EvalOptions {
  SsimOptions ssim;
  int workers = 1;
  // External restorer outputs and logs; defaults to <csv dir>/external.
  std::filesystem::path workdir;
};

struct EvalSummary {
  std::size_t tasks = 0;    // (sequence, pipeline) pairs in the sweep
  std::size_t skipped = 0;  // already ok in an existing CSV
  std::size_t ok = 0;
  std::size_t failed = 0;
};

// Restores one sequence with a pipeline. External pipelines write
// <workdir>/<scene>/<combo>/<name>.{png,log}.
Image run_pipeline(const Sequence& seq, const std::filesystem::path& seq_dir,
                   const PipelineSpec& pipeline, const std::filesystem::path& workdir);

// Runs one (sequence, pipeline) task; failures become non-ok records.
EvalRecord evaluate_one(const DatasetManifest& manifest, const ManifestEntry& entry,
                        const PipelineSpec& pipeline, const EvalOptions& options);

// Appends a row per missing (sequence, pipeline) pair to out_csv as tasks
// finish, skipping pairs that already have an ok row, then rewrites the file
// in canonical order.
EvalSummary evaluate(const DatasetManifest& manifest, const std::vector<PipelineSpec>& pipelines,
                     const std::filesystem::path& out_csv, const EvalOptions& options = {});

}  // namespace turbbench
