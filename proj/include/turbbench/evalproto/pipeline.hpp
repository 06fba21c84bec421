#pragma once

#include <optional>
#include <string>
#include <variant>

#include "turbbench/deblur/deblur.hpp"
#include "turbbench/evalproto/external.hpp"
#include "turbbench/stabilize/options.hpp"

namespace turbbench {

struct BuiltinPipeline {
  StabilizerSpec stabilizer;
  std::optional<DeblurSpec> deblur;  // nullopt: no deconvolution
};

struct ExternalPipeline {
  std::string command;  // template with {in} and {out}
  double timeout_s = kDefaultExternalTimeoutS;
};

struct PipelineSpec {
  std::string name;
  std::variant<BuiltinPipeline, ExternalPipeline> body;

  // CSV labels: the stabilizer label and the deblur label (or "none") for
  // builtin pipelines; "ext:<name>" and "none" for external ones.
  std::string stabilizer_label() const;
  std::string deblurrer_label() const;
  bool is_external() const { return std::holds_alternative<ExternalPipeline>(body); }

  // Name is non-empty and uses [A-Za-z0-9_.+-]; nested specs are valid.
  void validate() const;
};

PipelineSpec builtin_pipeline(std::string name, StabilizerSpec stabilizer,
                              std::optional<DeblurSpec> deblur = std::nullopt);
PipelineSpec external_pipeline(std::string name, std::string command,
                               double timeout_s = kDefaultExternalTimeoutS);

}  // namespace turbbench
