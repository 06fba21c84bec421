#include "turbbench/evalproto/pipeline.hpp"

#include <cctype>

#include "turbbench/imgcore/errors.hpp"

namespace turbbench {

std::string PipelineSpec::stabilizer_label() const {
  if (const auto* b = std::get_if<BuiltinPipeline>(&body)) return b->stabilizer.label();
  return "ext:" + name;
}

std::string PipelineSpec::deblurrer_label() const {
  if (const auto* b = std::get_if<BuiltinPipeline>(&body)) {
    return b->deblur ? b->deblur->label() : "none";
  }
  return "none";
}

void PipelineSpec::validate() const {
  if (name.empty()) throw InvalidArgument("pipeline name must not be empty");
  for (char c : name) {
    if (!std::isalnum(static_cast<unsigned char>(c)) && c != '_' && c != '.' && c != '+' && c != '-') {
      throw InvalidArgument("pipeline name '" + name + "' may only use letters, digits and _.+-");
    }
  }
  if (const auto* b = std::get_if<BuiltinPipeline>(&body)) {
    b->stabilizer.validate();
    if (b->deblur) b->deblur->validate();
  } else {
    const auto& e = std::get<ExternalPipeline>(body);
    if (e.command.find("{in}") == std::string::npos || e.command.find("{out}") == std::string::npos) {
      throw InvalidArgument("pipeline '" + name + "': command must contain {in} and {out}");
    }
    if (!(e.timeout_s > 0.0)) throw InvalidArgument("pipeline '" + name + "': timeout must be > 0");
  }
}

PipelineSpec builtin_pipeline(std::string name, StabilizerSpec stabilizer,
                              std::optional<DeblurSpec> deblur) {
  return PipelineSpec{std::move(name), BuiltinPipeline{std::move(stabilizer), std::move(deblur)}};
}

PipelineSpec external_pipeline(std::string name, std::string command, double timeout_s) {
  return PipelineSpec{std::move(name), ExternalPipeline{std::move(command), timeout_s}};
}

}  // namespace turbbench
