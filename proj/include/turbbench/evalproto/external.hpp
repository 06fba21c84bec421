#pragma once

#include <filesystem>
#include <string>

#include "turbbench/imgcore/errors.hpp"
#include "turbbench/imgcore/image.hpp"

namespace turbbench {

class ExternalError : public Error {
 public:
  using Error::Error;
};
// Nonzero exit status or abnormal termination.
class ExternalFailure : public ExternalError {
 public:
  using ExternalError::ExternalError;
};
// Exit 0 but no readable image at {out}.
class ExternalMissingOutput : public ExternalError {
 public:
  using ExternalError::ExternalError;
};
class ExternalTimeout : public ExternalError {
 public:
  using ExternalError::ExternalError;
};

inline constexpr double kDefaultExternalTimeoutS = 600.0;

struct ExternalRun {
  std::filesystem::path output;  // restored image path
  std::filesystem::path log;     // captured stdout and stderr
};

// Substitutes shell-quoted paths for every {in} and {out} in the template.
std::string expand_command(const std::string& cmd_template, const std::filesystem::path& in,
                           const std::filesystem::path& out);

// First word of the template resolves to an executable (absolute, relative
// or on PATH). Shell builtins are not recognised.
bool command_available(const std::string& cmd_template);

// Runs `sh -c` on the expanded template in its own process group with
// stdout/stderr sent to run.log; the whole group is killed on timeout.
Image run_external_restorer(const std::filesystem::path& seq_dir, const std::string& cmd_template,
                            const ExternalRun& run, double timeout_s = kDefaultExternalTimeoutS);

// Convenience form writing restored.png and restorer.log into workdir.
Image run_external_restorer(const std::filesystem::path& seq_dir, const std::string& cmd_template,
                            const std::filesystem::path& workdir,
                            double timeout_s = kDefaultExternalTimeoutS);

}  // namespace turbbench
