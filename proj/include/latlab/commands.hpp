#pragma once

#include <iosfwd>
#include <string>

#include "latlab/config.hpp"

namespace latlab {

// Each command writes its CSV tables under out_dir, echoes the effective
// config to out_dir/effective_config.json, and logs a short summary to log.
// Every CSV starts with a comment header carrying the config hash and the
// analytic constants (h, α, λ1, λ2), so tables are self-describing.
void cmd_analyze(const ExperimentConfig& cfg, const std::string& out_dir,
                 std::ostream& log);
void cmd_verify_conditions(const ExperimentConfig& cfg, const std::string& out_dir,
                           std::ostream& log);
void cmd_compare_cf(const ExperimentConfig& cfg, const std::string& out_dir,
                    std::ostream& log);
void cmd_largedev(const ExperimentConfig& cfg, const std::string& out_dir,
                  std::ostream& log);
void cmd_limit(const ExperimentConfig& cfg, const std::string& out_dir,
               std::ostream& log);
void cmd_sample(const ExperimentConfig& cfg, const std::string& out_dir,
                std::ostream& log);

}  // namespace latlab
