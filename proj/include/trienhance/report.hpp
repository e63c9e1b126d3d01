#pragma once

#include "trienhance/pipeline.hpp"

#include <filesystem>
#include <string>
#include <vector>

namespace trienhance {

/// Per-class row counts plus per-feature mean and standard deviation, overall and by class.
std::string distribution_summary(const Dataset& d);

std::string summary_text(const EnhancementResult& r);

/// Writes the enhanced dataset, the stage datasets, the per-stage summary, the
/// technique scores, the threshold table, the self-learning logs and the resolved
/// config into `dir`. Stage timings are left out so reruns are byte-identical.
/// Returns the written paths.
std::vector<std::filesystem::path> emit_report(const EnhancementResult& r, const PipelineConfig& cfg,
                                               const std::filesystem::path& dir);

std::string benchmark_folds_csv(const BenchmarkResult& b);
std::string benchmark_summary_csv(const BenchmarkResult& b);
std::string ablation_csv(const std::vector<AblationRow>& rows);

std::vector<std::filesystem::path> emit_benchmark(const BenchmarkResult& b, const PipelineConfig& cfg,
                                                  const std::filesystem::path& dir);

void write_text(const std::filesystem::path& path, const std::string& content);

} // namespace trienhance
