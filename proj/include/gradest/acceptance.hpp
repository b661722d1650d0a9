#pragma once

#include <filesystem>
#include <string>
#include <vector>

namespace gradest::acceptance {

struct CriterionResult {
    int id = 0;
    std::string title;
    bool passed = false;
    std::string detail;
};

/// Criteria 1 to 9, in order.
std::vector<CriterionResult> run_criteria();

CriterionResult run_criterion(int id);

/// summary.json plus the CSV artifacts behind it.
void write_reports(const std::filesystem::path& dir, const std::vector<CriterionResult>& results);

/// Criterion 10: two full runs written to sibling directories of `work_dir`
/// must give byte-identical files.
CriterionResult determinism(const std::filesystem::path& work_dir);

/// "PASS  3  title: detail"
std::string format_line(const CriterionResult& result);

}  // namespace gradest::acceptance
