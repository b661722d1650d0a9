#include "gradest/acceptance.hpp"

#include <cstdlib>
#include <filesystem>
#include <iostream>

int main(int argc, char** argv)
{
    namespace fs = std::filesystem;
    const fs::path work = argc > 1 ? fs::path(argv[1]) : fs::temp_directory_path() / "gradest_acceptance";
    bool all = true;
    for (int id = 1; id <= 9; ++id) {
        const auto result = gradest::acceptance::run_criterion(id);
        std::cout << gradest::acceptance::format_line(result) << std::endl;
        all = all && result.passed;
    }
    const auto det = gradest::acceptance::determinism(work);
    std::cout << gradest::acceptance::format_line(det) << std::endl;
    all = all && det.passed;
    return all ? EXIT_SUCCESS : EXIT_FAILURE;
}
