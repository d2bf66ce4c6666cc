// Acceptance suite runner: one pass/fail line per criterion, nonzero exit
// on any failure.

#include <chrono>
#include <cstdio>
#include <string>

#include "contattn/checks.hpp"

int main(int argc, char** argv) {
    const std::string filter = argc > 1 ? argv[1] : "";
    const auto t0 = std::chrono::steady_clock::now();
    const auto results = contattn::run_all_checks(filter);
    const auto t1 = std::chrono::steady_clock::now();

    int failures = 0;
    for (const auto& r : results) {
        std::printf("[%s] %-34s max_delta=%-12.3e tol=%-9.0e %s\n", r.passed ? "PASS" : "FAIL",
                    r.name.c_str(), r.max_delta, r.tolerance, r.detail.c_str());
        failures += r.passed ? 0 : 1;
    }
    const double secs = std::chrono::duration<double>(t1 - t0).count();
    std::printf("%zu checks, %d failed (%.1f s)\n", results.size(), failures, secs);
    return failures == 0 && !results.empty() ? 0 : 1;
}
