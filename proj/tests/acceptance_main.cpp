// Acceptance runner: executes the numbered criteria and prints one pass/fail
// line per criterion. Exit status is nonzero if any executed criterion fails.
//
//   critforest_acceptance                 runs all criteria
//   critforest_acceptance --criterion 7   runs one
//   critforest_acceptance --tier medium   runs a tier (cumulative)

#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <string>
#include <vector>

#include "crf/parallel.hpp"
#include "verify/criteria.hpp"

int main(int argc, char** argv) {
    crf::verify::VerifyOptions opts;
    opts.threads = crf::default_thread_count();
    if (const char* env = std::getenv("CRITFOREST_THREADS")) opts.threads = std::atoi(env);
    if (const char* env = std::getenv("CRITFOREST_CACHE_DIR")) opts.cache_dir = env;

    std::vector<int> ids;
    for (int i = 1; i < argc; ++i) {
        if (std::strcmp(argv[i], "--criterion") == 0 && i + 1 < argc) {
            ids.push_back(std::atoi(argv[++i]));
        } else if (std::strcmp(argv[i], "--tier") == 0 && i + 1 < argc) {
            ids = crf::verify::criteria_for_tier(argv[++i]);
        } else if (std::strcmp(argv[i], "--threads") == 0 && i + 1 < argc) {
            opts.threads = std::atoi(argv[++i]);
        } else if (std::strcmp(argv[i], "--seed") == 0 && i + 1 < argc) {
            opts.seed = std::strtoull(argv[++i], nullptr, 10);
        } else {
            std::fprintf(stderr, "unknown argument: %s\n", argv[i]);
            return 2;
        }
    }
    if (ids.empty())
        for (int id = 1; id <= crf::verify::kCriterionCount; ++id) ids.push_back(id);

    bool all_pass = true;
    for (int id : ids) {
        crf::verify::CriterionResult r = crf::verify::run_criterion(id, opts);
        std::printf("%s\n", crf::verify::format_result_line(r).c_str());
        std::fflush(stdout);
        all_pass = all_pass && r.pass;
    }
    return all_pass ? 0 : 1;
}
