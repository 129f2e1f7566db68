#include "ygraph/acceptance.hpp"

#include "CLI11.hpp"

#include <cstdio>

int main(int argc, char** argv)
{
    CLI::App app{"Runs acceptance criteria 1-11 and prints one pass/fail line per criterion."};
    ygraph::AcceptanceOptions opt;
    app.add_flag("--quick", opt.quick, "shorter Picard horizon, no refined scaling runs");
    app.add_option("--only", opt.only, "criterion ids to run")->check(CLI::Range(1, 11));
    CLI11_PARSE(app, argc, argv);

    opt.on_result = [](const ygraph::CriterionResult& r) {
        std::printf("%s\n", ygraph::format_result(r).c_str());
        std::fflush(stdout);
    };
    int failed = 0, total = 0;
    for (const auto& r : ygraph::run_acceptance(opt)) {
        ++total;
        failed += !r.pass;
    }
    std::printf("%d of %d criteria passed\n", total - failed, total);
    return failed ? 1 : 0;
}
