#include "doctest.h"

#include "ccm/serialize.hpp"
#include "ccm/verify.hpp"
#include "test_support.hpp"

using namespace ccm;

// Format-level checks that back the CLI contracts without spawning processes;
// the executable itself is exercised by the acceptance workflow.

TEST_CASE("suite registry is stable") {
    const auto& names = suite_names();
    CHECK(names.size() == 11);
    CHECK(names.front() == "lemma1");
    CHECK(names.back() == "curves");
    CHECK_THROWS_AS(run_suite("nope", VerifyOptions{}), ConfigError);
}

TEST_CASE("single-suite run and determinism") {
    VerifyOptions opt;
    opt.cases = 5;
    opt.seed = 777;
    const SuiteResult a = run_suite("lemma1", opt);
    const SuiteResult b = run_suite("lemma1", opt);
    CHECK(a.pass);
    CHECK(a.max_residual == b.max_residual);  // same seed, same draw, same numbers

    opt.seed = 778;
    const SuiteResult c = run_suite("lemma1", opt);
    CHECK(c.max_residual != a.max_residual);  // different seed actually changes cases
}

TEST_CASE("report json shape") {
    VerifyOptions opt;
    opt.cases = 3;
    const std::vector<SuiteResult> results = run_suites(opt, std::string("thm1"));
    REQUIRE(results.size() == 1);
    json j{{"name", results[0].name},
           {"max_residual", results[0].max_residual},
           {"tolerance", results[0].tolerance},
           {"pass", results[0].pass}};
    const json parsed = json::parse(dump(j));
    CHECK(parsed.at("name").get<std::string>() == "thm1");
    CHECK(parsed.at("pass").get<bool>());
}
