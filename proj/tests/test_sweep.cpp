#include <doctest.h>

#include "oracle.hpp"
#include "relunif/enumerate.hpp"
#include "relunif/prover.hpp"
#include "relunif/sweep.hpp"
#include "relunif/syntax.hpp"

using namespace relunif;

TEST_CASE("model bank evaluation matches the naive evaluator") {
    const AtomSet at = parse_atoms("x,y");
    ModelBank bank(at, 3);
    std::vector<oracle::Tree> ts;
    for (std::size_t i = 0; i < bank.size(); ++i) ts.push_back(oracle::from_model(bank.model(i)));
    std::mt19937_64 rng(51);
    const std::vector<Formula> leaves{parse("x"), parse("y")};
    for (int n = 0; n < 300; ++n) {
        Formula f = oracle::random_formula(rng, leaves, 5);
        long first = -1;
        for (std::size_t i = 0; i < ts.size() && first < 0; ++i)
            if (!oracle::force(ts[i], 0, f)) first = static_cast<long>(i);
        CHECK(bank.first_refuter(f) == first);
        const std::size_t i = n % bank.size();
        const auto mask = bank.forcing_mask(i, f);
        for (std::size_t w = 0; w < ts[i].parent.size(); ++w)
            CHECK(((mask >> w) & 1u) == oracle::force(ts[i], static_cast<int>(w), f));
    }
}

TEST_CASE("bank over {x,y} with at most 4 nodes") {
    CHECK(ModelBank(parse_atoms("x,y"), 4).size() == enumerate_models(parse_atoms("x,y"), 4).size());
}

TEST_CASE("serial and parallel kernels agree") {
    FormulaLevels levels(parse_atoms("x,y"));
    const auto& fs = levels.level(4);
    ModelBank bank(parse_atoms("x,y"), 3);
    const auto ref = refuters_serial(bank, fs);
    const auto thm = theorems_serial(fs);
    for (int jobs : {1, 2, 4}) {
        CHECK(refuters_parallel(bank, fs, jobs) == ref);
        clear_prover_cache();
        CHECK(theorems_parallel(fs, jobs) == thm);
    }
    for (std::size_t i = 0; i < fs.size(); ++i)
        if (thm[i]) CHECK(ref[i] == -1);
}
