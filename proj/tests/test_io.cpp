#include <doctest.h>

#include <cstdio>
#include <fstream>
#include <string>

#include "corrseek/io.hpp"
#include "helpers.hpp"

using namespace corrseek;

TEST_SUITE_BEGIN("io");

namespace {

struct TempFile {
    std::string path;
    explicit TempFile(const std::string& name) : path("io_test_" + name) {}
    ~TempFile() { std::remove(path.c_str()); }
};

std::string slurp(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    return std::string(std::istreambuf_iterator<char>(is), std::istreambuf_iterator<char>());
}

}  // namespace

TEST_CASE("pmat text round trip is bit exact") {
    Rng rng(301);
    const BooleanMatrix m = testutil::random_matrix(19, 7, rng);
    TempFile f("a.pmat");
    save_pmat(m, f.path, false);
    const BooleanMatrix back = load_pmat(f.path);
    CHECK(back == m);

    TempFile g("b.pmat");
    save_pmat(back, g.path, false);
    CHECK(slurp(f.path) == slurp(g.path));
}

TEST_CASE("pmat binary round trip is bit exact") {
    Rng rng(303);
    const BooleanMatrix m = testutil::random_matrix(130, 11, rng);  // spans 3 words
    TempFile f("a.pmatb");
    save_pmat(m, f.path, true);
    const BooleanMatrix back = load_pmat(f.path);
    CHECK(back == m);

    TempFile g("b.pmatb");
    save_pmat(back, g.path, true);
    CHECK(slurp(f.path) == slurp(g.path));
}

TEST_CASE("padded matrices serialize their logical columns") {
    Rng rng(305);
    const BooleanMatrix m = testutil::random_matrix(9, 5, rng);
    TempFile f("pad.pmat");
    TempFile g("nopad.pmat");
    save_pmat(pad_to_multiple(m, 4), f.path, false);
    save_pmat(m, g.path, false);
    CHECK(slurp(f.path) == slurp(g.path));
}

TEST_CASE("pmat rejects malformed input") {
    TempFile f("bad.pmat");
    {
        std::ofstream os(f.path);
        os << "PMAT9 4 1\n++++\n";
    }
    CHECK_THROWS_AS((void)load_pmat(f.path), std::runtime_error);
    {
        std::ofstream os(f.path);
        os << "PMAT1 4 2\n++++\n++\n";
    }
    CHECK_THROWS_AS((void)load_pmat(f.path), std::runtime_error);
    {
        std::ofstream os(f.path);
        os << "PMAT1 4 1\n++x+\n";
    }
    CHECK_THROWS_AS((void)load_pmat(f.path), std::runtime_error);
}

TEST_CASE("parity examples round trip") {
    const ParityInstance inst = gen_parity(9, 3, 0.25, 40, 307);
    TempFile f("p.parity");
    save_parity_examples(inst.examples, 9, f.path);
    int64_t n = 0;
    const auto back = load_parity_examples(f.path, n);
    CHECK(n == 9);
    REQUIRE(back.size() == inst.examples.size());
    for (size_t i = 0; i < back.size(); ++i) {
        CHECK(back[i].x == inst.examples[i].x);
        CHECK(back[i].y == inst.examples[i].y);
    }
}

TEST_CASE("ov round trip") {
    const OVInstance inst = gen_ov(6, 12, 0.4, 309);
    TempFile f("o.ov");
    save_ov(inst, f.path);
    const OVInstance back = load_ov(f.path);
    CHECK(back.dprime == inst.dprime);
    CHECK(back.n == inst.n);
    CHECK(back.s_entries == inst.s_entries);
    CHECK(back.t_entries == inst.t_entries);
}

TEST_SUITE_END();
