#include "isoglot/embedding.hpp"
#include "isoglot/common.hpp"

#include "support/rng.hpp"

#include <doctest.h>
#include <zlib.h>

#include <cstdio>
#include <fstream>
#include <string>

using namespace isoglot;

namespace {

struct TempFile {
    std::string path;
    explicit TempFile(const std::string& name) {
        path = std::string(std::getenv("TMPDIR") ? std::getenv("TMPDIR") : "/tmp") + "/" + name;
    }
    ~TempFile() { std::remove(path.c_str()); }
};

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    REQUIRE(out.good());
    out << content;
}

void write_gz(const std::string& path, const std::string& content) {
    gzFile gz = gzopen(path.c_str(), "wb");
    REQUIRE(gz != nullptr);
    REQUIRE(gzwrite(gz, content.data(), static_cast<unsigned>(content.size())) ==
            static_cast<int>(content.size()));
    gzclose(gz);
}

} // namespace

TEST_SUITE("embedio") {

TEST_CASE("loads a small file and truncates to the limit") {
    TempFile f("embedio_small.vec");
    write_file(f.path, "3 2\na 1 0\nb 0 1\nc 1 1\n");

    LoadStats stats;
    EmbeddingSpace space = load_embeddings(f.path, 2, std::nullopt, &stats);
    CHECK(space.n() == 2);
    CHECK(space.d() == 2);
    REQUIRE(space.vocab.size() == 2);
    CHECK(space.vocab[0] == "a");
    CHECK(space.vocab[1] == "b");
    CHECK(space.matrix(0, 0) == 1.0);
    CHECK(space.matrix(1, 1) == 1.0);
    CHECK(space.lang_id == "embedio_small");
    CHECK_FALSE(space.length_normalized);
    CHECK_FALSE(space.mean_centered);
    CHECK(stats.duplicates_dropped == 0);
}

TEST_CASE("limit above the row count keeps everything") {
    TempFile f("embedio_all.vec");
    write_file(f.path, "3 2\na 1 0\nb 0 1\nc 1 1\n");
    EmbeddingSpace space = load_embeddings(f.path);
    CHECK(space.n() == 3);
}

TEST_CASE("wrong field count names the line") {
    TempFile f("embedio_badrow.vec");
    write_file(f.path, "2 2\na 1 0\nb 0.1\n");
    CHECK_THROWS_WITH_AS(load_embeddings(f.path), doctest::Contains(":3:"), io_error);
}

TEST_CASE("garbled header is rejected") {
    TempFile f("embedio_badheader.vec");
    write_file(f.path, "two 2\na 1 0\n");
    CHECK_THROWS_WITH_AS(load_embeddings(f.path), doctest::Contains("header"), io_error);
}

TEST_CASE("missing header is rejected") {
    TempFile f("embedio_empty.vec");
    write_file(f.path, "");
    CHECK_THROWS_AS(load_embeddings(f.path), io_error);
}

TEST_CASE("non-finite values are rejected") {
    TempFile f("embedio_nan.vec");
    write_file(f.path, "1 2\na nan 0\n");
    CHECK_THROWS_WITH_AS(load_embeddings(f.path), doctest::Contains("non-finite"), io_error);
}

TEST_CASE("unparseable values are rejected with the column") {
    TempFile f("embedio_garbage.vec");
    write_file(f.path, "1 2\na 1 x\n");
    CHECK_THROWS_WITH_AS(load_embeddings(f.path), doctest::Contains("column 2"), io_error);
}

TEST_CASE("expect_dim mismatch is an error") {
    TempFile f("embedio_dim.vec");
    write_file(f.path, "1 3\na 1 2 3\n");
    CHECK_THROWS_WITH_AS(load_embeddings(f.path, kNoLimit, 2), doctest::Contains("mismatch"), io_error);
    CHECK_NOTHROW(load_embeddings(f.path, kNoLimit, 3));
}

TEST_CASE("duplicates keep the first occurrence and reading continues") {
    TempFile f("embedio_dupe.vec");
    write_file(f.path, "4 2\na 1 0\nb 0 1\na 9 9\nc 1 1\n");
    LoadStats stats;
    EmbeddingSpace space = load_embeddings(f.path, 3, std::nullopt, &stats);
    CHECK(space.n() == 3);
    CHECK(space.vocab == std::vector<std::string>{"a", "b", "c"});
    CHECK(space.matrix(0, 0) == 1.0); // the first "a" row won
    CHECK(stats.duplicates_dropped == 1);
}

TEST_CASE("truncated file is reported") {
    TempFile f("embedio_short.vec");
    write_file(f.path, "5 2\na 1 0\nb 0 1\n");
    CHECK_THROWS_WITH_AS(load_embeddings(f.path), doctest::Contains("ends early"), io_error);
}

TEST_CASE("gzip input round-trips") {
    TempFile f("embedio_gzip.vec.gz");
    write_gz(f.path, "2 3\nfoo 1 2 3\nbar 4 5 6\n");
    EmbeddingSpace space = load_embeddings(f.path);
    CHECK(space.n() == 2);
    CHECK(space.d() == 3);
    CHECK(space.vocab[1] == "bar");
    CHECK(space.matrix(1, 2) == 6.0);
    CHECK(space.lang_id == "embedio_gzip");
}

TEST_CASE("utf-8 tokens survive") {
    TempFile f("embedio_utf8.vec");
    write_file(f.path, "2 2\n\xc3\xbc" "ber 1 0\n\xe6\x97\xa5 0 1\n");
    EmbeddingSpace space = load_embeddings(f.path);
    CHECK(space.vocab[0] == "\xc3\xbc" "ber");
    CHECK(space.vocab[1] == "\xe6\x97\xa5");
}

TEST_CASE("windows line endings are tolerated") {
    TempFile f("embedio_crlf.vec");
    write_file(f.path, "1 2\r\na 1 2\r\n");
    EmbeddingSpace space = load_embeddings(f.path);
    CHECK(space.matrix(0, 1) == 2.0);
}

TEST_CASE("length_normalize scales rows to unit norm") {
    auto space = testsup::make_space("x", (Eigen::MatrixXd(2, 2) << 3, 4, 1, 0).finished());
    space = length_normalize(std::move(space));
    CHECK(space.length_normalized);
    CHECK(space.matrix(0, 0) == doctest::Approx(0.6).epsilon(1e-15));
    CHECK(space.matrix(0, 1) == doctest::Approx(0.8).epsilon(1e-15));
    CHECK(space.matrix(1, 0) == 1.0); // already unit, unchanged
    CHECK(space.matrix(1, 1) == 0.0);
}

TEST_CASE("length_normalize rejects zero rows naming the token") {
    auto space = testsup::make_space("x", Eigen::MatrixXd::Zero(2, 2));
    CHECK_THROWS_WITH_AS(length_normalize(std::move(space)), doctest::Contains("w0"), compute_error);
}

TEST_CASE("mean_center removes column means") {
    auto space = testsup::make_space("x", (Eigen::MatrixXd(2, 2) << 1, 0, 3, 0).finished());
    space = mean_center(std::move(space));
    CHECK(space.mean_centered);
    CHECK(space.matrix(0, 0) == -1.0);
    CHECK(space.matrix(1, 0) == 1.0);
    CHECK(space.matrix(0, 1) == 0.0);
}

TEST_CASE("mean_center of a single row gives zeros") {
    auto space = testsup::make_space("x", (Eigen::MatrixXd(1, 3) << 5, -2, 7).finished());
    space = mean_center(std::move(space));
    CHECK(space.matrix.cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("mean_center is idempotent to 1e-12") {
    testsup::Rng rng(41);
    auto space = testsup::make_space("x", rng.gaussian(50, 8));
    space = mean_center(std::move(space));
    Eigen::MatrixXd once = space.matrix;
    space = mean_center(std::move(space));
    CHECK((space.matrix - once).cwiseAbs().maxCoeff() <= 1e-12);
}

TEST_CASE("column means vanish after centering random matrices") {
    for (std::uint64_t seed : {1ull, 2ull, 3ull}) {
        testsup::Rng rng(seed);
        auto space = testsup::make_space("x", rng.gaussian(200, 10) * 3.7);
        space = mean_center(std::move(space));
        CHECK(space.matrix.colwise().mean().cwiseAbs().maxCoeff() <= 1e-9);
    }
}

TEST_CASE("normalize then center breaks unit norms but keeps both flags") {
    testsup::Rng rng(7);
    auto space = testsup::make_space("x", rng.gaussian(40, 5));
    space = preprocess(std::move(space));
    CHECK(space.length_normalized);
    CHECK(space.mean_centered);
    double worst = 0.0;
    for (Eigen::Index i = 0; i < space.n(); ++i)
        worst = std::max(worst, std::abs(space.matrix.row(i).norm() - 1.0));
    CHECK(worst > 1e-9); // centering moved the rows off the unit sphere
}

TEST_CASE("pipeline is deterministic for identical bytes") {
    TempFile f("embedio_det.vec");
    write_file(f.path, "3 2\na 0.25 -1.5\nb 2 0.125\nc -3 4\n");
    EmbeddingSpace one = preprocess(load_embeddings(f.path));
    EmbeddingSpace two = preprocess(load_embeddings(f.path));
    CHECK(one.matrix == two.matrix);
    CHECK(one.vocab == two.vocab);
}

TEST_CASE("lang tag comes from the file name") {
    CHECK(lang_from_path("data/de.vec") == "de");
    CHECK(lang_from_path("/a/b/fi.vec.gz") == "fi");
    CHECK(lang_from_path("en.txt") == "en");
    CHECK(lang_from_path("plain") == "plain");
}

} // TEST_SUITE
