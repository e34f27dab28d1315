#include <doctest.h>

#include <cmath>

#include "bicvm/error.hpp"
#include "bicvm/manifest.hpp"
#include "bicvm/model_io.hpp"
#include "bicvm/synth.hpp"
#include "test_util.hpp"

using namespace bicvm;

TEST_CASE("vocabulary file round trip") {
    const auto vocab = Vocabulary::build({{"alpha", "beta", "alpha"}, {"gamma"}}, 1, "en");
    test_util::TempDir dir;
    vocab.save(dir.file("v.txt"));

    const auto loaded = Vocabulary::load(dir.file("v.txt"));
    CHECK(loaded.language_tag() == "en");
    REQUIRE(loaded.size() == vocab.size());
    for (std::size_t id = 0; id < vocab.size(); ++id) {
        CHECK(loaded.token(static_cast<WordId>(id)) == vocab.token(static_cast<WordId>(id)));
        CHECK(loaded.count(static_cast<WordId>(id)) == vocab.count(static_cast<WordId>(id)));
    }

    const std::string bytes = test_util::read_file(dir.file("v.txt"));
    CHECK(bytes.rfind("#vocab v1 en 3\n", 0) == 0);

    // saving twice is byte-identical
    vocab.save(dir.file("v2.txt"));
    CHECK(test_util::read_file(dir.file("v2.txt")) == bytes);
}

TEST_CASE("empty vocabulary file still carries a header") {
    const auto vocab = Vocabulary::build({}, 1, "de");
    test_util::TempDir dir;
    vocab.save(dir.file("empty.txt"));
    CHECK(test_util::read_file(dir.file("empty.txt")) == "#vocab v1 de 0\n");
    CHECK(Vocabulary::load(dir.file("empty.txt")).size() == 0);
}

TEST_CASE("binary model round trip preserves float32 content") {
    BiModel model(3);
    model.add_table(init_gaussian("en", 7, 3, 0.2, 1));
    model.add_table(init_gaussian("de", 5, 3, 0.2, 2));

    test_util::TempDir dir;
    save_model(model, dir.file("m.bin"));
    const auto loaded = load_model(dir.file("m.bin"));

    CHECK(loaded.dim() == 3);
    REQUIRE(loaded.table_count() == 2);
    CHECK(loaded.tables()[0].language_tag() == "en");
    CHECK(loaded.tables()[1].language_tag() == "de");
    for (std::size_t t = 0; t < 2; ++t) {
        const auto& orig = model.tables()[t].raw();
        const auto& got = loaded.tables()[t].raw();
        REQUIRE(got.size() == orig.size());
        for (std::size_t i = 0; i < orig.size(); ++i) {
            CHECK(got[i] == static_cast<double>(static_cast<float>(orig[i])));
        }
    }

    // saving the loaded model reproduces the same bytes
    save_model(loaded, dir.file("m2.bin"));
    CHECK(test_util::read_file(dir.file("m2.bin")) == test_util::read_file(dir.file("m.bin")));

    test_util::write_file(dir.file("junk.bin"), "NOTAMODEL");
    CHECK_THROWS_AS(load_model(dir.file("junk.bin")), DataError);
}

TEST_CASE("embedding text export") {
    test_util::TempDir dir;

    SUBCASE("one-word vocabulary header") {
        const auto vocab = Vocabulary::build({{"solo"}}, 1, "en");
        EmbeddingTable table("en", 1, 2);
        table.row(0)[0] = 0.25;
        table.row(0)[1] = -1.5;
        export_embeddings(table, vocab, dir.file("e.txt"));
        CHECK(test_util::read_file(dir.file("e.txt")) == "1 2\nsolo 0.25 -1.5\n");
    }

    SUBCASE("round trip within float formatting precision") {
        const auto vocab = synthetic_vocabulary("en", 20);
        const auto table = init_gaussian("en", 20, 6, 0.3, 9);
        export_embeddings(table, vocab, dir.file("e.txt"));

        std::vector<std::string> tokens;
        const auto imported = import_embeddings(dir.file("e.txt"), "en", &tokens);
        REQUIRE(imported.rows() == table.rows());
        REQUIRE(imported.dim() == table.dim());
        double max_diff = 0.0;
        for (std::size_t i = 0; i < table.raw().size(); ++i) {
            max_diff = std::max(max_diff, std::abs(imported.raw()[i] - table.raw()[i]));
        }
        CHECK(max_diff < 1e-5);
        REQUIRE(tokens.size() == 20);
        CHECK(tokens[0] == "w0");

        // line count = vocab size + 1
        const std::string bytes = test_util::read_file(dir.file("e.txt"));
        CHECK(std::count(bytes.begin(), bytes.end(), '\n') == 21);
    }
}

TEST_CASE("manifest digests and format") {
    test_util::TempDir dir;
    test_util::write_file(dir.file("x.txt"), "hello");
    test_util::write_file(dir.file("y.txt"), "hello");
    test_util::write_file(dir.file("z.txt"), "other");
    CHECK(file_digest(dir.file("x.txt")) == file_digest(dir.file("y.txt")));
    CHECK(file_digest(dir.file("x.txt")) != file_digest(dir.file("z.txt")));
    CHECK(file_digest(dir.file("x.txt")).size() == 16);

    RunManifest manifest;
    manifest.set("command", std::string("train"));
    manifest.add_input(dir.file("x.txt"));
    manifest.save(dir.file("run.manifest"));
    const std::string bytes = test_util::read_file(dir.file("run.manifest"));
    CHECK(bytes.rfind("command=train\n", 0) == 0);
    CHECK(bytes.find("input." + dir.file("x.txt") + "=") != std::string::npos);
}
