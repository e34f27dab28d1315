#include <doctest.h>

#include <cstdlib>
#include <string>

#include "bicvm/manifest.hpp"
#include "bicvm/model_io.hpp"
#include "bicvm/synth.hpp"
#include "bicvm/trainer.hpp"
#include "test_util.hpp"

using namespace bicvm;

namespace {

std::string cli_path() {
    const char* path = std::getenv("BICVM_CLI");
    REQUIRE_MESSAGE(path != nullptr, "BICVM_CLI must point at the CLI binary");
    return path;
}

int run_cli(const std::string& args, const std::string& stdout_file = "/dev/null") {
    const std::string cmd = cli_path() + " " + args + " > " + stdout_file + " 2>/dev/null";
    const int status = std::system(cmd.c_str());
    return WEXITSTATUS(status);
}

// Small bijective corpus on disk plus its vocabulary files.
struct CliFixture {
    test_util::TempDir dir;
    SyntheticSpec spec;

    CliFixture() {
        spec.vocab_size = 30;
        spec.corpus_size = 40;
        spec.class_count = 2;
        spec.tokens_per_class = 5;
        spec.seed = 11;
        const auto pair = gen_bijective_pair(spec);
        const auto vocab_a = synthetic_vocabulary(spec.lang_a, spec.vocab_size);
        const auto vocab_b = synthetic_vocabulary(spec.lang_b, spec.vocab_size);
        write_text_corpus(pair.corpus, vocab_a, vocab_b, dir.file("a.txt"), dir.file("b.txt"));
        vocab_a.save(dir.file("a.vocab"));
        vocab_b.save(dir.file("b.vocab"));
    }

    std::string train_args(const std::string& out, const std::string& extra = "",
                           int epochs = 2) const {
        return "train --corpus " + dir.file("a.txt") + " " + dir.file("b.txt") + " " +
               dir.file("a.vocab") + " " + dir.file("b.vocab") + " --dim 8 --epochs " +
               std::to_string(epochs) + " --noise-count 2 --margin 2 --seed 5 " + extra +
               " --out " + out;
    }
};

}  // namespace

TEST_CASE("cli vocab is deterministic and matches the first-occurrence oracle") {
    test_util::TempDir dir;
    test_util::write_file(dir.file("text.txt"), "The cat\ncat sat\nthe mat\n");

    REQUIRE(run_cli("vocab --input " + dir.file("text.txt") + " --lang en --out " +
                    dir.file("v1.txt")) == 0);
    REQUIRE(run_cli("vocab --input " + dir.file("text.txt") + " --lang en --out " +
                    dir.file("v2.txt")) == 0);
    CHECK(test_util::read_file(dir.file("v1.txt")) == test_util::read_file(dir.file("v2.txt")));
    CHECK(test_util::read_file(dir.file("v1.txt")) ==
          "#vocab v1 en 4\nthe\t2\ncat\t2\nsat\t1\nmat\t1\n");

    test_util::write_file(dir.file("empty.txt"), "");
    REQUIRE(run_cli("vocab --input " + dir.file("empty.txt") + " --lang de --out " +
                    dir.file("ve.txt")) == 0);
    CHECK(test_util::read_file(dir.file("ve.txt")) == "#vocab v1 de 0\n");
}

TEST_CASE("cli train with zero epochs equals the seeded initialization") {
    CliFixture fx;
    REQUIRE(run_cli(fx.train_args(fx.dir.file("m.bin"), "", 0)) == 0);
    const auto model = load_model(fx.dir.file("m.bin"));

    TrainConfig config;
    config.dim = 8;
    config.epochs = 0;
    config.noise_count = 2;
    config.margin = 2.0;
    config.seed = 5;
    const auto pair = gen_bijective_pair(fx.spec);
    const auto expected = init_model({pair.corpus}, config);
    REQUIRE(model.table_count() == 2);
    for (std::size_t t = 0; t < 2; ++t) {
        const auto& got = model.tables()[t].raw();
        const auto& want = expected.tables()[t].raw();
        REQUIRE(got.size() == want.size());
        for (std::size_t i = 0; i < got.size(); ++i) {
            CHECK(got[i] == static_cast<double>(static_cast<float>(want[i])));
        }
    }
}

TEST_CASE("cli train twice yields identical model digests") {
    CliFixture fx;
    REQUIRE(run_cli(fx.train_args(fx.dir.file("m1.bin"))) == 0);
    REQUIRE(run_cli(fx.train_args(fx.dir.file("m2.bin"))) == 0);
    CHECK(file_digest(fx.dir.file("m1.bin")) == file_digest(fx.dir.file("m2.bin")));
    CHECK(test_util::read_file(fx.dir.file("m1.bin")) ==
          test_util::read_file(fx.dir.file("m2.bin")));
    // manifest exists and lists the artifact
    const std::string manifest = test_util::read_file(fx.dir.file("m1.bin.manifest"));
    CHECK(manifest.find("artifact." + fx.dir.file("m1.bin")) != std::string::npos);
}

TEST_CASE("cli train on two corpora produces three tables") {
    test_util::TempDir dir;
    SyntheticSpec spec;
    spec.vocab_size = 20;
    spec.corpus_size = 20;
    spec.class_count = 2;
    spec.tokens_per_class = 4;
    spec.lang_a = "en";
    spec.lang_b = "de";
    spec.lang_c = "fr";
    spec.seed = 2;
    const auto triad = gen_pivot_triad(spec);
    const auto ven = synthetic_vocabulary("en", spec.vocab_size);
    const auto vde = synthetic_vocabulary("de", spec.vocab_size);
    const auto vfr = synthetic_vocabulary("fr", spec.vocab_size);
    write_text_corpus(triad.corpus_ab, ven, vde, dir.file("en1.txt"), dir.file("de.txt"));
    write_text_corpus(triad.corpus_ac, ven, vfr, dir.file("en2.txt"), dir.file("fr.txt"));
    ven.save(dir.file("en.vocab"));
    vde.save(dir.file("de.vocab"));
    vfr.save(dir.file("fr.vocab"));

    REQUIRE(run_cli("train --corpus " + dir.file("en1.txt") + " " + dir.file("de.txt") + " " +
                    dir.file("en.vocab") + " " + dir.file("de.vocab") + " --corpus " +
                    dir.file("en2.txt") + " " + dir.file("fr.txt") + " " +
                    dir.file("en.vocab") + " " + dir.file("fr.vocab") +
                    " --dim 6 --epochs 1 --noise-count 1 --margin 1 --seed 3 --out " +
                    dir.file("m.bin")) == 0);
    const auto model = load_model(dir.file("m.bin"));
    CHECK(model.table_count() == 3);
    CHECK(model.has("en"));
    CHECK(model.has("de"));
    CHECK(model.has("fr"));
}

TEST_CASE("cli export and nn") {
    CliFixture fx;
    REQUIRE(run_cli(fx.train_args(fx.dir.file("m.bin"))) == 0);

    REQUIRE(run_cli("export --model " + fx.dir.file("m.bin") + " --lang aa --vocab " +
                    fx.dir.file("a.vocab") + " --out " + fx.dir.file("emb.txt")) == 0);
    const std::string emb = test_util::read_file(fx.dir.file("emb.txt"));
    CHECK(std::count(emb.begin(), emb.end(), '\n') ==
          static_cast<long>(fx.spec.vocab_size) + 1);

    // self-query: rank 1 is the word itself with similarity 1
    REQUIRE(run_cli("nn --model " + fx.dir.file("m.bin") +
                    " --query w0 --lang aa --target-lang aa --vocab " + fx.dir.file("a.vocab") +
                    " --target-vocab " + fx.dir.file("a.vocab") + " --top-k 3",
                    fx.dir.file("nn.out")) == 0);
    const std::string nn_out = test_util::read_file(fx.dir.file("nn.out"));
    CHECK(nn_out.rfind("1 w0 1\n", 0) == 0);

    // unknown token is a data error
    CHECK(run_cli("nn --model " + fx.dir.file("m.bin") +
                  " --query nosuchtoken --lang aa --target-lang bb --vocab " +
                  fx.dir.file("a.vocab") + " --target-vocab " + fx.dir.file("b.vocab")) == 2);

    // unknown language tag is a data error
    CHECK(run_cli("export --model " + fx.dir.file("m.bin") + " --lang zz --vocab " +
                  fx.dir.file("a.vocab") + " --out " + fx.dir.file("bad.txt")) == 2);
}

TEST_CASE("cli cldc handles separable data and rejects bad sizes") {
    CliFixture fx;
    REQUIRE(run_cli(fx.train_args(fx.dir.file("m.bin"))) == 0);

    SyntheticSpec doc_spec = fx.spec;
    doc_spec.doc_count = 40;
    doc_spec.class_token_rate = 0.8;
    const auto docs = gen_labeled_docs(doc_spec, "aa", {}, 21);
    const auto vocab_a = synthetic_vocabulary("aa", fx.spec.vocab_size);
    write_documents(docs, vocab_a, fx.dir.file("docs.txt"));
    save_label_map(docs.class_names, fx.dir.file("labels.txt"));

    // identical train/test in one language
    REQUIRE(run_cli("cldc --model " + fx.dir.file("m.bin") + " --train-docs " +
                    fx.dir.file("docs.txt") + " --train-vocab " + fx.dir.file("a.vocab") +
                    " --test-docs " + fx.dir.file("docs.txt") + " --test-vocab " +
                    fx.dir.file("a.vocab") + " --labels " + fx.dir.file("labels.txt") +
                    " --sizes 40 --out " + fx.dir.file("report.txt")) == 0);
    const std::string report = test_util::read_file(fx.dir.file("report.txt"));
    CHECK(report.rfind("40\t", 0) == 0);
    CHECK(test_util::read_file(fx.dir.file("report.txt.json")).find("majority_baseline") !=
          std::string::npos);

    // size 0 is an input error
    CHECK(run_cli("cldc --model " + fx.dir.file("m.bin") + " --train-docs " +
                  fx.dir.file("docs.txt") + " --train-vocab " + fx.dir.file("a.vocab") +
                  " --test-docs " + fx.dir.file("docs.txt") + " --test-vocab " +
                  fx.dir.file("a.vocab") + " --labels " + fx.dir.file("labels.txt") +
                  " --sizes 0 --out " + fx.dir.file("r0.txt")) == 2);
}

TEST_CASE("cli exit codes for usage and config errors") {
    CHECK(run_cli("nosuchcommand") == 1);
    CliFixture fx;
    // dim 0 is a configuration error
    CHECK(run_cli(fx.train_args(fx.dir.file("m.bin"), "--dim 0")) == 1);
    // missing corpus file is a data error
    CHECK(run_cli("train --corpus /nonexistent/a /nonexistent/b /nonexistent/va /nonexistent/vb"
                  " --out " + fx.dir.file("m.bin")) == 2);
}
