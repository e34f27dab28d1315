#include "bicvm/model_io.hpp"

#include <array>
#include <bit>
#include <cstring>
#include <fstream>
#include <iomanip>
#include <sstream>

#include "bicvm/error.hpp"

namespace bicvm {

namespace {

constexpr std::array<char, 6> kMagic = {'B', 'I', 'C', 'V', 'M', '1'};

void put_u32(std::ostream& out, std::uint32_t v) {
    std::array<unsigned char, 4> b{};
    for (int i = 0; i < 4; ++i) b[i] = static_cast<unsigned char>(v >> (8 * i));
    out.write(reinterpret_cast<const char*>(b.data()), b.size());
}

void put_u64(std::ostream& out, std::uint64_t v) {
    std::array<unsigned char, 8> b{};
    for (int i = 0; i < 8; ++i) b[i] = static_cast<unsigned char>(v >> (8 * i));
    out.write(reinterpret_cast<const char*>(b.data()), b.size());
}

void put_f32(std::ostream& out, float v) {
    const std::uint32_t bits = std::bit_cast<std::uint32_t>(v);
    put_u32(out, bits);
}

std::uint32_t get_u32(std::istream& in) {
    std::array<unsigned char, 4> b{};
    in.read(reinterpret_cast<char*>(b.data()), b.size());
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(b[i]) << (8 * i);
    return v;
}

std::uint64_t get_u64(std::istream& in) {
    std::array<unsigned char, 8> b{};
    in.read(reinterpret_cast<char*>(b.data()), b.size());
    std::uint64_t v = 0;
    for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(b[i]) << (8 * i);
    return v;
}

float get_f32(std::istream& in) {
    return std::bit_cast<float>(get_u32(in));
}

}  // namespace

void save_model(const BiModel& model, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError("cannot open model file for writing: " + path);
    out.write(kMagic.data(), kMagic.size());
    put_u32(out, static_cast<std::uint32_t>(model.dim()));
    put_u32(out, static_cast<std::uint32_t>(model.table_count()));
    for (const auto& table : model.tables()) {
        const std::string& tag = table.language_tag();
        put_u32(out, static_cast<std::uint32_t>(tag.size()));
        out.write(tag.data(), static_cast<std::streamsize>(tag.size()));
        put_u64(out, table.rows());
        for (double v : table.raw()) put_f32(out, static_cast<float>(v));
    }
    if (!out) throw DataError("write failed: " + path);
}

BiModel load_model(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot open model file: " + path);
    std::array<char, 6> magic{};
    in.read(magic.data(), magic.size());
    if (!in || magic != kMagic) throw DataError("not a model file: " + path);

    const std::uint32_t dim = get_u32(in);
    const std::uint32_t table_count = get_u32(in);
    BiModel model(dim);
    for (std::uint32_t t = 0; t < table_count; ++t) {
        const std::uint32_t tag_len = get_u32(in);
        std::string tag(tag_len, '\0');
        in.read(tag.data(), tag_len);
        const std::uint64_t vocab_size = get_u64(in);
        EmbeddingTable table(tag, vocab_size, dim);
        for (double& v : table.raw()) v = get_f32(in);
        if (!in) throw DataError("truncated model file: " + path);
        model.add_table(std::move(table));
    }
    return model;
}

void export_embeddings(const EmbeddingTable& table, const Vocabulary& vocab,
                       const std::string& path) {
    if (vocab.size() != table.rows()) {
        throw DataError("vocabulary size " + std::to_string(vocab.size()) +
                        " does not match table rows " + std::to_string(table.rows()));
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError("cannot open export file for writing: " + path);
    out << table.rows() << " " << table.dim() << "\n";
    out << std::setprecision(9);
    for (std::size_t id = 0; id < table.rows(); ++id) {
        out << vocab.token(static_cast<WordId>(id));
        for (double v : table.row(static_cast<WordId>(id))) out << " " << v;
        out << "\n";
    }
    if (!out) throw DataError("write failed: " + path);
}

EmbeddingTable import_embeddings(const std::string& path, const std::string& language_tag,
                                 std::vector<std::string>* tokens_out) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot open embedding file: " + path);
    std::size_t rows = 0, dim = 0;
    in >> rows >> dim;
    if (!in || dim == 0) throw DataError("bad embedding header in " + path);
    EmbeddingTable table(language_tag, rows, dim);
    for (std::size_t id = 0; id < rows; ++id) {
        std::string token;
        in >> token;
        for (double& v : table.row(static_cast<WordId>(id))) in >> v;
        if (!in) throw DataError("truncated embedding file: " + path);
        if (tokens_out) tokens_out->push_back(std::move(token));
    }
    return table;
}

}  // namespace bicvm
