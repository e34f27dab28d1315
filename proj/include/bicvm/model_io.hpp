#pragma once

#include <string>

#include "bicvm/model.hpp"

namespace bicvm {

// Binary model container:
//   magic "BICVM1"
//   u32 dim, u32 table_count
//   per table: u32 tag_length, tag bytes, u64 vocab_size,
//              vocab_size * dim little-endian float32 rows
// All integers little-endian.
void save_model(const BiModel& model, const std::string& path);
BiModel load_model(const std::string& path);

// Word-vector text convention: "<vocab_size> <dim>" header, then
// "token v_1 ... v_d" per word.
void export_embeddings(const EmbeddingTable& table, const Vocabulary& vocab,
                       const std::string& path);
EmbeddingTable import_embeddings(const std::string& path, const std::string& language_tag,
                                 std::vector<std::string>* tokens_out = nullptr);

}  // namespace bicvm
