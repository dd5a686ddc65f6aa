#include "secrd/artifact.hpp"

#include <stdexcept>

namespace secrd {

namespace {

const std::string kMagic = "SECRD-ARTIFACT\n";

template <class T>
void put(std::string& out, T v, int bytes) {
  for (int i = 0; i < bytes; ++i) out.push_back(static_cast<char>((static_cast<std::uint64_t>(v) >> (8 * i)) & 0xff));
}

nlohmann::json code_tables(const SingleTypeCode& code, std::string& tables) {
  nlohmann::json h;
  h["source_counts"] = code.source_class().type().counts;
  h["length"] = code.length();
  h["key_width"] = code.key_width();
  h["permutation_width"] = code.permutation_width();
  h["permutation_count"] = code.cover().count();
  h["cover_seed"] = code.cover().seed;
  h["rate_bits"] = code.rate();
  h["codebook"] = codebook_summary(code.codebook());
  auto section = [&](const char* name, auto&& write) {
    const std::size_t start = tables.size();
    write();
    h["tables"][name] = {{"offset", start}, {"bytes", tables.size() - start}};
  };
  section("codewords_u8", [&] {
    for (const Word& w : code.codebook().codewords)
      for (Symbol s : w) put(tables, s, 1);
  });
  section("permutations_u16", [&] {
    for (const Permutation& p : code.cover().permutations)
      for (int v : p) put(tables, v, 2);
  });
  section("t_star_u32", [&] {
    for (std::uint32_t t : code.cover().first_cover) put(tables, t, 4);
  });
  section("i_star_u32", [&] {
    for (std::uint64_t r = 0; r < code.cover().first_cover.size(); ++r) put(tables, code.i_star(r), 4);
  });
  return h;
}

std::string assemble(const nlohmann::json& header, const std::string& tables) {
  const std::string text = header.dump();
  std::string out = kMagic;
  put(out, text.size(), 8);
  out += text;
  out += tables;
  return out;
}

}  // namespace

nlohmann::json codebook_summary(const PackingCodebook& b) {
  nlohmann::json j;
  j["codeword_counts"] = b.codeword_type.counts;
  j["key_rate"] = b.key_rate;
  j["key_width"] = b.key_width;
  j["full_cover"] = b.full_cover;
  j["legit_rate"] = b.legit_rate;
  j["d_cover_size"] = b.cover.size();
  j["multiply_covered"] = b.cover.multiply_covered;
  j["cover_target_log2"] = b.cover_target_log2;
  j["cover_passed"] = b.cover_passed;
  j["selection_seed"] = b.selection_seed;
  j["attempts"] = b.attempts;
  j["probes"] = nlohmann::json::array();
  for (const auto& p : b.probes)
    j["probes"].push_back({{"distortion", p.distortion},
                           {"max_count", p.max_count},
                           {"ratio", p.ratio},
                           {"bound", p.bound},
                           {"exhaustive", p.exhaustive},
                           {"passed", p.passed}});
  return j;
}

std::string single_type_artifact(const SingleTypeCode& code, const nlohmann::json& params) {
  std::string tables;
  nlohmann::json header;
  header["format"] = "secrd-code";
  header["version"] = kArtifactVersion;
  header["kind"] = "single_type";
  header["params"] = params;
  header["code"] = code_tables(code, tables);
  return assemble(header, tables);
}

std::string grid_artifact(const GridCode& code, const nlohmann::json& params) {
  std::string tables;
  nlohmann::json header;
  header["format"] = "secrd-code";
  header["version"] = kArtifactVersion;
  header["kind"] = "grid";
  header["params"] = params;
  header["truncated_length"] = code.truncated_length();
  header["ball"] = {{"length", code.ball().length()}, {"radius", code.ball().radius()}, {"size", code.ball().size()}};
  header["max_key_bits"] = code.max_key_bits();
  header["max_cryptogram_bits"] = code.max_cryptogram_bits();
  nlohmann::json raw = nlohmann::json::array();
  for (std::size_t r = 0; r < code.raw_types().size(); ++r)
    raw.push_back({{"counts", code.raw_types()[r]},
                   {"covered", code.covered(r)},
                   {"grid", code.assigned_grid(r)},
                   {"legit_rate", code.legit_rate(r)},
                   {"assignment_distance", code.assignment_distance(r)}});
  header["raw_types"] = raw;
  nlohmann::json grid = nlohmann::json::array();
  for (std::size_t g = 0; g < code.grid().size(); ++g) {
    nlohmann::json e;
    e["counts"] = code.grid()[g].counts;
    if (code.grid_code(g)) e["code"] = code_tables(*code.grid_code(g), tables);
    grid.push_back(std::move(e));
  }
  header["grid"] = grid;
  return assemble(header, tables);
}

ArtifactView read_artifact(const std::string& bytes) {
  if (bytes.compare(0, kMagic.size(), kMagic) != 0) throw std::runtime_error("not a secrd artifact");
  if (bytes.size() < kMagic.size() + 8) throw std::runtime_error("truncated artifact");
  std::uint64_t len = 0;
  for (int i = 0; i < 8; ++i) len |= static_cast<std::uint64_t>(static_cast<unsigned char>(bytes[kMagic.size() + i])) << (8 * i);
  const std::size_t start = kMagic.size() + 8;
  if (bytes.size() < start + len) throw std::runtime_error("truncated artifact header");
  ArtifactView v;
  v.header = nlohmann::json::parse(bytes.substr(start, len));
  if (v.header.value("version", 0) != kArtifactVersion) throw std::runtime_error("unsupported artifact version");
  v.tables = bytes.substr(start + len);
  return v;
}

}  // namespace secrd
