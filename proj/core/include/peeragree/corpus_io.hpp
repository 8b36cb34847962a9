#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>

#include "peeragree/corpus.hpp"

namespace peeragree {

enum class CorpusFormat { automatic, delimited, jsonl };

/// How a corpus file is read. See docs/corpus_schema.md for the normative layout.
struct SchemaOptions {
    CorpusFormat format = CorpusFormat::automatic;
    char delimiter = ',';
    /// When unset, the census year is the latest publication year in the file.
    std::optional<int> census_year;
    YearWindow window{};
};

/// Column order of the delimited format; also the key set of the JSONL format.
inline constexpr std::string_view kCorpusColumns[] = {
    "pub_id",           "institution_id",   "area_id",         "year",
    "citations",        "journal_id",       "category_weights", "ref_category_weights",
    "r1_originality",   "r1_rigour",        "r1_impact",       "r2_originality",
    "r2_rigour",        "r2_impact",        "ext_citation_percentile", "ext_journal_percentile",
};

/// Parses `label:weight;label:weight`. Empty text yields an empty map.
WeightMap parse_weights(std::string_view text);
std::string format_weights(const WeightMap& weights);

/// Shortest text that parses back to exactly `value`.
std::string format_double(double value);

Corpus read_corpus(std::istream& in, const SchemaOptions& options);
Corpus load_corpus(const std::filesystem::path& path, const SchemaOptions& options = {});

/// Canonical serialization; reading it back yields an identical corpus.
void write_corpus(std::ostream& out, const Corpus& corpus, CorpusFormat format = CorpusFormat::delimited,
                  char delimiter = ',');
void save_corpus(const std::filesystem::path& path, const Corpus& corpus,
                 CorpusFormat format = CorpusFormat::delimited, char delimiter = ',');

/// Two-column table `institution_id,population`.
std::map<std::string, std::int64_t> load_population_counts(const std::filesystem::path& path);
void save_population_counts(const std::filesystem::path& path,
                            const std::map<std::string, std::int64_t>& counts);

}  // namespace peeragree
