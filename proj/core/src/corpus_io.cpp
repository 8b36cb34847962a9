#include "peeragree/corpus_io.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include <json.hpp>

#include "peeragree/error.hpp"

namespace peeragree {
namespace {

using json = nlohmann::json;

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
    return s;
}

std::vector<std::string> split_row(std::string_view line, char delim, std::size_t row) {
    std::vector<std::string> fields;
    std::string cur;
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        const char c = line[i];
        if (quoted) {
            if (c == '"') {
                if (i + 1 < line.size() && line[i + 1] == '"') {
                    cur.push_back('"');
                    ++i;
                } else {
                    quoted = false;
                }
            } else {
                cur.push_back(c);
            }
        } else if (c == '"') {
            quoted = true;
        } else if (c == delim) {
            fields.push_back(std::move(cur));
            cur.clear();
        } else {
            cur.push_back(c);
        }
    }
    if (quoted) throw ParseError("unterminated quoted field", row);
    fields.push_back(std::move(cur));
    return fields;
}

template <typename T>
T parse_integer(std::string_view text, std::string_view column, std::size_t row) {
    text = trim(text);
    T value{};
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc{} || ptr != text.data() + text.size() || text.empty()) {
        throw ParseError("column " + std::string(column) + ": '" + std::string(text) + "' is not an integer", row);
    }
    return value;
}

double parse_real(std::string_view text, std::string_view context, std::size_t row) {
    text = trim(text);
    double value = 0.0;
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc{} || ptr != text.data() + text.size() || text.empty() || !std::isfinite(value)) {
        throw ParseError(std::string(context) + ": '" + std::string(text) + "' is not a number", row);
    }
    return value;
}

std::optional<double> parse_optional_real(std::string_view text, std::string_view column, std::size_t row) {
    if (trim(text).empty()) return std::nullopt;
    return parse_real(text, "column " + std::string(column), row);
}

WeightMap parse_weights_at(std::string_view text, std::size_t row) {
    WeightMap out;
    text = trim(text);
    while (!text.empty()) {
        const auto semi = text.find(';');
        std::string_view pair = trim(text.substr(0, semi));
        text = semi == std::string_view::npos ? std::string_view{} : text.substr(semi + 1);
        if (pair.empty()) continue;
        const auto colon = pair.rfind(':');
        if (colon == std::string_view::npos) {
            throw ParseError("weight entry '" + std::string(pair) + "' lacks ':'", row);
        }
        std::string label(trim(pair.substr(0, colon)));
        if (label.empty()) throw ParseError("weight entry '" + std::string(pair) + "' has an empty label", row);
        const double w = parse_real(pair.substr(colon + 1), "weight of " + label, row);
        if (!out.emplace(label, w).second) throw ParseError("category '" + label + "' listed twice", row);
    }
    return out;
}

enum Column : std::size_t {
    c_pub_id, c_institution, c_area, c_year, c_citations, c_journal, c_weights, c_refs,
    c_r1o, c_r1r, c_r1i, c_r2o, c_r2r, c_r2i, c_ext_cit, c_ext_jour, c_count
};

constexpr std::array<bool, c_count> kRequired = {true, true, true, true, true, true, true, false,
                                                 true, true, true, true, true, true, false, false};

// Field accessor shared by the delimited and JSONL readers: returns the raw text of a
// column, or nullopt when the column is absent/null.
PublicationRecord build_record(const std::array<std::optional<std::string>, c_count>& f, std::size_t row) {
    auto text = [&](Column c) -> std::string_view { return f[c] ? std::string_view(*f[c]) : std::string_view{}; };
    auto required = [&](Column c) -> std::string_view {
        if (!f[c]) throw ParseError("missing column " + std::string(kCorpusColumns[c]), row);
        return trim(*f[c]);
    };
    auto review = [&](Column o, Column r, Column i) -> std::optional<ReviewerScore> {
        if (trim(text(o)).empty() && trim(text(r)).empty() && trim(text(i)).empty()) return std::nullopt;
        return ReviewerScore{parse_integer<int>(text(o), kCorpusColumns[o], row),
                             parse_integer<int>(text(r), kCorpusColumns[r], row),
                             parse_integer<int>(text(i), kCorpusColumns[i], row)};
    };

    PublicationRecord rec;
    rec.pub_id = std::string(required(c_pub_id));
    if (rec.pub_id.empty()) throw ParseError("empty pub_id", row);
    rec.institution_id = std::string(required(c_institution));
    rec.area_id = std::string(required(c_area));
    rec.year = parse_integer<int>(required(c_year), "year", row);
    rec.citations = parse_integer<std::int64_t>(required(c_citations), "citations", row);
    rec.journal_id = std::string(required(c_journal));
    rec.category_weights = parse_weights_at(required(c_weights), row);
    if (!trim(text(c_refs)).empty()) rec.ref_category_weights = parse_weights_at(text(c_refs), row);
    rec.review_a = review(c_r1o, c_r1r, c_r1i);
    rec.review_b = review(c_r2o, c_r2r, c_r2i);
    rec.ext_citation_percentile = parse_optional_real(text(c_ext_cit), kCorpusColumns[c_ext_cit], row);
    rec.ext_journal_percentile = parse_optional_real(text(c_ext_jour), kCorpusColumns[c_ext_jour], row);
    return rec;
}

std::vector<PublicationRecord> read_delimited(std::istream& in, char delim) {
    std::string line;
    std::size_t row = 0;
    std::array<std::optional<std::size_t>, c_count> position{};
    std::size_t header_width = 0;
    bool have_header = false;
    std::vector<PublicationRecord> records;
    while (std::getline(in, line)) {
        ++row;
        if (trim(line).empty()) continue;
        auto fields = split_row(line, delim, row);
        if (!have_header) {
            header_width = fields.size();
            for (std::size_t i = 0; i < fields.size(); ++i) {
                const auto name = trim(fields[i]);
                const auto it = std::find(std::begin(kCorpusColumns), std::end(kCorpusColumns), name);
                if (it == std::end(kCorpusColumns)) throw ParseError("unknown column '" + std::string(name) + "'", row);
                const auto c = static_cast<std::size_t>(it - std::begin(kCorpusColumns));
                if (position[c]) throw ParseError("duplicate column '" + std::string(name) + "'", row);
                position[c] = i;
            }
            for (std::size_t c = 0; c < c_count; ++c) {
                if (kRequired[c] && !position[c]) {
                    throw ParseError("header lacks required column '" + std::string(kCorpusColumns[c]) + "'", row);
                }
            }
            have_header = true;
            continue;
        }
        if (fields.size() != header_width) {
            throw ParseError("expected " + std::to_string(header_width) + " fields, found " +
                                 std::to_string(fields.size()),
                             row);
        }
        std::array<std::optional<std::string>, c_count> f;
        for (std::size_t c = 0; c < c_count; ++c) {
            if (position[c]) f[c] = std::move(fields[*position[c]]);
        }
        records.push_back(build_record(f, row));
    }
    if (!have_header) throw ParseError("empty corpus file (no header)", 0);
    return records;
}

std::optional<std::string> json_field_text(const json& obj, std::string_view key, std::size_t row) {
    const auto it = obj.find(std::string(key));
    if (it == obj.end() || it->is_null()) return std::nullopt;
    if (it->is_string()) return it->get<std::string>();
    if (it->is_number_integer()) return std::to_string(it->get<std::int64_t>());
    if (it->is_number()) return format_double(it->get<double>());
    if (it->is_object() && (key == "category_weights" || key == "ref_category_weights")) {
        WeightMap w;
        for (const auto& [label, value] : it->items()) {
            if (!value.is_number()) throw ParseError("weight of '" + label + "' is not a number", row);
            w.emplace(label, value.get<double>());
        }
        return format_weights(w);
    }
    throw ParseError("field '" + std::string(key) + "' has an unsupported JSON type", row);
}

std::vector<PublicationRecord> read_jsonl(std::istream& in) {
    std::string line;
    std::size_t row = 0;
    std::vector<PublicationRecord> records;
    while (std::getline(in, line)) {
        ++row;
        if (trim(line).empty()) continue;
        json obj;
        try {
            obj = json::parse(line);
        } catch (const json::parse_error& e) {
            throw ParseError(std::string("malformed JSON: ") + e.what(), row);
        }
        if (!obj.is_object()) throw ParseError("line is not a JSON object", row);
        for (const auto& [key, value] : obj.items()) {
            if (std::find(std::begin(kCorpusColumns), std::end(kCorpusColumns), key) == std::end(kCorpusColumns)) {
                throw ParseError("unknown field '" + key + "'", row);
            }
        }
        std::array<std::optional<std::string>, c_count> f;
        for (std::size_t c = 0; c < c_count; ++c) f[c] = json_field_text(obj, kCorpusColumns[c], row);
        records.push_back(build_record(f, row));
    }
    return records;
}

void check_label(const std::string& label, char delimiter, const std::string& id) {
    if (label.find_first_of(";:\"\n\r") != std::string::npos || label.find(delimiter) != std::string::npos) {
        throw ValidationError("label '" + label + "' contains a reserved character", id);
    }
}

}  // namespace

WeightMap parse_weights(std::string_view text) { return parse_weights_at(text, 0); }

std::string format_double(double value) {
    std::array<char, 64> buf{};
    const auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), value);
    return std::string(buf.data(), ptr);
}

std::string format_weights(const WeightMap& weights) {
    std::string out;
    for (const auto& [label, w] : weights) {
        if (!out.empty()) out.push_back(';');
        out += label;
        out.push_back(':');
        out += format_double(w);
    }
    return out;
}

Corpus read_corpus(std::istream& in, const SchemaOptions& options) {
    CorpusFormat format = options.format;
    if (format == CorpusFormat::automatic) {
        in >> std::ws;
        format = in.peek() == '{' ? CorpusFormat::jsonl : CorpusFormat::delimited;
    }
    Corpus corpus;
    corpus.records = format == CorpusFormat::jsonl ? read_jsonl(in) : read_delimited(in, options.delimiter);
    if (options.census_year) {
        corpus.census_year = *options.census_year;
    } else {
        corpus.census_year = options.window.first;
        for (const auto& r : corpus.records) corpus.census_year = std::max(corpus.census_year, r.year);
    }
    validate_corpus(corpus, options.window);
    return corpus;
}

Corpus load_corpus(const std::filesystem::path& path, const SchemaOptions& options) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open corpus file " + path.string());
    SchemaOptions opts = options;
    const auto ext = path.extension().string();
    if (opts.format == CorpusFormat::automatic) {
        if (ext == ".jsonl" || ext == ".ndjson") opts.format = CorpusFormat::jsonl;
    }
    if (ext == ".tsv" && opts.delimiter == ',') opts.delimiter = '\t';
    return read_corpus(in, opts);
}

void write_corpus(std::ostream& out, const Corpus& corpus, CorpusFormat format, char delimiter) {
    for (const auto& r : corpus.records) {
        for (const std::string* label : {&r.pub_id, &r.institution_id, &r.area_id, &r.journal_id}) {
            check_label(*label, delimiter, r.pub_id);
        }
        for (const auto& [label, w] : r.category_weights) check_label(label, delimiter, r.pub_id);
        if (r.ref_category_weights) {
            for (const auto& [label, w] : *r.ref_category_weights) check_label(label, delimiter, r.pub_id);
        }
    }
    auto opt_real = [](const std::optional<double>& v) { return v ? format_double(*v) : std::string{}; };
    if (format == CorpusFormat::jsonl) {
        for (const auto& r : corpus.records) {
            json obj = json::object();
            obj["pub_id"] = r.pub_id;
            obj["institution_id"] = r.institution_id;
            obj["area_id"] = r.area_id;
            obj["year"] = r.year;
            obj["citations"] = r.citations;
            obj["journal_id"] = r.journal_id;
            obj["category_weights"] = r.category_weights;
            if (r.ref_category_weights) obj["ref_category_weights"] = *r.ref_category_weights;
            if (r.review_a) {
                obj["r1_originality"] = r.review_a->originality;
                obj["r1_rigour"] = r.review_a->rigour;
                obj["r1_impact"] = r.review_a->impact;
            }
            if (r.review_b) {
                obj["r2_originality"] = r.review_b->originality;
                obj["r2_rigour"] = r.review_b->rigour;
                obj["r2_impact"] = r.review_b->impact;
            }
            if (r.ext_citation_percentile) obj["ext_citation_percentile"] = *r.ext_citation_percentile;
            if (r.ext_journal_percentile) obj["ext_journal_percentile"] = *r.ext_journal_percentile;
            out << obj.dump() << '\n';
        }
        return;
    }
    for (std::size_t c = 0; c < c_count; ++c) {
        if (c) out << delimiter;
        out << kCorpusColumns[c];
    }
    out << '\n';
    for (const auto& r : corpus.records) {
        auto review = [&](const std::optional<ReviewerScore>& s) {
            if (s) {
                out << s->originality << delimiter << s->rigour << delimiter << s->impact;
            } else {
                out << delimiter << delimiter;
            }
        };
        out << r.pub_id << delimiter << r.institution_id << delimiter << r.area_id << delimiter << r.year
            << delimiter << r.citations << delimiter << r.journal_id << delimiter
            << format_weights(r.category_weights) << delimiter
            << (r.ref_category_weights ? format_weights(*r.ref_category_weights) : std::string{}) << delimiter;
        review(r.review_a);
        out << delimiter;
        review(r.review_b);
        out << delimiter << opt_real(r.ext_citation_percentile) << delimiter << opt_real(r.ext_journal_percentile)
            << '\n';
    }
}

void save_corpus(const std::filesystem::path& path, const Corpus& corpus, CorpusFormat format, char delimiter) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write corpus file " + path.string());
    write_corpus(out, corpus, format, delimiter);
    if (!out) throw Error("write failed for " + path.string());
}

std::map<std::string, std::int64_t> load_population_counts(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open population file " + path.string());
    std::map<std::string, std::int64_t> counts;
    std::string line;
    std::size_t row = 0;
    while (std::getline(in, line)) {
        ++row;
        if (trim(line).empty()) continue;
        const auto fields = split_row(line, ',', row);
        if (fields.size() != 2) throw ParseError("population rows need 2 fields", row);
        if (row == 1 && trim(fields[0]) == "institution_id") continue;
        const std::string inst(trim(fields[0]));
        const auto n = parse_integer<std::int64_t>(fields[1], "population", row);
        if (n <= 0) throw ParseError("population count must be positive", row);
        if (!counts.emplace(inst, n).second) throw ParseError("institution '" + inst + "' listed twice", row);
    }
    return counts;
}

void save_population_counts(const std::filesystem::path& path, const std::map<std::string, std::int64_t>& counts) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write population file " + path.string());
    out << "institution_id,population\n";
    for (const auto& [inst, n] : counts) out << inst << ',' << n << '\n';
}

}  // namespace peeragree
