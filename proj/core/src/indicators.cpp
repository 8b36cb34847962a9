#include "peeragree/indicators.hpp"

#include <algorithm>
#include <numeric>

namespace peeragree {
namespace {

// Record indices in ascending pub_id order; all reductions follow this order.
std::vector<std::size_t> order_by_pub_id(const Corpus& corpus) {
    std::vector<std::size_t> order(corpus.records.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return corpus.records[a].pub_id < corpus.records[b].pub_id;
    });
    return order;
}

std::string journal_year_key(const PublicationRecord& r) { return r.journal_id + "|" + std::to_string(r.year); }

}  // namespace

std::string_view to_string(FlagReason reason) noexcept {
    switch (reason) {
        case FlagReason::unredistributable_multidisciplinary: return "unredistributable_multidisciplinary";
        case FlagReason::undefined_baseline: return "undefined_baseline";
        case FlagReason::zero_mean_cell: return "zero_mean_cell";
    }
    return "unknown";
}

Reassignment reassign_multidisciplinary(const Corpus& corpus, const std::string& multidisciplinary_label) {
    Reassignment out{corpus, {}};
    for (auto& r : out.corpus.records) {
        const auto multi = r.category_weights.find(multidisciplinary_label);
        if (multi == r.category_weights.end()) continue;
        double ref_mass = 0.0;
        if (r.ref_category_weights) {
            for (const auto& [label, w] : *r.ref_category_weights) {
                if (label != multidisciplinary_label) ref_mass += w;
            }
        }
        if (!(ref_mass > 0.0)) {
            out.flagged.push_back({r.pub_id, FlagReason::unredistributable_multidisciplinary});
            continue;
        }
        const double moved = multi->second;
        WeightMap updated = r.category_weights;
        updated.erase(multidisciplinary_label);
        for (const auto& [label, w] : *r.ref_category_weights) {
            if (label != multidisciplinary_label) updated[label] += moved * (w / ref_mass);
        }
        r.category_weights = std::move(updated);
    }
    return out;
}

const BaselineCell* FieldYearBaseline::find(const std::string& field, int year) const {
    const auto it = cells.find(FieldYear{field, year});
    return it == cells.end() ? nullptr : &it->second;
}

FieldYearBaseline compute_baselines(const Corpus& corpus) {
    FieldYearBaseline base;
    for (std::size_t i : order_by_pub_id(corpus)) {
        const auto& r = corpus.records[i];
        for (const auto& [field, w] : r.category_weights) {
            if (!(w > 0.0)) continue;
            auto& cell = base.cells[FieldYear{field, r.year}];
            cell.weight_mass += w;
            cell.weighted_citations += w * static_cast<double>(r.citations);
        }
    }
    for (auto& [key, cell] : base.cells) cell.mean_citations = cell.weighted_citations / cell.weight_mass;
    return base;
}

double compute_ncs(const PublicationRecord& record, const FieldYearBaseline& baselines) {
    double ncs = 0.0;
    const auto c = static_cast<double>(record.citations);
    for (const auto& [field, w] : record.category_weights) {
        const BaselineCell* cell = baselines.find(field, record.year);
        if (cell == nullptr) {
            throw IndicatorUndefined(FlagReason::undefined_baseline,
                                     "no baseline for field '" + field + "' in " + std::to_string(record.year));
        }
        if (cell->mean_citations == 0.0) {
            throw IndicatorUndefined(FlagReason::zero_mean_cell,
                                     "field '" + field + "' has zero mean citations in " + std::to_string(record.year));
        }
        ncs += w * (c / cell->mean_citations);
    }
    return ncs;
}

std::map<std::string, double> compute_njs(const Corpus& corpus, const std::map<std::string, double>& ncs) {
    struct Group {
        double sum = 0.0;
        std::size_t n = 0;
    };
    std::map<std::string, Group> groups;
    std::vector<std::pair<const std::string*, std::string>> members;  // pub_id, group key
    for (std::size_t i : order_by_pub_id(corpus)) {
        const auto& r = corpus.records[i];
        const auto it = ncs.find(r.pub_id);
        if (it == ncs.end()) continue;
        auto key = journal_year_key(r);
        auto& g = groups[key];
        g.sum += it->second;
        ++g.n;
        members.emplace_back(&r.pub_id, std::move(key));
    }
    std::map<std::string, double> njs;
    for (const auto& [id, key] : members) {
        const auto& g = groups.at(key);
        njs.emplace(*id, g.sum / static_cast<double>(g.n));
    }
    return njs;
}

std::map<std::string, double> percentile_normalize(std::span<const std::pair<std::string, double>> values,
                                                   const std::map<std::string, std::string>& grouping) {
    std::map<std::string, std::vector<std::pair<double, const std::string*>>> groups;
    for (const auto& [id, v] : values) {
        const auto g = grouping.find(id);
        if (g == grouping.end()) throw ValidationError("no percentile group", id);
        groups[g->second].emplace_back(v, &id);
    }
    std::map<std::string, double> out;
    for (auto& [label, members] : groups) {
        std::sort(members.begin(), members.end(),
                  [](const auto& a, const auto& b) { return a.first < b.first || (a.first == b.first && *a.second < *b.second); });
        const auto n = static_cast<double>(members.size());
        std::size_t i = 0;
        while (i < members.size()) {
            std::size_t j = i;
            while (j + 1 < members.size() && members[j + 1].first == members[i].first) ++j;
            // 1-based ranks i+1..j+1 share their mean rank
            const double rank = (static_cast<double>(i + 1) + static_cast<double>(j + 1)) / 2.0;
            const double pct = 100.0 * (rank - 0.5) / n;
            for (std::size_t k = i; k <= j; ++k) out[*members[k].second] = pct;
            i = j + 1;
        }
    }
    return out;
}

const std::string& dominant_category(const PublicationRecord& record) {
    if (record.category_weights.empty()) throw ValidationError("no category weights", record.pub_id);
    auto best = record.category_weights.begin();
    for (auto it = record.category_weights.begin(); it != record.category_weights.end(); ++it) {
        if (it->second > best->second) best = it;
    }
    return best->first;
}

IndicatorTable compute_indicators(const Corpus& corpus, const FieldYearBaseline& baselines) {
    IndicatorTable table;
    for (std::size_t i : order_by_pub_id(corpus)) {
        const auto& r = corpus.records[i];
        try {
            table.ncs.emplace(r.pub_id, compute_ncs(r, baselines));
        } catch (const IndicatorUndefined& e) {
            table.flagged.push_back({r.pub_id, e.reason()});
        }
    }
    table.njs = compute_njs(corpus, table.ncs);

    bool need_citation = false;
    bool need_journal = false;
    for (const auto& r : corpus.records) {
        if (!table.ncs.contains(r.pub_id)) continue;
        ++table.journal_group_sizes[journal_year_key(r)];
        need_citation |= !r.ext_citation_percentile.has_value();
        need_journal |= !r.ext_journal_percentile.has_value();
    }

    std::map<std::string, double> internal_citation;
    std::map<std::string, double> internal_journal;
    if (need_citation || need_journal) {
        std::map<std::string, std::string> grouping;
        std::vector<std::pair<std::string, double>> citations;
        std::vector<std::pair<std::string, double>> journal;
        for (const auto& r : corpus.records) {
            const auto it = table.njs.find(r.pub_id);
            if (it == table.njs.end()) continue;
            grouping.emplace(r.pub_id, dominant_category(r) + "|" + std::to_string(r.year));
            citations.emplace_back(r.pub_id, static_cast<double>(r.citations));
            journal.emplace_back(r.pub_id, it->second);
        }
        if (need_citation) internal_citation = percentile_normalize(citations, grouping);
        if (need_journal) internal_journal = percentile_normalize(journal, grouping);
    }

    for (const auto& r : corpus.records) {
        if (!table.ncs.contains(r.pub_id)) continue;
        if (r.ext_citation_percentile) {
            table.citation_percentile.emplace(r.pub_id, *r.ext_citation_percentile);
        } else {
            table.citation_percentile.emplace(r.pub_id, internal_citation.at(r.pub_id));
            ++table.imputed_citation_percentiles;
        }
        if (r.ext_journal_percentile) {
            table.journal_percentile.emplace(r.pub_id, *r.ext_journal_percentile);
        } else {
            table.journal_percentile.emplace(r.pub_id, internal_journal.at(r.pub_id));
            ++table.imputed_journal_percentiles;
        }
    }
    return table;
}

}  // namespace peeragree
