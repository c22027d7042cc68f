#include "elsem/graph.hpp"

#include <algorithm>
#include <cctype>
#include <set>
#include <sstream>
#include <unordered_map>

namespace elsem {

namespace {

bool valid_name(const std::string& s) {
    if (s.empty()) return false;
    if (!(std::isalpha(static_cast<unsigned char>(s[0])) || s[0] == '_')) return false;
    for (char c : s)
        if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '_')) return false;
    return true;
}

// Splits a line into whitespace-separated tokens with their 1-based start columns.
std::vector<std::pair<std::string, int>> tokenize(const std::string& line) {
    std::vector<std::pair<std::string, int>> out;
    size_t i = 0;
    while (i < line.size()) {
        while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i]))) ++i;
        if (i >= line.size()) break;
        size_t j = i;
        while (j < line.size() && !std::isspace(static_cast<unsigned char>(line[j]))) ++j;
        out.emplace_back(line.substr(i, j - i), static_cast<int>(i) + 1);
        i = j;
    }
    return out;
}

}  // namespace

MixedGraph MixedGraph::make(std::vector<std::string> names, std::vector<IndexPair> directed,
                            std::vector<IndexPair> bidirected) {
    MixedGraph g;
    const int m = static_cast<int>(names.size());
    if (m == 0) throw std::invalid_argument("graph has no vertices");
    {
        std::set<std::string> seen;
        for (const auto& nm : names) {
            if (!valid_name(nm)) throw std::invalid_argument("invalid vertex name '" + nm + "'");
            if (!seen.insert(nm).second)
                throw std::invalid_argument("duplicate vertex declaration '" + nm + "'");
        }
    }
    auto check_index = [m](int v) {
        if (v < 0 || v >= m) throw std::invalid_argument("edge endpoint out of range");
    };
    g.names_ = std::move(names);
    g.directed_lookup_.assign(static_cast<size_t>(m) * m, 0);
    g.bidirected_lookup_.assign(static_cast<size_t>(m) * m, 0);

    std::set<IndexPair> dset;
    for (auto [u, v] : directed) {
        check_index(u);
        check_index(v);
        if (u == v)
            throw std::invalid_argument("self-loop " + g.names_[u] + " -> " + g.names_[v]);
        dset.insert({u, v});
    }
    std::set<IndexPair> bset;
    for (auto [u, v] : bidirected) {
        check_index(u);
        check_index(v);
        if (u == v)
            throw std::invalid_argument("self-loop " + g.names_[u] + " <-> " + g.names_[v]);
        bset.insert({std::min(u, v), std::max(u, v)});
    }
    g.directed_.assign(dset.begin(), dset.end());
    g.bidirected_.assign(bset.begin(), bset.end());

    g.parents_.assign(m, {});
    g.siblings_.assign(m, {});
    for (auto [u, v] : g.directed_) {
        g.parents_[v].push_back(u);
        g.directed_lookup_[static_cast<size_t>(u) * m + v] = 1;
    }
    for (auto [u, v] : g.bidirected_) {
        g.siblings_[u].push_back(v);
        g.siblings_[v].push_back(u);
        g.bidirected_lookup_[static_cast<size_t>(u) * m + v] = 1;
        g.bidirected_lookup_[static_cast<size_t>(v) * m + u] = 1;
    }
    for (auto& s : g.siblings_) std::sort(s.begin(), s.end());

    for (int u = 0; u < m; ++u)
        for (int v = u + 1; v < m; ++v)
            if (!g.has_bidirected(u, v)) g.nonedges_.emplace_back(u, v);
    return g;
}

MixedGraph MixedGraph::parse(const std::string& text) {
    std::istringstream in(text);
    std::string raw;
    int lineno = 0;
    bool have_nodes = false;
    std::vector<std::string> names;
    std::unordered_map<std::string, int> index;
    std::vector<IndexPair> directed, bidirected;

    while (std::getline(in, raw)) {
        ++lineno;
        if (auto pos = raw.find('#'); pos != std::string::npos) raw.erase(pos);
        auto toks = tokenize(raw);
        if (toks.empty()) continue;

        if (!have_nodes) {
            if (toks[0].first != "nodes:")
                throw ParseError("expected 'nodes:' declaration, got '" + toks[0].first + "'",
                                 lineno, toks[0].second);
            if (toks.size() < 2) throw ParseError("empty vertex list", lineno, toks[0].second);
            for (size_t k = 1; k < toks.size(); ++k) {
                const auto& [nm, col] = toks[k];
                if (!valid_name(nm)) throw ParseError("invalid vertex name '" + nm + "'", lineno, col);
                if (index.count(nm))
                    throw ParseError("duplicate vertex declaration '" + nm + "'", lineno, col);
                index[nm] = static_cast<int>(names.size());
                names.push_back(nm);
            }
            have_nodes = true;
            continue;
        }

        if (toks.size() != 3)
            throw ParseError("expected edge of the form 'U -> V' or 'U <-> V'", lineno,
                             toks[0].second);
        auto lookup = [&](const std::pair<std::string, int>& t) {
            auto it = index.find(t.first);
            if (it == index.end())
                throw ParseError("unknown vertex '" + t.first + "'", lineno, t.second);
            return it->second;
        };
        const int u = lookup(toks[0]);
        const int v = lookup(toks[2]);
        const std::string& op = toks[1].first;
        if (u == v)
            throw ParseError("self-loop on vertex '" + toks[0].first + "'", lineno, toks[0].second);
        if (op == "->")
            directed.emplace_back(u, v);
        else if (op == "<-")
            directed.emplace_back(v, u);
        else if (op == "<->")
            bidirected.emplace_back(u, v);
        else
            throw ParseError("unknown edge operator '" + op + "'", lineno, toks[1].second);
    }
    if (!have_nodes) throw ParseError("missing 'nodes:' declaration", lineno == 0 ? 1 : lineno);
    return make(std::move(names), std::move(directed), std::move(bidirected));
}

std::string MixedGraph::serialize() const {
    std::ostringstream out;
    out << "nodes:";
    for (const auto& nm : names_) out << ' ' << nm;
    out << '\n';
    for (auto [u, v] : directed_) out << names_[u] << " -> " << names_[v] << '\n';
    for (auto [u, v] : bidirected_) out << names_[u] << " <-> " << names_[v] << '\n';
    return out.str();
}

int MixedGraph::index_of(const std::string& name) const {
    for (size_t i = 0; i < names_.size(); ++i)
        if (names_[i] == name) return static_cast<int>(i);
    throw std::invalid_argument("unknown vertex '" + name + "'");
}

bool MixedGraph::has_vertex(const std::string& name) const {
    return std::find(names_.begin(), names_.end(), name) != names_.end();
}

const std::vector<int>& MixedGraph::parents(int v) const {
    if (v < 0 || v >= num_vertices()) throw std::invalid_argument("unknown vertex index");
    return parents_[v];
}

const std::vector<int>& MixedGraph::siblings(int v) const {
    if (v < 0 || v >= num_vertices()) throw std::invalid_argument("unknown vertex index");
    return siblings_[v];
}

bool MixedGraph::has_directed(int u, int v) const {
    return directed_lookup_[static_cast<size_t>(u) * num_vertices() + v] != 0;
}

bool MixedGraph::has_bidirected(int u, int v) const {
    return bidirected_lookup_[static_cast<size_t>(u) * num_vertices() + v] != 0;
}

bool MixedGraph::is_acyclic() const {
    // Kahn's algorithm on the directed part.
    const int m = num_vertices();
    std::vector<int> indeg(m, 0);
    for (auto [u, v] : directed_) ++indeg[v];
    std::vector<int> stack;
    for (int v = 0; v < m; ++v)
        if (indeg[v] == 0) stack.push_back(v);
    int seen = 0;
    while (!stack.empty()) {
        int u = stack.back();
        stack.pop_back();
        ++seen;
        for (auto [a, b] : directed_)
            if (a == u && --indeg[b] == 0) stack.push_back(b);
    }
    return seen == m;
}

DofCounts MixedGraph::dof_counts() const {
    const int m = num_vertices();
    DofCounts c;
    c.q = m + m * (m + 1) / 2;
    c.d = static_cast<int>(directed_.size()) + static_cast<int>(bidirected_.size()) + m;
    c.profile_constraints = m + m * (m - 1) / 2 - static_cast<int>(bidirected_.size());
    return c;
}

bool MixedGraph::is_nested_in(const MixedGraph& full) const {
    if (names_ != full.names_) return false;
    for (auto [u, v] : directed_)
        if (!full.has_directed(u, v)) return false;
    for (auto [u, v] : bidirected_)
        if (!full.has_bidirected(u, v)) return false;
    return true;
}

bool MixedGraph::operator==(const MixedGraph& other) const {
    return names_ == other.names_ && directed_ == other.directed_ &&
           bidirected_ == other.bidirected_;
}

}  // namespace elsem
