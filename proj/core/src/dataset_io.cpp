#include "graphkm/dataset_io.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <string>

#include "graphkm/errors.hpp"

namespace graphkm {

namespace {

[[noreturn]] void parse_fail(const std::filesystem::path& path, std::size_t line,
                             const std::string& what) {
    throw ParseError(path.string() + ":" + std::to_string(line) + ": " + what);
}

double parse_real(const std::string& tok, const std::filesystem::path& path, std::size_t line) {
    try {
        std::size_t used = 0;
        const double v = std::stod(tok, &used);
        if (used != tok.size()) parse_fail(path, line, "trailing junk in number '" + tok + "'");
        return v;
    } catch (const std::invalid_argument&) {
        parse_fail(path, line, "expected a number, got '" + tok + "'");
    } catch (const std::out_of_range&) {
        parse_fail(path, line, "number out of range: '" + tok + "'");
    }
}

std::size_t parse_count(const std::string& tok, const std::filesystem::path& path,
                        std::size_t line) {
    for (char c : tok)
        if (!std::isdigit(static_cast<unsigned char>(c)))
            parse_fail(path, line, "expected a non-negative integer, got '" + tok + "'");
    return static_cast<std::size_t>(std::stoull(tok));
}

std::vector<std::string> split_ws(const std::string& s) {
    std::istringstream in(s);
    std::vector<std::string> out;
    std::string tok;
    while (in >> tok) out.push_back(tok);
    return out;
}

std::string real_to_text(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string applied_to_text(const DatasetHeader& h) {
    std::string s;
    if (h.onehot_applied) s += "onehot";
    if (h.edge_flag_applied) {
        if (!s.empty()) s += ",";
        s += "edge_flag";
    }
    return s.empty() ? "none" : s;
}

DatasetHeader parse_header(const std::vector<std::string>& toks,
                           const std::filesystem::path& path, std::size_t line) {
    if (toks.size() != 7 || toks[0] != "graphset" || toks[1] != "1")
        parse_fail(path, line,
                   "expected header 'graphset 1 node_dim=... edge_dim=... "
                   "node_categories=... edge_categories=... applied=...'");
    DatasetHeader h;
    auto field = [&](const std::string& tok, const char* key) {
        const std::string prefix = std::string(key) + "=";
        if (tok.rfind(prefix, 0) != 0)
            parse_fail(path, line, "expected '" + prefix + "...', got '" + tok + "'");
        return tok.substr(prefix.size());
    };
    h.node_dim = parse_count(field(toks[2], "node_dim"), path, line);
    h.edge_dim = parse_count(field(toks[3], "edge_dim"), path, line);
    h.node_categories = parse_count(field(toks[4], "node_categories"), path, line);
    h.edge_categories = parse_count(field(toks[5], "edge_categories"), path, line);
    const std::string applied = field(toks[6], "applied");
    if (applied != "none") {
        std::istringstream in(applied);
        std::string part;
        while (std::getline(in, part, ',')) {
            if (part == "onehot")
                h.onehot_applied = true;
            else if (part == "edge_flag")
                h.edge_flag_applied = true;
            else
                parse_fail(path, line, "unknown transform tag '" + part + "'");
        }
    }
    return h;
}

std::vector<double> onehot(double raw, std::size_t categories, const std::filesystem::path& path,
                           std::size_t line) {
    const double rounded = std::nearbyint(raw);
    if (raw != rounded || rounded < 0.0 || rounded >= static_cast<double>(categories))
        parse_fail(path, line,
                   "categorical value " + real_to_text(raw) + " outside [0, " +
                       std::to_string(categories) + ")");
    std::vector<double> v(categories, 0.0);
    v[static_cast<std::size_t>(rounded)] = 1.0;
    return v;
}

}  // namespace

DatasetStats compute_stats(const std::vector<AttributedGraph>& graphs) {
    DatasetStats s;
    s.graphs = graphs.size();
    std::set<std::string> classes;
    double nodes = 0.0, edges = 0.0;
    for (const auto& g : graphs) {
        if (g.label) classes.insert(*g.label);
        nodes += static_cast<double>(g.order);
        edges += static_cast<double>(g.edges.size());
        s.max_nodes = std::max(s.max_nodes, g.order);
        s.max_edges = std::max(s.max_edges, g.edges.size());
    }
    s.classes = classes.size();
    if (!graphs.empty()) {
        s.avg_nodes = nodes / static_cast<double>(graphs.size());
        s.avg_edges = edges / static_cast<double>(graphs.size());
    }
    return s;
}

std::string format_stats(const DatasetStats& s) {
    char buf[160];
    std::snprintf(buf, sizeof buf,
                  "graphs %zu | classes %zu | avg nodes %.1f | max nodes %zu | "
                  "avg edges %.1f | max edges %zu",
                  s.graphs, s.classes, s.avg_nodes, s.max_nodes, s.avg_edges, s.max_edges);
    return buf;
}

std::string file_checksum(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot read '" + path.string() + "'");
    std::uint64_t h = 0xcbf29ce484222325ULL;
    char c;
    while (in.get(c)) {
        h ^= static_cast<unsigned char>(c);
        h *= 0x100000001b3ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

Dataset load_dataset(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot read '" + path.string() + "'");

    Dataset ds;
    ds.checksum = file_checksum(path);

    std::string line;
    std::size_t lineno = 0;
    bool have_header = false;
    DatasetHeader file_header;

    AttributedGraph current;
    std::size_t want_nodes = 0, want_edges = 0;
    bool in_graph = false;
    std::set<std::string> ids;

    auto finish_graph = [&](std::size_t at_line) {
        if (current.node_attrs.size() != want_nodes || current.edges.size() != want_edges)
            parse_fail(path, at_line,
                       "graph '" + current.id + "' declared " + std::to_string(want_nodes) +
                           " nodes / " + std::to_string(want_edges) + " edges but provided " +
                           std::to_string(current.node_attrs.size()) + " / " +
                           std::to_string(current.edges.size()));
        std::sort(current.edges.begin(), current.edges.end(),
                  [](const EdgeRecord& a, const EdgeRecord& b) {
                      return std::make_pair(a.u, a.v) < std::make_pair(b.u, b.v);
                  });
        for (std::size_t e = 1; e < current.edges.size(); ++e)
            if (current.edges[e - 1].u == current.edges[e].u &&
                current.edges[e - 1].v == current.edges[e].v)
                parse_fail(path, at_line,
                           "graph '" + current.id + "' repeats edge (" +
                               std::to_string(current.edges[e].u) + ", " +
                               std::to_string(current.edges[e].v) + ")");
        ds.graphs.push_back(std::move(current));
        current = AttributedGraph{};
        in_graph = false;
    };

    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty() || line[0] == '#') continue;
        const auto toks = split_ws(line);
        if (toks.empty()) continue;

        if (!have_header) {
            file_header = parse_header(toks, path, lineno);
            if (file_header.node_categories > 0 && !file_header.onehot_applied &&
                file_header.node_dim != 1)
                parse_fail(path, lineno, "categorical node attributes must be stored as one index");
            if (file_header.edge_categories > 0 && !file_header.onehot_applied &&
                file_header.edge_dim != 1)
                parse_fail(path, lineno, "categorical edge attributes must be stored as one index");
            have_header = true;
            continue;
        }

        if (toks[0] == "g") {
            if (in_graph) finish_graph(lineno);
            if (toks.size() != 5)
                parse_fail(path, lineno, "expected 'g <id> <label|-> <nodes> <edges>'");
            current.id = toks[1];
            if (toks[2] != "-") current.label = toks[2];
            current.order = parse_count(toks[3], path, lineno);
            if (current.order == 0) parse_fail(path, lineno, "graph order must be >= 1");
            want_nodes = current.order;
            want_edges = parse_count(toks[4], path, lineno);
            current.node_dim = file_header.node_dim;
            current.edge_dim = file_header.edge_dim;
            if (!ids.insert(current.id).second)
                parse_fail(path, lineno, "duplicate graph id '" + current.id + "'");
            in_graph = true;
        } else if (toks[0] == "n") {
            if (!in_graph) parse_fail(path, lineno, "node record outside a graph");
            if (toks.size() != 1 + file_header.node_dim)
                throw DimensionError(path.string() + ":" + std::to_string(lineno) +
                                     ": node attribute needs " +
                                     std::to_string(file_header.node_dim) + " values");
            if (current.node_attrs.size() == want_nodes)
                parse_fail(path, lineno, "more node records than declared");
            std::vector<double> attr;
            for (std::size_t t = 1; t < toks.size(); ++t)
                attr.push_back(parse_real(toks[t], path, lineno));
            current.node_attrs.push_back(std::move(attr));
        } else if (toks[0] == "e") {
            if (!in_graph) parse_fail(path, lineno, "edge record outside a graph");
            if (toks.size() != 3 + file_header.edge_dim)
                throw DimensionError(path.string() + ":" + std::to_string(lineno) +
                                     ": edge record needs two endpoints and " +
                                     std::to_string(file_header.edge_dim) + " values");
            if (current.edges.size() == want_edges)
                parse_fail(path, lineno, "more edge records than declared");
            EdgeRecord e;
            e.u = parse_count(toks[1], path, lineno);
            e.v = parse_count(toks[2], path, lineno);
            if (e.u == e.v) parse_fail(path, lineno, "self loops are not allowed");
            if (e.u > e.v) std::swap(e.u, e.v);
            if (e.v >= current.order) parse_fail(path, lineno, "edge endpoint out of range");
            for (std::size_t t = 3; t < toks.size(); ++t)
                e.attr.push_back(parse_real(toks[t], path, lineno));
            current.edges.push_back(std::move(e));
        } else {
            parse_fail(path, lineno, "unknown record '" + toks[0] + "'");
        }
    }
    if (!have_header) parse_fail(path, lineno + 1, "missing header line");
    if (in_graph) finish_graph(lineno);
    if (ds.graphs.empty())
        throw EmptySampleError("dataset '" + path.string() + "' holds no graphs");

    // Transform chain: 1-of-k expansion, then the edge presence flag.
    DatasetHeader h = file_header;
    if (!h.onehot_applied && (h.node_categories > 0 || h.edge_categories > 0)) {
        for (auto& g : ds.graphs) {
            if (h.node_categories > 0) {
                for (auto& attr : g.node_attrs)
                    attr = onehot(attr[0], h.node_categories, path, 0);
                g.node_dim = h.node_categories;
            }
            if (h.edge_categories > 0) {
                for (auto& e : g.edges) e.attr = onehot(e.attr[0], h.edge_categories, path, 0);
                g.edge_dim = h.edge_categories;
            }
        }
        if (h.node_categories > 0) h.node_dim = h.node_categories;
        if (h.edge_categories > 0) h.edge_dim = h.edge_categories;
        h.onehot_applied = true;
    }
    if (!h.edge_flag_applied) {
        for (auto& g : ds.graphs) {
            for (auto& e : g.edges) e.attr.insert(e.attr.begin(), 1.0);
            g.edge_dim = h.edge_dim + 1;
        }
        h.edge_dim += 1;
        h.edge_flag_applied = true;
    }

    ds.header = h;
    ds.space = AttributeSpace{h.node_dim, h.edge_dim};
    for (const auto& g : ds.graphs) validate_graph(g);
    ds.stats = compute_stats(ds.graphs);
    return ds;
}

void save_dataset(const std::filesystem::path& path, const DatasetHeader& header,
                  const std::vector<AttributedGraph>& graphs) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write '" + path.string() + "'");
    out << "graphset 1 node_dim=" << header.node_dim << " edge_dim=" << header.edge_dim
        << " node_categories=" << header.node_categories
        << " edge_categories=" << header.edge_categories << " applied=" << applied_to_text(header)
        << "\n";
    for (const auto& g : graphs) {
        if (g.id.empty() || g.id.find_first_of(" \t") != std::string::npos)
            throw IoError("graph id '" + g.id + "' is not a single token");
        if (g.node_dim != header.node_dim || g.edge_dim != header.edge_dim)
            throw DimensionError("graph '" + g.id + "' does not match the header dimensions");
        out << "g " << g.id << " " << (g.label ? *g.label : "-") << " " << g.order << " "
            << g.edges.size() << "\n";
        for (const auto& attr : g.node_attrs) {
            out << "n";
            for (double v : attr) out << " " << real_to_text(v);
            out << "\n";
        }
        for (const auto& e : g.edges) {
            out << "e " << e.u << " " << e.v;
            for (double v : e.attr) out << " " << real_to_text(v);
            out << "\n";
        }
    }
    if (!out) throw IoError("write failed for '" + path.string() + "'");
}

namespace {

// Minimal element scanner for the GXL subset used by public graph
// collections: opening tags with quoted attributes, typed <attr> children.
struct XmlElement {
    std::string tag;
    std::map<std::string, std::string> attrs;
    std::string body;
};

std::map<std::string, std::string> parse_tag_attrs(const std::string& tag_text) {
    std::map<std::string, std::string> out;
    std::size_t pos = 0;
    while (true) {
        const std::size_t eq = tag_text.find('=', pos);
        if (eq == std::string::npos) break;
        std::size_t key_end = eq;
        while (key_end > 0 && std::isspace(static_cast<unsigned char>(tag_text[key_end - 1])))
            --key_end;
        std::size_t key_begin = key_end;
        while (key_begin > 0 && !std::isspace(static_cast<unsigned char>(tag_text[key_begin - 1])))
            --key_begin;
        const std::size_t q1 = tag_text.find('"', eq);
        if (q1 == std::string::npos) break;
        const std::size_t q2 = tag_text.find('"', q1 + 1);
        if (q2 == std::string::npos) break;
        out[tag_text.substr(key_begin, key_end - key_begin)] =
            tag_text.substr(q1 + 1, q2 - q1 - 1);
        pos = q2 + 1;
    }
    return out;
}

// All elements of the given tag, in document order. Handles self-closing
// tags and one nesting level is enough for GXL node/edge/attr elements.
std::vector<XmlElement> find_elements(const std::string& text, const std::string& tag) {
    std::vector<XmlElement> out;
    const std::string open = "<" + tag;
    const std::string close = "</" + tag + ">";
    std::size_t pos = 0;
    while ((pos = text.find(open, pos)) != std::string::npos) {
        const char after = pos + open.size() < text.size() ? text[pos + open.size()] : '\0';
        if (after != ' ' && after != '>' && after != '\t' && after != '\n' && after != '/') {
            pos += open.size();
            continue;  // prefix of a longer tag
        }
        const std::size_t tag_end = text.find('>', pos);
        if (tag_end == std::string::npos) break;
        XmlElement el;
        el.tag = tag;
        el.attrs = parse_tag_attrs(text.substr(pos, tag_end - pos + 1));
        if (text[tag_end - 1] == '/') {
            pos = tag_end + 1;
        } else {
            const std::size_t body_end = text.find(close, tag_end);
            if (body_end == std::string::npos) break;
            el.body = text.substr(tag_end + 1, body_end - tag_end - 1);
            pos = body_end + close.size();
        }
        out.push_back(std::move(el));
    }
    return out;
}

std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot read '" + path.string() + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

struct GxlValue {
    bool is_string = false;
    double number = 0.0;
    std::string text;
};

// First typed child of an <attr> body: <float>, <double>, <int> or <string>.
GxlValue parse_gxl_value(const std::string& body, const std::filesystem::path& path) {
    for (const char* t : {"float", "double", "int", "Integer", "Float"}) {
        const auto vals = find_elements(body, t);
        if (!vals.empty()) {
            GxlValue v;
            try {
                v.number = std::stod(vals.front().body);
            } catch (const std::exception&) {
                throw ParseError(path.string() + ": bad numeric attr value '" +
                                 vals.front().body + "'");
            }
            return v;
        }
    }
    const auto strs = find_elements(body, "string");
    if (!strs.empty()) {
        GxlValue v;
        v.is_string = true;
        v.text = strs.front().body;
        // strip surrounding whitespace
        const auto b = v.text.find_first_not_of(" \t\r\n");
        const auto e = v.text.find_last_not_of(" \t\r\n");
        v.text = b == std::string::npos ? std::string{} : v.text.substr(b, e - b + 1);
        return v;
    }
    throw ParseError(path.string() + ": <attr> without a supported typed value");
}

}  // namespace

std::size_t convert_gxl_collection(const std::filesystem::path& cxl_index,
                                   const std::filesystem::path& output) {
    const std::string index_text = read_file(cxl_index);
    const auto prints = find_elements(index_text, "print");
    if (prints.empty())
        throw ParseError(cxl_index.string() + ": no <print file=... class=...> entries");
    const std::filesystem::path base = cxl_index.parent_path();

    std::vector<std::string> node_attr_names, edge_attr_names;
    bool node_is_string = false, edge_is_string = false;
    std::map<std::string, std::size_t> node_dict, edge_dict;
    std::vector<AttributedGraph> graphs;

    for (const auto& p : prints) {
        const auto file_it = p.attrs.find("file");
        if (file_it == p.attrs.end())
            throw ParseError(cxl_index.string() + ": <print> without file attribute");
        const auto class_it = p.attrs.find("class");
        const std::filesystem::path gxl_path = base / file_it->second;
        const std::string text = read_file(gxl_path);

        AttributedGraph g;
        g.id = std::filesystem::path(file_it->second).stem().string();
        if (class_it != p.attrs.end()) g.label = class_it->second;

        std::map<std::string, std::size_t> vertex_ids;
        for (const auto& node : find_elements(text, "node")) {
            std::map<std::string, GxlValue> values;
            for (const auto& attr : find_elements(node.body, "attr")) {
                const auto name_it = attr.attrs.find("name");
                if (name_it == attr.attrs.end()) continue;
                values[name_it->second] = parse_gxl_value(attr.body, gxl_path);
                if (std::find(node_attr_names.begin(), node_attr_names.end(), name_it->second) ==
                    node_attr_names.end())
                    node_attr_names.push_back(name_it->second);
            }
            std::vector<double> attr;
            for (const auto& name : node_attr_names) {
                const auto it = values.find(name);
                if (it == values.end())
                    throw ParseError(gxl_path.string() + ": node misses attr '" + name + "'");
                if (it->second.is_string) {
                    node_is_string = true;
                    const auto ins = node_dict.emplace(it->second.text, node_dict.size());
                    attr.push_back(static_cast<double>(ins.first->second));
                } else {
                    attr.push_back(it->second.number);
                }
            }
            if (node_is_string && node_attr_names.size() != 1)
                throw ParseError(gxl_path.string() +
                                 ": string node attributes must be the only attribute");
            const auto id_it = node.attrs.find("id");
            if (id_it == node.attrs.end())
                throw ParseError(gxl_path.string() + ": node without id");
            vertex_ids.emplace(id_it->second, vertex_ids.size());
            g.node_attrs.push_back(std::move(attr));
        }
        g.order = g.node_attrs.size();
        if (g.order == 0) throw ParseError(gxl_path.string() + ": graph without nodes");

        for (const auto& edge : find_elements(text, "edge")) {
            const auto from_it = edge.attrs.find("from");
            const auto to_it = edge.attrs.find("to");
            if (from_it == edge.attrs.end() || to_it == edge.attrs.end())
                throw ParseError(gxl_path.string() + ": edge without endpoints");
            const auto u_it = vertex_ids.find(from_it->second);
            const auto v_it = vertex_ids.find(to_it->second);
            if (u_it == vertex_ids.end() || v_it == vertex_ids.end())
                throw ParseError(gxl_path.string() + ": edge references unknown node");
            EdgeRecord e;
            e.u = u_it->second;
            e.v = v_it->second;
            if (e.u == e.v) continue;  // drop self loops
            if (e.u > e.v) std::swap(e.u, e.v);

            std::map<std::string, GxlValue> values;
            for (const auto& attr : find_elements(edge.body, "attr")) {
                const auto name_it = attr.attrs.find("name");
                if (name_it == attr.attrs.end()) continue;
                values[name_it->second] = parse_gxl_value(attr.body, gxl_path);
                if (std::find(edge_attr_names.begin(), edge_attr_names.end(), name_it->second) ==
                    edge_attr_names.end())
                    edge_attr_names.push_back(name_it->second);
            }
            for (const auto& name : edge_attr_names) {
                const auto it = values.find(name);
                if (it == values.end())
                    throw ParseError(gxl_path.string() + ": edge misses attr '" + name + "'");
                if (it->second.is_string) {
                    edge_is_string = true;
                    const auto ins = edge_dict.emplace(it->second.text, edge_dict.size());
                    e.attr.push_back(static_cast<double>(ins.first->second));
                } else {
                    e.attr.push_back(it->second.number);
                }
            }
            if (edge_is_string && edge_attr_names.size() != 1)
                throw ParseError(gxl_path.string() +
                                 ": string edge attributes must be the only attribute");
            if (g.edge_attr(e.u, e.v) != nullptr) continue;  // undirected duplicates
            g.edges.push_back(std::move(e));
            std::sort(g.edges.begin(), g.edges.end(), [](const EdgeRecord& a, const EdgeRecord& b) {
                return std::make_pair(a.u, a.v) < std::make_pair(b.u, b.v);
            });
        }
        g.node_dim = node_attr_names.size();
        g.edge_dim = edge_attr_names.size();
        graphs.push_back(std::move(g));
    }

    DatasetHeader header;
    header.node_dim = node_is_string ? 1 : node_attr_names.size();
    header.edge_dim = edge_is_string ? 1 : edge_attr_names.size();
    header.node_categories = node_is_string ? node_dict.size() : 0;
    header.edge_categories = edge_is_string ? edge_dict.size() : 0;

    // Earlier graphs may predate attrs first seen later; pad with zeros.
    for (auto& g : graphs) {
        g.node_dim = header.node_dim;
        g.edge_dim = header.edge_dim;
        for (auto& a : g.node_attrs) a.resize(header.node_dim, 0.0);
        for (auto& e : g.edges) e.attr.resize(header.edge_dim, 0.0);
    }
    save_dataset(output, header, graphs);
    return graphs.size();
}

}  // namespace graphkm
