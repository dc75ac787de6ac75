#ifndef CANON_IO_HPP
#define CANON_IO_HPP

#include <canon/degeneration.hpp>
#include <canon/errors.hpp>
#include <canon/graph.hpp>
#include <canon/laurent.hpp>
#include <canon/layering.hpp>
#include <canon/measures.hpp>
#include <canon/period_model.hpp>
#include <canon/rational.hpp>

#include <nlohmann/json.hpp>

#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace canon {

using Json = nlohmann::ordered_json;

struct VertexRecord {
    VertexId id;
    int genus = 0;
    std::vector<int> marks;

    friend bool operator==(const VertexRecord&, const VertexRecord&) = default;
};

struct EdgeRecord {
    EdgeId id;
    VertexId tail;
    VertexId head;
    std::optional<Rational> length;

    friend bool operator==(const EdgeRecord&, const EdgeRecord&) = default;
};

/// In-memory form of a graph document. Optional parts are absent when the
/// corresponding key is missing from the file.
struct GraphDocument {
    std::vector<VertexRecord> vertices;
    std::vector<EdgeRecord> edges;
    std::optional<std::vector<std::vector<EdgeId>>> layering;
    std::optional<std::map<EdgeId, Laurent>> family;
    std::optional<std::map<EdgeId, Rational>> target;

    friend bool operator==(const GraphDocument&, const GraphDocument&) = default;
};

namespace detail {

inline const Json& require_key(const Json& obj, const char* key, const std::string& where)
{
    if (!obj.is_object() || !obj.contains(key)) throw ParseError(where + ": missing key '" + key + "'");
    return obj.at(key);
}

inline std::string require_string(const Json& v, const std::string& where)
{
    if (!v.is_string()) throw ParseError(where + ": expected a string");
    return v.get<std::string>();
}

/// Rationals are written as strings; integers are accepted as a convenience.
inline Rational json_rational(const Json& v, const std::string& where)
{
    try {
        if (v.is_number_integer()) return Rational(std::to_string(v.get<long long>()));
        return parse_rational(require_string(v, where));
    } catch (const ParseError& e) {
        throw ParseError(where + ": " + e.what());
    }
}

inline Json parse_json_text(const std::string& text)
{
    try {
        return Json::parse(text);
    } catch (const Json::parse_error& e) {
        throw ParseError(std::string("malformed JSON: ") + e.what());
    }
}

} // namespace detail

inline GraphDocument document_from_json(const Json& j)
{
    if (!j.is_object()) throw ParseError("document root must be an object");
    GraphDocument doc;

    const Json& vertices = detail::require_key(j, "vertices", "document");
    if (!vertices.is_array()) throw ParseError("'vertices' must be a list");
    for (std::size_t i = 0; i < vertices.size(); ++i) {
        const std::string where = "vertex #" + std::to_string(i + 1);
        const Json& v = vertices[i];
        VertexRecord rec;
        rec.id = detail::require_string(detail::require_key(v, "id", where), where);
        if (v.contains("genus")) {
            if (!v["genus"].is_number_integer()) throw ParseError("vertex '" + rec.id + "': genus must be an integer");
            rec.genus = v["genus"].get<int>();
        }
        if (v.contains("marks")) {
            if (!v["marks"].is_array()) throw ParseError("vertex '" + rec.id + "': marks must be a list");
            for (const auto& m : v["marks"]) {
                if (!m.is_number_integer()) throw ParseError("vertex '" + rec.id + "': marks must be integers");
                rec.marks.push_back(m.get<int>());
            }
        }
        doc.vertices.push_back(std::move(rec));
    }

    const Json& edges = detail::require_key(j, "edges", "document");
    if (!edges.is_array()) throw ParseError("'edges' must be a list");
    for (std::size_t i = 0; i < edges.size(); ++i) {
        std::string where = "edge #" + std::to_string(i + 1);
        const Json& e = edges[i];
        EdgeRecord rec;
        rec.id = detail::require_string(detail::require_key(e, "id", where), where);
        where = "edge '" + rec.id + "'";
        const Json& ends = detail::require_key(e, "ends", where);
        if (!ends.is_array() || ends.size() != 2) throw ParseError(where + ": 'ends' must list two vertices");
        rec.tail = detail::require_string(ends[0], where);
        rec.head = detail::require_string(ends[1], where);
        if (e.contains("length")) rec.length = detail::json_rational(e["length"], where);
        doc.edges.push_back(std::move(rec));
    }

    if (j.contains("layering")) {
        const Json& layers = j["layering"];
        if (!layers.is_array()) throw ParseError("'layering' must be a list of lists");
        std::vector<std::vector<EdgeId>> parts;
        for (const auto& layer : layers) {
            if (!layer.is_array()) throw ParseError("'layering' must be a list of lists");
            std::vector<EdgeId> part;
            for (const auto& id : layer) part.push_back(detail::require_string(id, "layering"));
            parts.push_back(std::move(part));
        }
        doc.layering = std::move(parts);
    }

    if (j.contains("family")) {
        if (!j["family"].is_object()) throw ParseError("'family' must map edge ids to length functions");
        std::map<EdgeId, Laurent> family;
        for (const auto& [id, text] : j["family"].items()) {
            const std::string where = "family of edge '" + id + "'";
            try {
                family[id] = parse_laurent(detail::require_string(text, where));
            } catch (const ParseError& err) {
                throw ParseError(where + ": " + err.what());
            }
        }
        doc.family = std::move(family);
    }

    if (j.contains("target")) {
        if (!j["target"].is_object()) throw ParseError("'target' must map edge ids to rationals");
        std::map<EdgeId, Rational> target;
        for (const auto& [id, value] : j["target"].items()) target[id] = detail::json_rational(value, "target of edge '" + id + "'");
        doc.target = std::move(target);
    }
    return doc;
}

inline GraphDocument parse_document(const std::string& text)
{
    return document_from_json(detail::parse_json_text(text));
}

inline std::string read_file(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseError("cannot open '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

inline GraphDocument load_document(const std::string& path)
{
    return parse_document(read_file(path));
}

inline Json document_to_json(const GraphDocument& doc)
{
    Json j;
    j["vertices"] = Json::array();
    for (const auto& v : doc.vertices) {
        Json rec;
        rec["id"] = v.id;
        rec["genus"] = v.genus;
        rec["marks"] = v.marks;
        j["vertices"].push_back(std::move(rec));
    }
    j["edges"] = Json::array();
    for (const auto& e : doc.edges) {
        Json rec;
        rec["id"] = e.id;
        rec["ends"] = Json::array({e.tail, e.head});
        if (e.length) rec["length"] = to_string(*e.length);
        j["edges"].push_back(std::move(rec));
    }
    if (doc.layering) j["layering"] = *doc.layering;
    if (doc.family) {
        Json fam = Json::object();
        for (const auto& [id, p] : *doc.family) fam[id] = to_string(p);
        j["family"] = std::move(fam);
    }
    if (doc.target) {
        Json tgt = Json::object();
        for (const auto& [id, x] : *doc.target) tgt[id] = to_string(x);
        j["target"] = std::move(tgt);
    }
    return j;
}

inline std::string serialize_document(const GraphDocument& doc)
{
    return document_to_json(doc).dump(2) + "\n";
}

/// Inverse of the conversions below: a document describing `g`, with
/// lengths when provided.
inline GraphDocument document_from_graph(const AugmentedGraph& g,
                                         const std::map<EdgeId, Rational>* lengths = nullptr)
{
    GraphDocument doc;
    for (const auto& v : g.vertices()) {
        VertexRecord rec{v, g.genus_of(v), {}};
        for (const auto& [label, at] : g.marks())
            if (at == v) rec.marks.push_back(label);
        doc.vertices.push_back(std::move(rec));
    }
    for (const auto& e : g.edges()) {
        EdgeRecord rec{e.id, e.tail, e.head, std::nullopt};
        if (lengths) rec.length = lengths->at(e.id);
        doc.edges.push_back(std::move(rec));
    }
    return doc;
}

inline AugmentedGraph to_graph(const GraphDocument& doc)
{
    std::vector<VertexId> vertices;
    std::map<VertexId, int> genus;
    std::map<int, VertexId> marks;
    for (const auto& v : doc.vertices) {
        vertices.push_back(v.id);
        genus[v.id] = v.genus;
        for (int label : v.marks) {
            if (!marks.emplace(label, v.id).second) {
                throw PreconditionError("mark " + std::to_string(label) + " is used twice");
            }
        }
    }
    std::vector<Edge> edges;
    for (const auto& e : doc.edges) edges.push_back(Edge{e.id, e.tail, e.head});
    return AugmentedGraph(std::move(vertices), std::move(edges), std::move(genus), std::move(marks));
}

inline bool has_lengths(const GraphDocument& doc)
{
    for (const auto& e : doc.edges)
        if (!e.length) return false;
    return true;
}

inline MetricGraph to_metric(const GraphDocument& doc)
{
    std::map<EdgeId, Rational> lengths;
    for (const auto& e : doc.edges) {
        if (!e.length) throw PreconditionError("edge '" + e.id + "' has no length");
        lengths[e.id] = *e.length;
    }
    return MetricGraph(to_graph(doc), std::move(lengths));
}

/// The document's layering, or the one-layer partition when absent.
inline OrderedPartition to_layering(const GraphDocument& doc, const AugmentedGraph& g)
{
    if (!doc.layering) return OrderedPartition::trivial(g);
    return OrderedPartition(*doc.layering);
}

inline LengthFamily to_family(const GraphDocument& doc)
{
    if (!doc.family) throw PreconditionError("document has no 'family'");
    if (!doc.target) throw PreconditionError("document has no 'target'");
    AugmentedGraph g = to_graph(doc);
    OrderedPartition p = to_layering(doc, g);
    return LengthFamily(std::move(g), *doc.family, std::move(p), *doc.target);
}

/// Im(Lambda_0) file: {"matrix": [[...], ...]} with entries given as JSON
/// numbers or rational strings (rounded to the nearest binary64).
inline DenseMatrix parse_lambda0(const std::string& text)
{
    const Json j = detail::parse_json_text(text);
    const Json& rows = detail::require_key(j, "matrix", "Im(Lambda_0) file");
    if (!rows.is_array()) throw ParseError("Im(Lambda_0) file: 'matrix' must be a list of rows");
    const auto n = static_cast<Eigen::Index>(rows.size());
    DenseMatrix m(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        const Json& row = rows[static_cast<std::size_t>(i)];
        if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != n) {
            throw ParseError("Im(Lambda_0) file: row " + std::to_string(i + 1) + " has the wrong length");
        }
        for (Eigen::Index k = 0; k < n; ++k) {
            const Json& v = row[static_cast<std::size_t>(k)];
            const std::string where = "Im(Lambda_0) entry (" + std::to_string(i + 1) + "," + std::to_string(k + 1) + ")";
            m(i, k) = v.is_number() ? v.get<double>() : to_double(detail::json_rational(v, where));
        }
    }
    return m;
}

} // namespace canon

#endif // CANON_IO_HPP
