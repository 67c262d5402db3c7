// dataset.cpp - canonical documents, challenge adapters, QoS seeding.

#include "qoscompose/dataset.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <utility>

#include "json.hpp"
#include "json_util.hpp"
#include "qoscompose/log.hpp"
#include "qoscompose/rng.hpp"

namespace qosc {

using nlohmann::json;
using namespace jsonio;

// ---------------------------------------------------------------------------
// Plain file IO

std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ValidationError("cannot open file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    if (in.bad()) throw ValidationError("cannot read file: " + path);
    return buf.str();
}

void write_text_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw ValidationError("cannot open file for writing: " + path);
    out << text;
    out.flush();
    if (!out) throw ValidationError("cannot write file: " + path);
}

// ---------------------------------------------------------------------------
// Canonical JSON documents

namespace {

constexpr const char* kRepoFormat = "qoscompose-repository";
constexpr const char* kQueryFormat = "qoscompose-query";

// A QoS cell is a number, or a percentage string like "87%" which becomes
// the fraction 0.87.
double qos_cell(const json& v, const std::string& what) {
    if (v.is_number()) return v.get<double>();
    if (v.is_string()) {
        const std::string s = v.get<std::string>();
        if (s.empty() || s.back() != '%')
            throw ValidationError(what + ": string QoS value '" + s +
                                  "' is not a percentage");
        double num = 0.0;
        const char* first = s.data();
        const char* last = s.data() + s.size() - 1;
        const auto res = std::from_chars(first, last, num);
        if (res.ec != std::errc() || res.ptr != last)
            throw ValidationError(what + ": cannot parse percentage '" + s +
                                  "'");
        return num / 100.0;
    }
    throw ValidationError(what + ": QoS values must be numbers");
}

}  // namespace

Repository parse_repository(const std::string& text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::exception& e) {
        throw ValidationError(std::string("repository document: ") + e.what());
    }
    const std::string what = "repository document";
    check_keys(doc, {"format", "version", "params", "services", "provenance"},
               what);
    check_format(doc, kRepoFormat, what);

    Repository repo;
    repo.params = params_from_json(need(doc, "params", what), what);

    const json& svcs = need(doc, "services", what);
    if (!svcs.is_array()) throw ValidationError(what + ": services must be an array");
    if (svcs.empty()) throw ValidationError(what + ": no services");
    for (const json& o : svcs) {
        check_keys(o, {"id", "inputs", "outputs", "qos"}, what);
        Service s;
        s.id = need_string(o, "id", what);
        const std::string where = "service " + s.id;
        s.inputs = string_list(need(o, "inputs", where), where + " inputs");
        s.outputs = string_list(need(o, "outputs", where), where + " outputs");
        const json& qos = need(o, "qos", where);
        if (!qos.is_array())
            throw ValidationError(where + ": qos must be an array of tuples");
        for (const json& row : qos) {
            if (!row.is_array())
                throw ValidationError(where + ": qos must be an array of tuples");
            if (row.size() != repo.params.size())
                throw ValidationError(
                    where + ": QoS tuple has " + std::to_string(row.size()) +
                    " values, expected " + std::to_string(repo.params.size()));
            QosTuple t;
            for (const json& cell : row) t.push_back(qos_cell(cell, where));
            s.tuples.push_back(std::move(t));
        }
        repo.services.push_back(std::move(s));
    }

    if (doc.contains("provenance")) {
        const json& p = doc["provenance"];
        if (!p.is_object())
            throw ValidationError(what + ": provenance must be an object");
        repo.provenance_json = p.dump();
    }

    normalize_and_validate(repo);
    return repo;
}

std::string serialize_repository(const Repository& repo) {
    Repository r = repo;
    normalize_and_validate(r);

    json doc;
    doc["format"] = kRepoFormat;
    doc["version"] = kDocVersion;
    doc["params"] = params_to_json(r.params);
    json svcs = json::array();
    for (const Service& s : r.services) {
        json o;
        o["id"] = s.id;
        o["inputs"] = s.inputs;
        o["outputs"] = s.outputs;
        json qos = json::array();
        for (const QosTuple& t : s.tuples) qos.push_back(t);
        o["qos"] = std::move(qos);
        svcs.push_back(std::move(o));
    }
    doc["services"] = std::move(svcs);
    if (!r.provenance_json.empty())
        doc["provenance"] = json::parse(r.provenance_json);
    return doc.dump(2) + "\n";
}

Query parse_query(const std::string& text, const ParamSet& ps) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::exception& e) {
        throw ValidationError(std::string("query document: ") + e.what());
    }
    const std::string what = "query document";
    check_keys(doc, {"format", "version", "inputs", "outputs", "locals",
                     "globals"},
               what);
    check_format(doc, kQueryFormat, what);

    Query q;
    q.inputs = string_list(need(doc, "inputs", what), what + " inputs");
    q.outputs = string_list(need(doc, "outputs", what), what + " outputs");
    if (doc.contains("locals"))
        q.locals = constraints_from_json(doc["locals"], what + " locals");
    if (doc.contains("globals"))
        q.globals = constraints_from_json(doc["globals"], what + " globals");
    normalize_and_validate(q, ps);
    return q;
}

std::string serialize_query(const Query& q) {
    json doc;
    doc["format"] = kQueryFormat;
    doc["version"] = kDocVersion;
    doc["inputs"] = q.inputs;
    doc["outputs"] = q.outputs;
    doc["locals"] = constraints_to_json(q.locals);
    doc["globals"] = constraints_to_json(q.globals);
    return doc.dump(2) + "\n";
}

Repository load_repository(const std::string& path) {
    return parse_repository(read_text_file(path));
}

Query load_query(const std::string& path, const ParamSet& ps) {
    return parse_query(read_text_file(path), ps);
}

// ---------------------------------------------------------------------------
// Minimal XML reader
//
// The challenge files only need elements, attributes, and nesting; text
// content is ignored. Namespace prefixes are stripped from element names.

namespace {

struct XmlNode {
    std::string name;
    std::vector<std::pair<std::string, std::string>> attrs;
    std::vector<XmlNode> children;
    std::size_t line = 1;

    const std::string* attr(const std::string& key) const {
        for (const auto& [k, v] : attrs)
            if (k == key) return &v;
        return nullptr;
    }
};

std::string strip_prefix(const std::string& name) {
    const auto pos = name.rfind(':');
    return pos == std::string::npos ? name : name.substr(pos + 1);
}

class XmlParser {
  public:
    XmlParser(const std::string& text, std::string origin)
        : text_(text), origin_(std::move(origin)) {}

    XmlNode parse_document() {
        skip_misc();
        if (eof()) fail("no root element");
        XmlNode root = parse_element();
        skip_misc();
        if (!eof()) fail("content after the root element");
        return root;
    }

  private:
    const std::string& text_;
    std::string origin_;
    std::size_t pos_ = 0;
    std::size_t line_ = 1;

    bool eof() const { return pos_ >= text_.size(); }
    char peek() const { return text_[pos_]; }

    char take() {
        const char c = text_[pos_++];
        if (c == '\n') ++line_;
        return c;
    }

    [[noreturn]] void fail(const std::string& msg) const {
        throw ValidationError(origin_ + ":" + std::to_string(line_) + ": " +
                              msg);
    }

    bool starts_with(const char* s) const {
        return text_.compare(pos_, std::string::traits_type::length(s), s) ==
               0;
    }

    void expect(char c) {
        if (eof() || peek() != c)
            fail(std::string("expected '") + c + "'");
        take();
    }

    void skip_ws() {
        while (!eof() && (peek() == ' ' || peek() == '\t' || peek() == '\r' ||
                          peek() == '\n'))
            take();
    }

    void skip_until(const char* end) {
        const std::size_t len = std::string::traits_type::length(end);
        while (!eof()) {
            if (starts_with(end)) {
                for (std::size_t i = 0; i < len; ++i) take();
                return;
            }
            take();
        }
        fail(std::string("unterminated construct, expected '") + end + "'");
    }

    // Comments, processing instructions, DOCTYPE, and whitespace between
    // elements.
    void skip_misc() {
        while (true) {
            skip_ws();
            if (starts_with("<!--")) {
                skip_until("-->");
            } else if (starts_with("<?")) {
                skip_until("?>");
            } else if (starts_with("<!")) {
                take();
                take();
                int depth = 0;
                while (!eof()) {
                    const char c = take();
                    if (c == '[') ++depth;
                    else if (c == ']') --depth;
                    else if (c == '>' && depth == 0) break;
                }
            } else {
                return;
            }
        }
    }

    std::string read_name() {
        std::string out;
        while (!eof()) {
            const char c = peek();
            if (c == ' ' || c == '\t' || c == '\r' || c == '\n' || c == '>' ||
                c == '/' || c == '=')
                break;
            out.push_back(take());
        }
        if (out.empty()) fail("expected a name");
        return out;
    }

    std::string read_attr_value() {
        skip_ws();
        expect('=');
        skip_ws();
        if (eof() || (peek() != '"' && peek() != '\''))
            fail("expected a quoted attribute value");
        const char quote = take();
        std::string out;
        while (true) {
            if (eof()) fail("unterminated attribute value");
            const char c = take();
            if (c == quote) break;
            if (c == '&') {
                out.push_back(read_entity());
            } else {
                out.push_back(c);
            }
        }
        return out;
    }

    char read_entity() {
        std::string name;
        while (!eof() && peek() != ';' && name.size() < 8)
            name.push_back(take());
        if (eof() || peek() != ';') fail("unterminated entity reference");
        take();
        if (name == "amp") return '&';
        if (name == "lt") return '<';
        if (name == "gt") return '>';
        if (name == "quot") return '"';
        if (name == "apos") return '\'';
        fail("unsupported entity reference '&" + name + ";'");
    }

    XmlNode parse_element() {
        expect('<');
        XmlNode node;
        node.line = line_;
        node.name = strip_prefix(read_name());

        while (true) {
            skip_ws();
            if (eof()) fail("unterminated start tag");
            if (peek() == '/') {
                take();
                expect('>');
                return node;  // self-closing
            }
            if (peek() == '>') {
                take();
                break;
            }
            std::string key = read_name();
            node.attrs.emplace_back(std::move(key), read_attr_value());
        }

        // Children until the matching end tag.
        while (true) {
            while (!eof() && peek() != '<') take();  // ignore text content
            if (eof()) fail("missing end tag for <" + node.name + ">");
            if (starts_with("</")) {
                take();
                take();
                const std::string closing = strip_prefix(read_name());
                if (closing != node.name)
                    fail("end tag </" + closing + "> does not match <" +
                         node.name + ">");
                skip_ws();
                expect('>');
                return node;
            }
            if (starts_with("<!--")) {
                skip_until("-->");
            } else if (starts_with("<![CDATA[")) {
                skip_until("]]>");
            } else if (starts_with("<?")) {
                skip_until("?>");
            } else {
                node.children.push_back(parse_element());
            }
        }
    }
};

const std::string& need_attr(const XmlNode& n, const std::string& key,
                             const std::string& origin) {
    const std::string* v = n.attr(key);
    if (!v)
        throw ValidationError(origin + ":" + std::to_string(n.line) + ": <" +
                              n.name + "> is missing attribute '" + key +
                              "'");
    return *v;
}

double attr_number(const XmlNode& n, const std::string& key,
                   const std::string& origin) {
    const std::string& s = need_attr(n, key, origin);
    double out = 0.0;
    const auto res = std::from_chars(s.data(), s.data() + s.size(), out);
    if (res.ec != std::errc() || res.ptr != s.data() + s.size())
        throw ValidationError(origin + ":" + std::to_string(n.line) +
                              ": attribute '" + key + "' is not a number");
    return out;
}

}  // namespace

// ---------------------------------------------------------------------------
// WSC adapter

namespace {

struct Taxonomy {
    std::map<std::string, std::string> parent;      // concept -> parent or ""
    std::map<std::string, std::string> concept_of;  // instance -> concept
};

void walk_taxonomy(const XmlNode& n, const std::string& enclosing,
                   Taxonomy& t, const std::string& origin) {
    for (const XmlNode& c : n.children) {
        if (c.name == "concept") {
            const std::string& name = need_attr(c, "name", origin);
            if (!t.parent.emplace(name, enclosing).second)
                throw ValidationError(origin + ":" + std::to_string(c.line) +
                                      ": duplicate concept '" + name + "'");
            walk_taxonomy(c, name, t, origin);
        } else if (c.name == "instance") {
            const std::string& name = need_attr(c, "name", origin);
            if (enclosing.empty())
                throw ValidationError(origin + ":" + std::to_string(c.line) +
                                      ": instance '" + name +
                                      "' is outside any concept");
            t.concept_of[name] = enclosing;
        } else {
            walk_taxonomy(c, enclosing, t, origin);
        }
    }
}

// The concept an I/O reference stands for; references may name an instance
// or a concept directly.
const std::string& resolve_concept(const Taxonomy& t, const std::string& ref,
                                   const std::string& origin,
                                   std::size_t line) {
    const auto inst = t.concept_of.find(ref);
    if (inst != t.concept_of.end()) return inst->second;
    if (t.parent.count(ref)) {
        return t.parent.find(ref)->first;
    }
    throw ValidationError(origin + ":" + std::to_string(line) +
                          ": unknown concept '" + ref + "'");
}

std::vector<std::string> ancestors_or_self(const Taxonomy& t,
                                           const std::string& cname) {
    std::vector<std::string> out;
    std::string cur = cname;
    while (!cur.empty()) {
        out.push_back(cur);
        cur = t.parent.at(cur);
    }
    return out;
}

void collect_io(const XmlNode& group, const Taxonomy& t, bool expand,
                std::set<std::string>& into, const std::string& origin) {
    for (const XmlNode& e : group.children) {
        if (e.name != "instance" && e.name != "concept") continue;
        const std::string& ref = need_attr(e, "name", origin);
        const std::string& cname = resolve_concept(t, ref, origin, e.line);
        if (expand) {
            for (const std::string& a : ancestors_or_self(t, cname))
                into.insert(a);
        } else {
            into.insert(cname);
        }
    }
}

}  // namespace

Repository parse_wsc(const std::string& services_path,
                     const std::string& taxonomy_path,
                     const std::string& qos_path) {
    const std::string tax_text = read_text_file(taxonomy_path);
    const XmlNode tax_root =
        XmlParser(tax_text, taxonomy_path).parse_document();
    Taxonomy tax;
    walk_taxonomy(tax_root, "", tax, taxonomy_path);

    const std::string svc_text = read_text_file(services_path);
    const XmlNode svc_root =
        XmlParser(svc_text, services_path).parse_document();

    Repository repo;
    for (const XmlNode& s : svc_root.children) {
        if (s.name != "service") continue;
        Service out;
        out.id = need_attr(s, "name", services_path);
        std::set<std::string> ins;
        std::set<std::string> outs;
        for (const XmlNode& g : s.children) {
            if (g.name == "inputs")
                collect_io(g, tax, false, ins, services_path);
            else if (g.name == "outputs")
                collect_io(g, tax, true, outs, services_path);
        }
        out.inputs.assign(ins.begin(), ins.end());
        out.outputs.assign(outs.begin(), outs.end());
        out.tuples.push_back({});
        repo.services.push_back(std::move(out));
    }
    if (repo.services.empty())
        throw ValidationError(services_path + ": no services found");

    json prov;
    prov["adapter"] = "wsc";
    prov["services_file"] =
        std::filesystem::path(services_path).filename().string();
    prov["taxonomy_file"] =
        std::filesystem::path(taxonomy_path).filename().string();

    if (!qos_path.empty()) {
        const std::string qos_text = read_text_file(qos_path);
        const XmlNode qos_root = XmlParser(qos_text, qos_path).parse_document();
        std::map<std::string, QosTuple> values;
        for (const XmlNode& e : qos_root.children) {
            if (e.name != "service") continue;
            const std::string& id = need_attr(e, "name", qos_path);
            values[id] = {attr_number(e, "responsetime", qos_path),
                          attr_number(e, "throughput", qos_path)};
        }
        repo.params =
            ParamSet({make_response_time(), make_throughput()});
        for (Service& s : repo.services) {
            const auto it = values.find(s.id);
            if (it == values.end())
                throw ValidationError(qos_path + ": no QoS entry for service " +
                                      s.id);
            s.tuples = {it->second};
            values.erase(it);
        }
        for (const auto& [id, t] : values)
            log::warn("QoS entry for unknown service " + id + " ignored");
        prov["qos_file"] = std::filesystem::path(qos_path).filename().string();
    }

    repo.provenance_json = prov.dump();
    normalize_and_validate(repo);
    return repo;
}

// ---------------------------------------------------------------------------
// ICEBE adapter

namespace {

void collect_wsdl(const XmlNode& n, std::map<std::string, XmlNode>& messages,
                  std::vector<const XmlNode*>& port_types) {
    for (const XmlNode& c : n.children) {
        if (c.name == "message") {
            const std::string* name = c.attr("name");
            if (name) messages.emplace(strip_prefix(*name), c);
        } else if (c.name == "portType") {
            port_types.push_back(&c);
        } else if (c.name == "definitions") {
            collect_wsdl(c, messages, port_types);
        }
    }
}

void message_parts(const XmlNode& msg, std::set<std::string>& into,
                   const std::string& origin) {
    for (const XmlNode& part : msg.children) {
        if (part.name != "part") continue;
        const std::string* name = part.attr("name");
        if (!name) name = part.attr("element");
        if (!name)
            throw ValidationError(origin + ":" + std::to_string(part.line) +
                                  ": <part> without name or element");
        into.insert(strip_prefix(*name));
    }
}

}  // namespace

Repository parse_icebe(const std::string& dir) {
    namespace fs = std::filesystem;
    if (!fs::is_directory(dir))
        throw ValidationError("not a directory: " + dir);

    std::vector<fs::path> files;
    for (const auto& entry : fs::directory_iterator(dir)) {
        if (!entry.is_regular_file()) continue;
        std::string ext = entry.path().extension().string();
        std::transform(ext.begin(), ext.end(), ext.begin(),
                       [](unsigned char c) { return std::tolower(c); });
        if (ext == ".wsdl") files.push_back(entry.path());
    }
    if (files.empty())
        throw ValidationError("no .wsdl files in directory: " + dir);
    std::sort(files.begin(), files.end());

    Repository repo;
    for (const fs::path& file : files) {
        const std::string origin = file.filename().string();
        const std::string text = read_text_file(file.string());
        const XmlNode root = XmlParser(text, origin).parse_document();

        std::map<std::string, XmlNode> messages;
        std::vector<const XmlNode*> port_types;
        if (root.name == "definitions") {
            collect_wsdl(root, messages, port_types);
        } else {
            XmlNode wrap;
            wrap.children.push_back(root);
            collect_wsdl(wrap, messages, port_types);
        }

        std::set<std::string> ins;
        std::set<std::string> outs;
        for (const XmlNode* pt : port_types) {
            for (const XmlNode& op : pt->children) {
                if (op.name != "operation") continue;
                for (const XmlNode& io : op.children) {
                    if (io.name != "input" && io.name != "output") continue;
                    const std::string ref =
                        strip_prefix(need_attr(io, "message", origin));
                    const auto it = messages.find(ref);
                    if (it == messages.end())
                        throw ValidationError(
                            origin + ":" + std::to_string(io.line) +
                            ": unknown message '" + ref + "'");
                    message_parts(it->second,
                                  io.name == "input" ? ins : outs, origin);
                }
            }
        }
        if (ins.empty() || outs.empty())
            throw ValidationError(origin +
                                  ": no operation inputs or outputs found");

        Service s;
        s.id = file.stem().string();
        s.inputs.assign(ins.begin(), ins.end());
        s.outputs.assign(outs.begin(), outs.end());
        s.tuples.push_back({});
        repo.services.push_back(std::move(s));
    }

    json prov;
    prov["adapter"] = "icebe";
    prov["directory"] = fs::path(dir).filename().string();
    prov["files"] = files.size();
    repo.provenance_json = prov.dump();
    normalize_and_validate(repo);
    return repo;
}

// ---------------------------------------------------------------------------
// QoS generation

QosGenConfig default_qos_gen(std::uint64_t seed) {
    QosGenConfig cfg;
    cfg.seed = seed;
    cfg.params = {
        {make_response_time(), {100.0, 2000.0, true}},
        {make_throughput(), {1.0, 20.0, true}},
        {make_reliability(), {0.65, 0.99, false}},
        {make_availability(), {0.65, 0.99, false}},
    };
    return cfg;
}

Repository gen_qos(const Repository& repo, const QosGenConfig& cfg) {
    Repository out = repo;
    normalize_and_validate(out);
    for (const QosGenParam& gp : cfg.params) {
        if (!(gp.range.lo <= gp.range.hi))
            throw ValidationError("generation range for " + gp.param.id +
                                  " has lo > hi");
        if (gp.range.integer &&
            (gp.range.lo != std::floor(gp.range.lo) ||
             gp.range.hi != std::floor(gp.range.hi)))
            throw ValidationError("integer generation range for " +
                                  gp.param.id + " has fractional bounds");
    }

    Rng rng(cfg.seed);
    for (const QosGenParam& gp : cfg.params) {
        if (out.params.has(gp.param.id)) {
            log::info("parameter " + gp.param.id +
                      " already present; keeping its values");
            continue;
        }
        out.params.params.push_back(gp.param);
        for (Service& s : out.services) {
            for (QosTuple& t : s.tuples) {
                double v;
                if (gp.range.integer) {
                    const auto span = static_cast<std::uint64_t>(
                        gp.range.hi - gp.range.lo + 1.0);
                    v = gp.range.lo + static_cast<double>(rng.uniform(span));
                } else {
                    v = rng.uniform_real(gp.range.lo, gp.range.hi);
                }
                t.push_back(v);
            }
        }
    }

    json gen;
    gen["seed"] = cfg.seed;
    json gps = json::array();
    for (const QosGenParam& gp : cfg.params) {
        json o;
        o["id"] = gp.param.id;
        o["lo"] = gp.range.lo;
        o["hi"] = gp.range.hi;
        o["integer"] = gp.range.integer;
        gps.push_back(std::move(o));
    }
    gen["params"] = std::move(gps);
    json prov = out.provenance_json.empty()
                    ? json::object()
                    : json::parse(out.provenance_json);
    prov["qos_generator"] = std::move(gen);
    out.provenance_json = prov.dump();

    normalize_and_validate(out);
    return out;
}

}  // namespace qosc
