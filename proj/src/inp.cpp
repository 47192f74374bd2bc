#include "stormbox/inp.hpp"

#include "stormbox/format.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <cmath>
#include <map>
#include <optional>
#include <set>
#include <sstream>

namespace stormbox::inp {

namespace {

constexpr std::array kSupported = {"TITLE",   "OPTIONS",  "RAINGAGES", "SUBCATCHMENTS", "SUBAREAS",
                                   "JUNCTIONS", "OUTFALLS", "STORAGE",   "CONDUITS",      "ORIFICES",
                                   "WEIRS",   "PUMPS",    "CURVES",    "TIMESERIES"};

// Sections a SWMM export commonly carries that this reader skips.
constexpr std::array kKnownSwmm = {
    "EVAPORATION", "TEMPERATURE", "ADJUSTMENTS", "LID_CONTROLS", "LID_USAGE", "INFILTRATION", "AQUIFERS",
    "GROUNDWATER", "GWF",         "SNOWPACKS",   "DIVIDERS",     "OUTLETS",   "XSECTIONS",    "TRANSECTS",
    "STREETS",     "INLETS",      "INLET_USAGE", "LOSSES",       "CONTROLS",  "POLLUTANTS",   "LANDUSES",
    "COVERAGES",   "LOADINGS",    "BUILDUP",     "WASHOFF",      "TREATMENT", "INFLOWS",      "DWF",
    "RDII",        "HYDROGRAPHS", "PATTERNS",    "FILES",        "REPORT",    "TAGS",         "MAP",
    "COORDINATES", "VERTICES",    "POLYGONS",    "SYMBOLS",      "LABELS",    "BACKDROP",     "PROFILES",
    "EVENTS"};

std::string upper(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(), [](unsigned char c) { return static_cast<char>(std::toupper(c)); });
  return out;
}

std::string_view trim(std::string_view s) {
  const auto ws = " \t\r\n\f\v";
  const auto b = s.find_first_not_of(ws);
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(ws);
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split_ws(std::string_view s) {
  std::vector<std::string> out;
  std::size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
    const auto start = i;
    while (i < s.size() && !std::isspace(static_cast<unsigned char>(s[i]))) ++i;
    if (i > start) out.emplace_back(s.substr(start, i - start));
  }
  return out;
}

bool is_known_swmm(std::string_view name) {
  return std::find(kKnownSwmm.begin(), kKnownSwmm.end(), name) != kKnownSwmm.end();
}

// Time of day as decimal hours or H:MM[:SS], returned in seconds.
std::optional<double> parse_clock(std::string_view text) {
  if (text.find(':') == std::string_view::npos) {
    auto h = parse_number(text);
    if (!h) return std::nullopt;
    return *h * 3600.0;
  }
  double seconds = 0.0;
  double scale = 3600.0;
  std::size_t pos = 0;
  int parts = 0;
  while (pos <= text.size()) {
    auto next = text.find(':', pos);
    auto part = text.substr(pos, next == std::string_view::npos ? std::string_view::npos : next - pos);
    auto v = parse_number(part);
    if (!v || *v < 0.0 || ++parts > 3) return std::nullopt;
    seconds += *v * scale;
    scale /= 60.0;
    if (next == std::string_view::npos) break;
    pos = next + 1;
  }
  return seconds;
}

struct ElementKey {
  ElementKind kind;
  std::string id;
  auto operator<=>(const ElementKey&) const = default;
};

class Builder {
 public:
  explicit Builder(const Document& doc) : doc_(doc) {}

  ParseResult build() {
    for (const auto& section : doc_.sections) {
      section_ = section.name;
      if (!section.supported) {
        warn(section.header_line, is_known_swmm(section.name)
                                      ? "section [" + section.name + "] is not supported and was ignored"
                                      : "unknown section [" + section.name + "] was ignored");
        continue;
      }
      for (const auto& row : section.rows) parse_row(row);
    }
    section_.clear();
    finish_timeseries();
    apply_subareas();
    check_network();
    if (!errors_.empty()) throw ParseError(std::move(errors_));
    return {std::move(net_), std::move(warnings_)};
  }

 private:
  void error(std::size_t line, std::string message) { errors_.push_back({line, section_, std::move(message)}); }
  void warn(std::size_t line, std::string message) { warnings_.push_back({line, section_, std::move(message)}); }

  bool count_in(const Row& row, std::size_t lo, std::size_t hi) {
    const auto n = row.tokens.size();
    if (n >= lo && n <= hi) return true;
    std::string expected = lo == hi ? std::to_string(lo) : std::to_string(lo) + "-" + std::to_string(hi);
    error(row.line, "expected " + expected + " fields, got " + std::to_string(n));
    return false;
  }

  std::optional<double> number(const Row& row, std::size_t i, std::string_view what) {
    auto v = parse_number(row.tokens[i]);
    if (!v) error(row.line, "invalid number '" + row.tokens[i] + "' for " + std::string(what));
    return v;
  }

  bool declare(ElementKind kind, const std::string& id, std::size_t line) {
    auto [it, inserted] = lines_.emplace(ElementKey{kind, id}, line);
    if (!inserted) {
      error(line, "duplicate " + std::string(to_string(kind)) + " id '" + id + "' (first declared on line " +
                      std::to_string(it->second) + ")");
    }
    return inserted;
  }

  void parse_row(const Row& row) {
    const auto& s = section_;
    if (s == "TITLE") return;
    if (s == "OPTIONS") return parse_option(row);
    if (s == "RAINGAGES") return parse_raingage(row);
    if (s == "SUBCATCHMENTS") return parse_subcatchment(row);
    if (s == "SUBAREAS") return parse_subarea(row);
    if (s == "JUNCTIONS") return parse_junction(row);
    if (s == "OUTFALLS") return parse_outfall(row);
    if (s == "STORAGE") return parse_storage(row);
    if (s == "CONDUITS") return parse_conduit(row);
    if (s == "ORIFICES") return parse_orifice(row);
    if (s == "WEIRS") return parse_weir(row);
    if (s == "PUMPS") return parse_pump(row);
    if (s == "CURVES") return parse_curve(row);
    if (s == "TIMESERIES") return parse_timeseries(row);
  }

  void parse_option(const Row& row) {
    if (row.tokens.size() < 2) {
      error(row.line, "expected an option name and value");
      return;
    }
    if (upper(row.tokens[0]) == "FLOW_UNITS") {
      const auto units = upper(row.tokens[1]);
      if (units == "CFS" || units == "GPM" || units == "MGD") {
        warn(row.line, "FLOW_UNITS " + units + " declares US units; values are still read as SI (m, m^3/s, mm/hr)");
      }
    }
  }

  void parse_raingage(const Row& row) {
    if (!count_in(row, 6, 6)) return;
    const auto& t = row.tokens;
    if (upper(t[1]) != "INTENSITY") error(row.line, "rain format '" + t[1] + "' is not supported (use INTENSITY)");
    if (upper(t[4]) != "TIMESERIES") error(row.line, "rain source '" + t[4] + "' is not supported (use TIMESERIES)");
    if (auto scf = number(row, 3, "snow catch factor"); scf && *scf != 1.0) {
      warn(row.line, "snow catch factor is ignored");
    }
    if (!declare(ElementKind::Raingage, t[0], row.line)) return;
    net_.raingages.push_back({t[0], t[5]});
  }

  void parse_subcatchment(const Row& row) {
    if (!count_in(row, 7, 9)) return;
    const auto& t = row.tokens;
    auto area = number(row, 3, "area");
    auto imperv = number(row, 4, "percent impervious");
    number(row, 5, "width");
    number(row, 6, "slope");
    if (!area || !imperv) return;
    if (!declare(ElementKind::Subcatchment, t[0], row.line)) return;
    net_.subcatchments.push_back({t[0], *area, *imperv / 100.0, t[1], t[2]});
  }

  void parse_subarea(const Row& row) {
    if (!count_in(row, 7, 8)) return;
    for (std::size_t i = 1; i <= 5; ++i) number(row, i, "subarea parameter");
    subareas_.emplace_back(row.tokens[0], row.line);
  }

  void parse_junction(const Row& row) {
    if (!count_in(row, 3, 6)) return;
    Node node;
    node.id = row.tokens[0];
    node.kind = NodeKind::Junction;
    auto elev = number(row, 1, "invert elevation");
    auto depth = number(row, 2, "max depth");
    std::optional<double> init = 0.0;
    if (row.tokens.size() > 3) init = number(row, 3, "initial depth");
    for (std::size_t i = 4; i < row.tokens.size(); ++i) number(row, i, "junction parameter");
    if (!elev || !depth || !init) return;
    node.invert_elevation = *elev;
    node.max_depth = *depth;
    node.initial_depth = *init;
    add_node(std::move(node), row.line);
  }

  void parse_outfall(const Row& row) {
    if (!count_in(row, 3, 6)) return;
    const auto& t = row.tokens;
    Node node;
    node.id = t[0];
    node.kind = NodeKind::Outfall;
    auto elev = number(row, 1, "invert elevation");
    const auto type = upper(t[2]);
    std::size_t next = 3;
    if (type == "FREE" || type == "NORMAL") {
      node.boundary = FreeOutfall{};
    } else if (type == "FIXED") {
      if (t.size() < 4) return error(row.line, "FIXED outfall needs a stage");
      auto stage = number(row, 3, "fixed stage");
      if (!stage) return;
      node.boundary = FixedStage{*stage};
      next = 4;
    } else if (type == "TIMESERIES") {
      if (t.size() < 4) return error(row.line, "TIMESERIES outfall needs a series name");
      node.boundary = SeriesStage{t[3]};
      next = 4;
    } else {
      return error(row.line, "outfall type '" + t[2] + "' is not supported (FREE, NORMAL, FIXED, TIMESERIES)");
    }
    if (t.size() > next) {
      const auto gated = upper(t[next]);
      if (gated != "YES" && gated != "NO") return error(row.line, "expected YES or NO for the gate flag, got '" + t[next] + "'");
    }
    if (!elev) return;
    node.invert_elevation = *elev;
    add_node(std::move(node), row.line);
  }

  void parse_storage(const Row& row) {
    const auto& t = row.tokens;
    if (t.size() < 5) {
      error(row.line, "expected at least 5 fields, got " + std::to_string(t.size()));
      return;
    }
    Node node;
    node.id = t[0];
    node.kind = NodeKind::Storage;
    auto elev = number(row, 1, "invert elevation");
    auto depth = number(row, 2, "max depth");
    auto init = number(row, 3, "initial depth");
    const auto shape = upper(t[4]);
    if (shape == "FUNCTIONAL") {
      if (!count_in(row, 8, 13)) return;
      auto a = number(row, 5, "coefficient");
      auto b = number(row, 6, "exponent");
      auto c = number(row, 7, "constant");
      for (std::size_t i = 8; i < t.size(); ++i) number(row, i, "storage parameter");
      if (!a || !b || !c) return;
      if (*a != 0.0 && *b != 0.0) {
        return error(row.line, "only constant-area FUNCTIONAL storage is supported (coefficient or exponent must be 0); use TABULAR");
      }
      node.storage = ConstantArea{*b == 0.0 ? *a + *c : *c};
    } else if (shape == "TABULAR") {
      if (!count_in(row, 6, 11)) return;
      for (std::size_t i = 6; i < t.size(); ++i) number(row, i, "storage parameter");
      node.storage = AreaCurve{t[5]};
    } else {
      return error(row.line, "storage shape '" + t[4] + "' is not supported (FUNCTIONAL, TABULAR)");
    }
    if (!elev || !depth || !init) return;
    node.invert_elevation = *elev;
    node.max_depth = *depth;
    node.initial_depth = *init;
    add_node(std::move(node), row.line);
  }

  void parse_conduit(const Row& row) {
    if (!count_in(row, 7, 10)) return;
    for (std::size_t i = 3; i <= 6; ++i) number(row, i, "conduit parameter");
    ConduitParams p;
    if (row.tokens.size() > 7) number(row, 7, "initial flow");
    if (row.tokens.size() > 8) {
      auto cap = number(row, 8, "max flow");
      if (!cap) return;
      if (*cap != 0.0) p.capacity = *cap;
    }
    if (row.tokens.size() > 9) {
      auto delay = number(row, 9, "delay");
      if (!delay) return;
      if (*delay != std::floor(*delay)) return error(row.line, "delay must be a whole number of control steps");
      p.delay_steps = static_cast<int>(*delay);
    }
    add_link(row, p, 1.0);
  }

  void parse_orifice(const Row& row) {
    if (!count_in(row, 7, 9)) return;
    const auto type = upper(row.tokens[3]);
    if (type != "SIDE" && type != "BOTTOM") return error(row.line, "orifice type must be SIDE or BOTTOM");
    auto offset = number(row, 4, "crest offset");
    auto cd = number(row, 5, "discharge coefficient");
    auto area = number(row, 6, "open area");
    if (!offset || !cd || !area) return;
    add_link(row, OrificeParams{*cd, *area, *offset}, 1.0);
  }

  void parse_weir(const Row& row) {
    if (!count_in(row, 7, 11)) return;
    if (upper(row.tokens[3]) != "TRANSVERSE") return error(row.line, "only TRANSVERSE weirs are supported");
    auto crest = number(row, 4, "crest height");
    auto cd = number(row, 5, "discharge coefficient");
    auto length = number(row, 6, "crest length");
    if (!crest || !cd || !length) return;
    add_link(row, WeirParams{*cd, *length, *crest}, 1.0);
  }

  void parse_pump(const Row& row) {
    if (!count_in(row, 5, 7)) return;
    const auto status = upper(row.tokens[4]);
    if (status != "ON" && status != "OFF") return error(row.line, "pump status must be ON or OFF");
    for (std::size_t i = 5; i < row.tokens.size(); ++i) number(row, i, "pump depth");
    add_link(row, PumpParams{row.tokens[3]}, status == "ON" ? 1.0 : 0.0);
  }

  void parse_curve(const Row& row) {
    const auto& t = row.tokens;
    if (t.size() < 3) return error(row.line, "expected a curve name and at least one x y pair");
    std::size_t first = 1;
    const auto maybe_type = upper(t[1]);
    const bool typed = parse_number(t[1]) == std::nullopt;
    Curve* curve = nullptr;
    if (typed) {
      CurveKind kind;
      if (maybe_type == "STORAGE") {
        kind = CurveKind::Storage;
      } else if (maybe_type == "PUMP4") {
        kind = CurveKind::Pump;
      } else {
        return error(row.line, "curve type '" + t[1] + "' is not supported (STORAGE, PUMP4)");
      }
      if (!declare(ElementKind::Curve, t[0], row.line)) return;
      net_.curves.push_back({t[0], kind, {}});
      curve = &net_.curves.back();
      first = 2;
    } else {
      auto it = std::find_if(net_.curves.begin(), net_.curves.end(), [&](const Curve& c) { return c.id == t[0]; });
      if (it == net_.curves.end()) return error(row.line, "curve '" + t[0] + "' continues before its typed first row");
      curve = &*it;
    }
    if ((t.size() - first) % 2 != 0 || t.size() == first) return error(row.line, "curve points must come in x y pairs");
    for (std::size_t i = first; i < t.size(); i += 2) {
      auto x = number(row, i, "curve x");
      auto y = number(row, i + 1, "curve y");
      if (!x || !y) return;
      curve->points.emplace_back(*x, *y);
    }
  }

  void parse_timeseries(const Row& row) {
    const auto& t = row.tokens;
    if (t.size() >= 2 && upper(t[1]) == "FILE") return error(row.line, "external FILE time series are not supported");
    if (t.size() < 3 || (t.size() - 1) % 2 != 0) return error(row.line, "expected a series name then time value pairs");
    for (std::size_t i = 1; i < t.size(); i += 2) {
      if (t[i].find('/') != std::string::npos) return error(row.line, "dated time series are not supported; use elapsed hours");
      auto time = parse_clock(t[i]);
      auto value = number(row, i + 1, "series value");
      if (!time) return error(row.line, "invalid time '" + t[i] + "'");
      if (!value) return;
      auto& entries = series_[t[0]];
      if (entries.empty()) {
        series_order_.push_back(t[0]);
        lines_.emplace(ElementKey{ElementKind::TimeSeries, t[0]}, row.line);
      }
      if (!entries.empty() && !(*time > entries.back().time)) {
        return error(row.line, "series '" + t[0] + "' times must be strictly increasing");
      }
      entries.push_back({*time, *value});
    }
  }

  void add_node(Node node, std::size_t line) {
    if (!declare(ElementKind::Node, node.id, line)) return;
    net_.nodes.push_back(std::move(node));
  }

  void add_link(const Row& row, LinkParams params, double initial_setting) {
    if (!declare(ElementKind::Link, row.tokens[0], row.line)) return;
    net_.links.push_back({row.tokens[0], row.tokens[1], row.tokens[2], std::move(params), initial_setting});
  }

  void finish_timeseries() {
    for (const auto& name : series_order_) net_.timeseries.emplace(name, TimeSeries(std::move(series_[name])));
  }

  // Runoff coefficients come from the SUBCATCHMENTS impervious fraction; SUBAREAS rows only
  // have to refer to a declared subcatchment.
  void apply_subareas() {
    section_ = "SUBAREAS";
    for (const auto& [id, line] : subareas_) {
      if (!lines_.count({ElementKind::Subcatchment, id})) error(line, "unknown subcatchment '" + id + "'");
    }
    section_.clear();
  }

  std::size_t line_of(ElementKind kind, const std::string& id) const {
    auto it = lines_.find({kind, id});
    return it == lines_.end() ? 0 : it->second;
  }

  std::string section_of(ElementKind kind, const std::string& id) const {
    switch (kind) {
      case ElementKind::Node: {
        auto i = net_.node_index(id);
        if (!i) return {};
        switch (net_.nodes[*i].kind) {
          case NodeKind::Junction: return "JUNCTIONS";
          case NodeKind::Storage: return "STORAGE";
          case NodeKind::Outfall: return "OUTFALLS";
        }
        return {};
      }
      case ElementKind::Link: {
        auto i = net_.link_index(id);
        if (!i) return {};
        switch (net_.links[*i].kind()) {
          case LinkKind::Conduit: return "CONDUITS";
          case LinkKind::Orifice: return "ORIFICES";
          case LinkKind::Weir: return "WEIRS";
          case LinkKind::Pump: return "PUMPS";
        }
        return {};
      }
      case ElementKind::Subcatchment: return "SUBCATCHMENTS";
      case ElementKind::Raingage: return "RAINGAGES";
      case ElementKind::Curve: return "CURVES";
      case ElementKind::TimeSeries: return "TIMESERIES";
      case ElementKind::Network: return {};
    }
    return {};
  }

  // Line of a link on a cycle: links whose endpoints both stay unordered by Kahn's algorithm.
  std::size_t cycle_line() const {
    std::set<std::string> ordered;
    std::map<std::string, std::size_t> indegree;
    for (const auto& n : net_.nodes) indegree[n.id] = 0;
    for (const auto& l : net_.links) {
      if (indegree.count(l.from_node) && indegree.count(l.to_node)) ++indegree[l.to_node];
    }
    std::vector<std::string> ready;
    for (const auto& [id, d] : indegree) {
      if (d == 0) ready.push_back(id);
    }
    while (!ready.empty()) {
      auto u = ready.back();
      ready.pop_back();
      ordered.insert(u);
      for (const auto& l : net_.links) {
        if (l.from_node == u && indegree.count(l.to_node) && --indegree[l.to_node] == 0) ready.push_back(l.to_node);
      }
    }
    for (const auto& l : net_.links) {
      if (indegree.count(l.from_node) && indegree.count(l.to_node) && !ordered.count(l.from_node) &&
          !ordered.count(l.to_node)) {
        return line_of(ElementKind::Link, l.id);
      }
    }
    return 1;
  }

  void check_network() {
    if (!errors_.empty()) return;  // avoid cascades from rows that failed to parse
    for (const auto& v : validate_network(net_)) {
      std::size_t line = 0;
      if (v.rule == "cycle") {
        line = cycle_line();
      } else if (v.element == ElementKind::Network) {
        line = net_.nodes.empty() ? 1 : line_of(ElementKind::Node, net_.nodes.front().id);
      } else {
        line = line_of(v.element, v.id);
      }
      section_ = section_of(v.element, v.id);
      const auto what = v.element == ElementKind::Network ? std::string("network")
                                                          : std::string(to_string(v.element)) + " '" + v.id + "'";
      error(line == 0 ? 1 : line, what + ": " + v.message + " [" + v.rule + "]");
    }
    section_.clear();
  }

  const Document& doc_;
  Network net_;
  std::string section_;
  std::vector<Diagnostic> errors_;
  std::vector<Diagnostic> warnings_;
  std::map<ElementKey, std::size_t> lines_;
  std::map<std::string, std::vector<TimeSeries::Entry>> series_;
  std::vector<std::string> series_order_;
  std::vector<std::pair<std::string, std::size_t>> subareas_;
};

}  // namespace

std::string Diagnostic::to_string() const {
  std::string out = "line " + std::to_string(line);
  if (!section.empty()) out += " [" + section + "]";
  return out + ": " + message;
}

ParseError::ParseError(std::vector<Diagnostic> diagnostics)
    : std::runtime_error(diagnostics.empty() ? "parse error" : diagnostics.front().to_string()),
      diagnostics_(std::move(diagnostics)) {}

bool is_supported_section(std::string_view name) {
  return std::find(kSupported.begin(), kSupported.end(), name) != kSupported.end();
}

Document tokenize(std::string_view text) {
  Document doc;
  std::vector<Diagnostic> errors;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos < text.size()) {
    auto end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    std::string_view raw = text.substr(pos, end - pos);
    pos = end + 1;
    ++line_no;
    if (!raw.empty() && raw.back() == '\r') raw.remove_suffix(1);

    const auto line = trim(raw);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']' || line.size() < 3) {
        errors.push_back({line_no, "", "malformed section header '" + std::string(line) + "'"});
        continue;
      }
      Section s;
      s.name = upper(trim(line.substr(1, line.size() - 2)));
      s.header_line = line_no;
      s.supported = is_supported_section(s.name);
      doc.sections.push_back(std::move(s));
      continue;
    }
    if (doc.sections.empty()) {
      if (line.front() == ';') continue;
      errors.push_back({line_no, "", "data before the first section header"});
      continue;
    }
    auto& section = doc.sections.back();
    if (!section.supported) {
      section.raw_lines.emplace_back(raw);
      continue;
    }
    if (line.front() == ';') {
      section.comments.emplace_back(line.substr(1));
      continue;
    }
    Row row;
    row.line = line_no;
    auto content = line;
    if (section.name == "TITLE") {
      row.tokens.emplace_back(content);
    } else {
      if (auto semi = content.find(';'); semi != std::string_view::npos) {
        row.comment = std::string(content.substr(semi + 1));
        content = content.substr(0, semi);
      }
      row.tokens = split_ws(content);
      if (row.tokens.empty()) continue;
    }
    section.rows.push_back(std::move(row));
  }
  if (doc.sections.empty() && errors.empty()) errors.push_back({std::max<std::size_t>(line_no, 1), "", "no sections found"});
  if (!errors.empty()) throw ParseError(std::move(errors));
  return doc;
}

ParseResult parse(std::string_view text) { return Builder(tokenize(text)).build(); }

namespace {

std::string num(double v) { return format_number(v); }

}  // namespace

std::string write(const Network& net) {
  std::ostringstream out;
  auto header = [&](const char* name, const char* columns) { out << '[' << name << "]\n;;" << columns << '\n'; };

  if (!net.raingages.empty()) {
    header("RAINGAGES", "Name Format Interval SCF Source Series");
    for (const auto& rg : net.raingages) out << rg.id << " INTENSITY 0:15 1.0 TIMESERIES " << rg.series << '\n';
    out << '\n';
  }
  if (!net.subcatchments.empty()) {
    header("SUBCATCHMENTS", "Name Raingage Outlet Area(m2) %Imperv Width Slope");
    for (const auto& sc : net.subcatchments) {
      out << sc.id << ' ' << sc.raingage << ' ' << sc.outlet << ' ' << num(sc.area) << ' '
          << num(sc.runoff_coefficient * 100.0) << ' ' << num(std::sqrt(sc.area)) << " 0.5\n";
    }
    out << '\n';
  }
  auto nodes_of = [&](NodeKind kind) {
    std::vector<const Node*> v;
    for (const auto& n : net.nodes) {
      if (n.kind == kind) v.push_back(&n);
    }
    return v;
  };
  if (auto js = nodes_of(NodeKind::Junction); !js.empty()) {
    header("JUNCTIONS", "Name Elevation MaxDepth InitDepth");
    for (const auto* n : js) {
      out << n->id << ' ' << num(n->invert_elevation) << ' ' << num(n->max_depth) << ' ' << num(n->initial_depth) << '\n';
    }
    out << '\n';
  }
  if (auto os = nodes_of(NodeKind::Outfall); !os.empty()) {
    header("OUTFALLS", "Name Elevation Type [Stage|Series]");
    for (const auto* n : os) {
      out << n->id << ' ' << num(n->invert_elevation) << ' ';
      if (const auto* f = std::get_if<FixedStage>(&n->boundary)) {
        out << "FIXED " << num(f->stage);
      } else if (const auto* s = std::get_if<SeriesStage>(&n->boundary)) {
        out << "TIMESERIES " << s->series;
      } else {
        out << "FREE";
      }
      out << '\n';
    }
    out << '\n';
  }
  if (auto ss = nodes_of(NodeKind::Storage); !ss.empty()) {
    header("STORAGE", "Name Elevation MaxDepth InitDepth Shape Params");
    for (const auto* n : ss) {
      out << n->id << ' ' << num(n->invert_elevation) << ' ' << num(n->max_depth) << ' ' << num(n->initial_depth) << ' ';
      if (const auto* a = std::get_if<ConstantArea>(&n->storage)) {
        out << "FUNCTIONAL 0 0 " << num(a->area);
      } else {
        out << "TABULAR " << std::get<AreaCurve>(n->storage).curve;
      }
      out << " 0 0\n";
    }
    out << '\n';
  }
  auto links_of = [&](LinkKind kind) {
    std::vector<const Link*> v;
    for (const auto& l : net.links) {
      if (l.kind() == kind) v.push_back(&l);
    }
    return v;
  };
  if (auto cs = links_of(LinkKind::Conduit); !cs.empty()) {
    header("CONDUITS", "Name From To Length Roughness InOffset OutOffset InitFlow MaxFlow Delay");
    for (const auto* l : cs) {
      const auto& p = std::get<ConduitParams>(l->params);
      out << l->id << ' ' << l->from_node << ' ' << l->to_node << " 100 0.01 0 0 0 " << num(p.capacity.value_or(0.0)) << ' '
          << p.delay_steps << '\n';
    }
    out << '\n';
  }
  if (auto os = links_of(LinkKind::Orifice); !os.empty()) {
    header("ORIFICES", "Name From To Type Offset Qcoeff Area");
    for (const auto* l : os) {
      const auto& p = std::get<OrificeParams>(l->params);
      out << l->id << ' ' << l->from_node << ' ' << l->to_node << " SIDE " << num(p.crest_offset) << ' '
          << num(p.discharge_coefficient) << ' ' << num(p.full_open_area) << '\n';
    }
    out << '\n';
  }
  if (auto ws = links_of(LinkKind::Weir); !ws.empty()) {
    header("WEIRS", "Name From To Type CrestHt Qcoeff Length");
    for (const auto* l : ws) {
      const auto& p = std::get<WeirParams>(l->params);
      out << l->id << ' ' << l->from_node << ' ' << l->to_node << " TRANSVERSE " << num(p.crest_height) << ' '
          << num(p.discharge_coefficient) << ' ' << num(p.crest_length) << '\n';
    }
    out << '\n';
  }
  if (auto ps = links_of(LinkKind::Pump); !ps.empty()) {
    header("PUMPS", "Name From To Curve Status");
    for (const auto* l : ps) {
      out << l->id << ' ' << l->from_node << ' ' << l->to_node << ' ' << std::get<PumpParams>(l->params).curve << ' '
          << (l->initial_setting >= 0.5 ? "ON" : "OFF") << '\n';
    }
    out << '\n';
  }
  if (!net.curves.empty()) {
    header("CURVES", "Name Type X Y");
    for (const auto& c : net.curves) {
      for (std::size_t i = 0; i < c.points.size(); ++i) {
        out << c.id << ' ';
        if (i == 0) out << (c.kind == CurveKind::Storage ? "STORAGE " : "PUMP4 ");
        out << num(c.points[i].first) << ' ' << num(c.points[i].second) << '\n';
      }
    }
    out << '\n';
  }
  if (!net.timeseries.empty()) {
    header("TIMESERIES", "Name Hours Value");
    for (const auto& [name, ts] : net.timeseries) {
      for (const auto& e : ts.entries()) out << name << ' ' << num(e.time / 3600.0) << ' ' << num(e.value) << '\n';
    }
    out << '\n';
  }
  return out.str();
}

}  // namespace stormbox::inp
