#include "motifgrid/mask_io.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>

#include "motifgrid/csv.hpp"

namespace motifgrid {

namespace csv {

std::string escape(std::string_view field) {
  if (field.find_first_of(",\"\r\n") == std::string_view::npos) return std::string(field);
  std::string out = "\"";
  for (char ch : field) {
    if (ch == '"') out += '"';
    out += ch;
  }
  out += '"';
  return out;
}

std::vector<std::string> split(std::string_view line) {
  std::vector<std::string> fields;
  std::string current;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char ch = line[i];
    if (quoted) {
      if (ch == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          current += '"';
          ++i;
        } else {
          quoted = false;
        }
      } else {
        current += ch;
      }
    } else if (ch == '"') {
      quoted = true;
    } else if (ch == ',') {
      fields.push_back(std::move(current));
      current.clear();
    } else if (ch != '\r') {
      current += ch;
    }
  }
  fields.push_back(std::move(current));
  return fields;
}

std::string join(const std::vector<std::string>& fields) {
  std::string out;
  for (std::size_t i = 0; i < fields.size(); ++i) {
    if (i) out += ',';
    out += escape(fields[i]);
  }
  return out;
}

}  // namespace csv

std::string format_double(double value) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, res.ptr);
}

void write_mask_stack(std::ostream& out, const MaskStack& stack) {
  out << kMaskFileHeader << '\n';
  out << "layers " << stack.size() << '\n';
  for (std::size_t i = 0; i < stack.size(); ++i) {
    const auto& m = stack[i];
    for (auto v : m.entries()) {
      if (v > 1) throw FormatError("cannot serialize non-binary entry in mask " + std::to_string(i));
    }
    out << "mask " << i << ' ' << m.rows() << ' ' << m.cols() << ' ' << m.edge_count() << '\n';
    for (std::size_t r = 0; r < m.rows(); ++r) {
      const auto row = m.row(r);
      for (std::size_t c = 0; c < m.cols(); ++c) {
        if (row[c]) out << r << ' ' << c << '\n';
      }
    }
  }
}

std::string to_mask_text(const MaskStack& stack) {
  std::ostringstream os;
  write_mask_stack(os, stack);
  return os.str();
}

void save_mask_stack(const std::filesystem::path& path, const MaskStack& stack) {
  const std::string text = to_mask_text(stack);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw FormatError("cannot open " + path.string() + " for writing");
  out << text;
  if (!out) throw FormatError("write failed for " + path.string());
}

namespace {

class LineReader {
 public:
  explicit LineReader(std::istream& in) : in_(in) {}

  std::vector<std::string_view> next_tokens() {
    if (!std::getline(in_, line_)) fail("unexpected end of file");
    ++number_;
    if (!line_.empty() && line_.back() == '\r') line_.pop_back();
    tokens_.clear();
    std::string_view rest(line_);
    while (!rest.empty()) {
      const auto start = rest.find_first_not_of(" \t");
      if (start == std::string_view::npos) break;
      rest.remove_prefix(start);
      const auto end = rest.find_first_of(" \t");
      tokens_.push_back(rest.substr(0, end));
      rest.remove_prefix(end == std::string_view::npos ? rest.size() : end);
    }
    return tokens_;
  }

  const std::string& line() const { return line_; }

  std::uint64_t number(std::string_view token) const {
    std::uint64_t value = 0;
    const auto* end = token.data() + token.size();
    const auto res = std::from_chars(token.data(), end, value);
    if (res.ec != std::errc{} || res.ptr != end) fail("expected a non-negative integer, got '" + std::string(token) + "'");
    return value;
  }

  [[noreturn]] void fail(const std::string& message) const {
    throw FormatError("line " + std::to_string(number_) + ": " + message);
  }

  bool at_end() {
    std::string rest;
    while (std::getline(in_, rest)) {
      if (rest.find_first_not_of(" \t\r") != std::string::npos) return false;
    }
    return true;
  }

 private:
  std::istream& in_;
  std::string line_;
  std::vector<std::string_view> tokens_;
  std::size_t number_ = 0;
};

constexpr std::uint64_t kMaxDimension = 1u << 24;

}  // namespace

MaskStack read_mask_stack(std::istream& in, std::string label) {
  LineReader reader(in);
  reader.next_tokens();
  if (reader.line() != kMaskFileHeader) reader.fail("expected header '" + std::string(kMaskFileHeader) + "'");

  auto tokens = reader.next_tokens();
  if (tokens.size() != 2 || tokens[0] != "layers") reader.fail("expected 'layers <L>'");
  const std::uint64_t layer_count = reader.number(tokens[1]);

  std::vector<MaskMatrix> masks;
  for (std::uint64_t i = 0; i < layer_count; ++i) {
    tokens = reader.next_tokens();
    if (tokens.size() != 5 || tokens[0] != "mask") reader.fail("expected 'mask <i> <rows> <cols> <edge_count>'");
    if (reader.number(tokens[1]) != i) reader.fail("mask index out of sequence");
    const std::uint64_t rows = reader.number(tokens[2]);
    const std::uint64_t cols = reader.number(tokens[3]);
    const std::uint64_t edges = reader.number(tokens[4]);
    if (rows > kMaxDimension || cols > kMaxDimension || rows * cols > (std::uint64_t{1} << 32)) {
      reader.fail("mask dimensions too large");
    }
    if (edges > rows * cols) reader.fail("edge count exceeds rows*cols");
    MaskMatrix m(rows, cols);
    std::uint64_t previous = 0;
    for (std::uint64_t e = 0; e < edges; ++e) {
      tokens = reader.next_tokens();
      if (tokens.size() != 2) reader.fail("expected '<row> <col>'");
      const std::uint64_t r = reader.number(tokens[0]);
      const std::uint64_t c = reader.number(tokens[1]);
      if (r >= rows || c >= cols) reader.fail("edge out of range");
      const std::uint64_t flat = r * cols + c;
      if (e > 0 && flat <= previous) reader.fail("edges must be strictly ascending");
      previous = flat;
      m.set(r, c, 1);
    }
    masks.push_back(std::move(m));
  }
  if (!reader.at_end()) throw FormatError("trailing content after last mask");
  return MaskStack(std::move(masks), std::move(label));
}

MaskStack load_mask_stack(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FormatError("cannot open " + path.string());
  try {
    return read_mask_stack(in, path.stem().string());
  } catch (const FormatError& e) {
    throw FormatError(path.string() + ": " + e.what());
  }
}

namespace {

const std::vector<std::string> kManifestColumns = {
    "file", "label", "sparsity_tag", "network_id", "level", "global_sparsity", "final_train_mse", "final_val_mse"};

std::string opt(const std::optional<double>& v) { return v ? format_double(*v) : std::string(); }

std::optional<double> parse_opt_double(const std::string& s, const std::string& what) {
  if (s.empty()) return std::nullopt;
  double v = 0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc{} || res.ptr != s.data() + s.size()) throw FormatError("manifest: bad " + what + " '" + s + "'");
  return v;
}

}  // namespace

void write_manifest(const std::filesystem::path& path, const std::vector<ManifestEntry>& entries) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw FormatError("cannot open " + path.string() + " for writing");
  out << csv::join(kManifestColumns) << '\n';
  for (const auto& e : entries) {
    out << csv::join({e.file, e.label, e.sparsity_tag, e.network_id ? std::to_string(*e.network_id) : std::string(),
                      opt(e.level), opt(e.global_sparsity), opt(e.final_train_mse), opt(e.final_val_mse)})
        << '\n';
  }
}

std::vector<ManifestEntry> read_manifest(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FormatError("cannot open " + path.string());
  std::string line;
  if (!std::getline(in, line)) throw FormatError(path.string() + ": empty manifest");
  const auto header = csv::split(line);
  std::map<std::string, std::size_t> column;
  for (std::size_t i = 0; i < header.size(); ++i) column[header[i]] = i;
  for (const char* required : {"file", "label", "sparsity_tag"}) {
    if (!column.count(required)) throw FormatError(path.string() + ": manifest missing column '" + required + "'");
  }
  std::vector<ManifestEntry> entries;
  while (std::getline(in, line)) {
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    const auto fields = csv::split(line);
    auto get = [&](const std::string& name) -> std::string {
      const auto it = column.find(name);
      if (it == column.end() || it->second >= fields.size()) return {};
      return fields[it->second];
    };
    ManifestEntry e;
    e.file = get("file");
    if (e.file.empty()) throw FormatError(path.string() + ": manifest row without file");
    e.label = get("label");
    e.sparsity_tag = get("sparsity_tag");
    if (const auto id = get("network_id"); !id.empty()) {
      const auto v = parse_opt_double(id, "network_id");
      e.network_id = static_cast<std::size_t>(*v);
    }
    e.level = parse_opt_double(get("level"), "level");
    e.global_sparsity = parse_opt_double(get("global_sparsity"), "global_sparsity");
    e.final_train_mse = parse_opt_double(get("final_train_mse"), "final_train_mse");
    e.final_val_mse = parse_opt_double(get("final_val_mse"), "final_val_mse");
    entries.push_back(std::move(e));
  }
  return entries;
}

std::vector<InputRef> discover_inputs(const std::vector<std::filesystem::path>& paths) {
  namespace fs = std::filesystem;
  std::vector<InputRef> refs;
  for (const auto& p : paths) {
    if (fs::is_directory(p)) {
      const fs::path manifest = p / kManifestName;
      if (fs::exists(manifest)) {
        for (auto& e : read_manifest(manifest)) {
          refs.push_back({p / e.file, e.label.empty() ? fs::path(e.file).stem().string() : e.label,
                          e.sparsity_tag.empty() ? std::nullopt : std::optional(e.sparsity_tag)});
        }
      } else {
        std::vector<fs::path> files;
        for (const auto& entry : fs::directory_iterator(p)) {
          if (entry.is_regular_file() && entry.path().extension() == ".mask") files.push_back(entry.path());
        }
        std::sort(files.begin(), files.end());
        for (auto& f : files) refs.push_back({f, f.stem().string(), std::nullopt});
      }
    } else {
      refs.push_back({p, p.stem().string(), std::nullopt});
    }
  }
  return refs;
}

}  // namespace motifgrid
