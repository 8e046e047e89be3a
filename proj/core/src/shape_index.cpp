#include "gridshape/shape_index.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <iostream>
#include <map>
#include <set>
#include <sstream>

#include "gridshape/error.hpp"
#include "parallel.hpp"

namespace gridshape {

namespace {

constexpr std::string_view kMagic = "gridshape-index";
constexpr std::string_view kSeparator = "---";

std::vector<std::string_view> split_lines(std::string_view text) {
  std::vector<std::string_view> lines;
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    auto line = text.substr(pos, end - pos);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    lines.push_back(line);
    pos = end + 1;
  }
  return lines;
}

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const auto at = s.find(sep, start);
    out.push_back(s.substr(start, at == std::string_view::npos ? std::string_view::npos : at - start));
    if (at == std::string_view::npos) break;
    start = at + 1;
  }
  return out;
}

[[noreturn]] void header_error(const std::string& what) {
  throw Error(ErrorKind::kParse, "index header: " + what);
}

IndexSettings parse_header(std::string_view line, std::size_t& entry_count) {
  const auto tokens = split(line, ' ');
  if (tokens.empty() || tokens[0] != kMagic) header_error("missing header");
  std::map<std::string_view, std::string_view> kv;
  for (std::size_t i = 1; i < tokens.size(); ++i) {
    if (tokens[i].empty()) continue;
    const auto eq = tokens[i].find('=');
    if (eq == std::string_view::npos) header_error("malformed token '" + std::string(tokens[i]) + "'");
    kv[tokens[i].substr(0, eq)] = tokens[i].substr(eq + 1);
  }
  auto number = [&](std::string_view key, auto& out) {
    const auto it = kv.find(key);
    if (it == kv.end()) header_error("missing " + std::string(key));
    const auto* last = it->second.data() + it->second.size();
    const auto [ptr, ec] = std::from_chars(it->second.data(), last, out);
    if (ec != std::errc() || ptr != last) header_error("invalid " + std::string(key));
  };
  IndexSettings s;
  number("n", s.fingerprint.n);
  number("tau", s.fingerprint.tau);
  number("m", s.fingerprint.m);
  int exclude = 0;
  if (kv.count("exclude_center")) number("exclude_center", exclude);
  s.exclude_center = exclude != 0;
  number("entries", entry_count);
  return s;
}

}  // namespace

std::string class_from_filename(std::string_view name) {
  const std::string stem = std::filesystem::path(std::string(name)).stem().string();
  const auto hyphen = stem.rfind('-');
  return hyphen == std::string::npos ? stem : stem.substr(0, hyphen);
}

ExtractOptions IndexSettings::extract_options() const {
  ExtractOptions o;
  o.grid.n = fingerprint.n;
  o.grid.interior_threshold = fingerprint.tau;
  o.grid.exclude_center = exclude_center;
  o.cdf_bins = fingerprint.m;
  return o;
}

ShapeIndex::ShapeIndex(IndexSettings settings,
                       std::vector<CompositeDescriptor> entries,
                       std::vector<ManifestEntry> manifest)
    : settings_(settings), entries_(std::move(entries)), manifest_(std::move(manifest)) {
  std::sort(entries_.begin(), entries_.end(),
            [](const auto& a, const auto& b) { return a.shape_id < b.shape_id; });
  for (std::size_t i = 0; i < entries_.size(); ++i) {
    if (!(entries_[i].fingerprint == settings_.fingerprint)) {
      throw Error(ErrorKind::kCorruptIndex,
                  "corrupt index: entry '" + entries_[i].shape_id + "' has config " +
                      entries_[i].fingerprint.to_string() + ", index has " +
                      settings_.fingerprint.to_string());
    }
    if (i > 0 && entries_[i].shape_id == entries_[i - 1].shape_id) {
      throw Error(ErrorKind::kCorruptIndex,
                  "corrupt index: duplicate shape id '" + entries_[i].shape_id + "'");
    }
  }
}

std::vector<ManifestEntry> ShapeIndex::failures() const {
  std::vector<ManifestEntry> out;
  std::copy_if(manifest_.begin(), manifest_.end(), std::back_inserter(out),
               [](const ManifestEntry& e) { return !e.ok(); });
  return out;
}

ShapeIndex build_index(const std::filesystem::path& dir, const BuildOptions& opts) {
  opts.extract.grid.validate();
  std::error_code ec;
  if (!std::filesystem::is_directory(dir, ec)) {
    throw Error(ErrorKind::kIo, "not a directory: " + dir.string());
  }
  auto warn = [&](const std::string& msg) {
    if (opts.warn) {
      opts.warn(msg);
    } else {
      std::cerr << "warning: " << msg << '\n';
    }
  };

  std::vector<std::filesystem::path> files;
  for (const auto& entry : std::filesystem::directory_iterator(dir)) {
    if (entry.is_regular_file() && has_supported_extension(entry.path())) {
      files.push_back(entry.path());
    }
  }
  std::sort(files.begin(), files.end(), [](const auto& a, const auto& b) {
    return a.filename().string() < b.filename().string();
  });

  // Ids are assigned in sorted file-name order so that suffixing is stable.
  std::vector<std::string> ids;
  std::map<std::string, int> seen;
  for (const auto& f : files) {
    const std::string stem = f.stem().string();
    const int dup = seen[stem]++;
    if (dup == 0) {
      ids.push_back(stem);
    } else {
      ids.push_back(stem + "-dup" + std::to_string(dup));
      warn("duplicate shape id '" + stem + "' for " + f.filename().string() +
           ", using '" + ids.back() + "'");
    }
  }

  std::vector<std::optional<CompositeDescriptor>> results(files.size());
  std::vector<std::string> errors(files.size());
  detail::parallel_for(files.size(), opts.threads, [&](std::size_t i) {
    try {
      const BinaryImage img = largest_component(load_image(files[i], opts.binarize));
      results[i] = extract(img, opts.extract, ids[i],
                           class_from_filename(files[i].filename().string()));
    } catch (const Error& e) {
      errors[i] = e.what();
    }
  });

  std::vector<CompositeDescriptor> entries;
  std::vector<ManifestEntry> manifest;
  for (std::size_t i = 0; i < files.size(); ++i) {
    const std::string name = files[i].filename().string();
    if (results[i]) {
      entries.push_back(std::move(*results[i]));
      manifest.push_back({name, ids[i], ""});
    } else {
      warn("skipping " + name + ": " + errors[i]);
      manifest.push_back({name, "", errors[i]});
    }
  }
  if (entries.empty()) {
    throw Error(ErrorKind::kEmptyIndex,
                "empty index: no shape could be extracted from " + dir.string());
  }
  IndexSettings settings{{opts.extract.grid.n,
                          opts.extract.grid.interior_threshold,
                          opts.extract.cdf_bins},
                         opts.extract.grid.exclude_center};
  return ShapeIndex(settings, std::move(entries), std::move(manifest));
}

std::string serialize_index(const ShapeIndex& ix) {
  const auto& fp = ix.fingerprint();
  std::string out;
  out += std::string(kMagic) + " n=" + std::to_string(fp.n) + " tau=" + format_value(fp.tau) +
         " m=" + std::to_string(fp.m) +
         " exclude_center=" + (ix.settings().exclude_center ? "1" : "0") +
         " entries=" + std::to_string(ix.size()) + '\n';
  for (const auto& e : ix.manifest()) {
    if (e.ok()) {
      out += "source\t" + e.shape_id + '\t' + e.source + '\n';
    } else {
      out += "failed\t" + e.source + '\t' + e.error + '\n';
    }
  }
  for (const auto& d : ix.entries()) {
    out += kSeparator;
    out += '\n';
    out += serialize(d);
  }
  return out;
}

ShapeIndex parse_index(std::string_view text) {
  const auto lines = split_lines(text);
  std::size_t i = 0;
  while (i < lines.size() && (lines[i].empty() || lines[i].front() == '#')) ++i;
  if (i == lines.size()) {
    throw Error(ErrorKind::kParse, "index: missing header");
  }
  std::size_t expected = 0;
  const IndexSettings settings = parse_header(lines[i++], expected);

  std::vector<ManifestEntry> manifest;
  for (; i < lines.size() && lines[i] != kSeparator; ++i) {
    if (lines[i].empty() || lines[i].front() == '#') continue;
    const auto parts = split(lines[i], '\t');
    if (parts.size() != 3 || (parts[0] != "source" && parts[0] != "failed")) {
      throw Error(ErrorKind::kParse,
                  "index: malformed manifest line " + std::to_string(i + 1));
    }
    if (parts[0] == "source") {
      manifest.push_back({std::string(parts[2]), std::string(parts[1]), ""});
    } else {
      manifest.push_back({std::string(parts[1]), "", std::string(parts[2])});
    }
  }

  std::vector<CompositeDescriptor> entries;
  while (i < lines.size()) {
    ++i;  // separator
    std::string record;
    for (; i < lines.size() && lines[i] != kSeparator; ++i) {
      record.append(lines[i]);
      record.push_back('\n');
    }
    try {
      entries.push_back(parse_descriptor(record));
    } catch (const Error& e) {
      throw Error(ErrorKind::kParse, "index record " + std::to_string(entries.size() + 1) +
                                         ": " + e.what());
    }
    if (!(entries.back().fingerprint == settings.fingerprint)) {
      throw Error(ErrorKind::kCorruptIndex,
                  "corrupt index: record '" + entries.back().shape_id + "' has config " +
                      entries.back().fingerprint.to_string() + ", header has " +
                      settings.fingerprint.to_string());
    }
  }
  if (entries.size() != expected) {
    throw Error(ErrorKind::kCorruptIndex,
                "corrupt index: header declares " + std::to_string(expected) +
                    " entries, found " + std::to_string(entries.size()));
  }
  return ShapeIndex(settings, std::move(entries), std::move(manifest));
}

void save_index(const ShapeIndex& ix, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorKind::kIo, "cannot write " + path.string());
  out << serialize_index(ix);
  if (!out) throw Error(ErrorKind::kIo, "write failed for " + path.string());
}

ShapeIndex load_index(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::kIo, "cannot open " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  try {
    return parse_index(buf.str());
  } catch (const Error& e) {
    throw Error(e.kind(), path.string() + ": " + e.what());
  }
}

}  // namespace gridshape
