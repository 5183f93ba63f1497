#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>

#include "metachain/chain_graph.hpp"

namespace metachain {

enum class InputFormat { Json, Tsv };

/// {"states": [...], "arcs": [{"from": .., "to": .., "U": "3/2", "kappa": 0.7}]}
///
/// U may be an integer, a decimal or "p/q" string, or a JSON float (read via
/// its shortest round-trip decimal form). "states" is optional; when absent,
/// states are taken in order of first appearance.
ChainGraph parse_json(std::string_view text);

/// One arc per line, `tail head U [kappa]`, whitespace separated; `#` starts
/// a comment. A `#!states a b c` line fixes the state order.
ChainGraph parse_tsv(std::string_view text);

ChainGraph parse_graph(std::string_view text, InputFormat format);

/// Format from the extension (.json, .tsv, .txt), else sniffed from content.
ChainGraph load_graph(const std::filesystem::path& path, std::optional<InputFormat> format = std::nullopt);

std::optional<InputFormat> parse_format_name(std::string_view name);

/// Serializations that parse back to an identical graph.
std::string to_json_text(const ChainGraph& g);
std::string to_tsv_text(const ChainGraph& g);

std::string read_text_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, const std::string& text);

}  // namespace metachain
