#pragma once

// Reader and writer for the subset of the SWMM .inp text format used by the shipped
// scenarios. Lengths are metres, flows m^3/s, areas m^2, rainfall mm/hr.

#include "stormbox/network.hpp"

#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace stormbox::inp {

struct Diagnostic {
  std::size_t line = 0;  // 1-based
  std::string section;   // upper-case section name, empty outside any section
  std::string message;

  std::string to_string() const;
};

struct Row {
  std::size_t line = 0;
  std::vector<std::string> tokens;
  std::string comment;  // trailing `;` comment, without the semicolon
};

struct Section {
  std::string name;  // upper-case
  std::size_t header_line = 0;
  bool supported = false;
  std::vector<Row> rows;
  std::vector<std::string> comments;  // whole-line comments inside the section
  std::vector<std::string> raw_lines;  // verbatim text, kept for unsupported sections
};

struct Document {
  std::vector<Section> sections;
};

/// Raised when the text cannot be turned into a valid network. Carries every problem found.
class ParseError : public std::runtime_error {
 public:
  explicit ParseError(std::vector<Diagnostic> diagnostics);
  const std::vector<Diagnostic>& diagnostics() const noexcept { return diagnostics_; }

 private:
  std::vector<Diagnostic> diagnostics_;
};

struct ParseResult {
  Network network;
  std::vector<Diagnostic> warnings;
};

/// The sections interpreted by `parse`; anything else is kept but ignored with a warning.
bool is_supported_section(std::string_view upper_name);

/// Splits text into sections and whitespace-delimited rows. Accepts LF and CRLF.
Document tokenize(std::string_view text);

/// Parses and validates a network. Throws ParseError with line-numbered diagnostics.
ParseResult parse(std::string_view text);

/// Serializes a valid network; `parse(write(n))` reproduces n.
std::string write(const Network& network);

}  // namespace stormbox::inp
