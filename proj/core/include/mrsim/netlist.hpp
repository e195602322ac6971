#pragma once

#include <stdexcept>
#include <string>

#include "mrsim/circuit.hpp"

namespace mrsim {

/// Parse failure; message carries "line N: what went wrong".
class ParseError : public std::runtime_error {
  public:
    ParseError(int line, const std::string& what)
        : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}

    [[nodiscard]] int line() const { return line_; }

  private:
    int line_;
};

/// Parse netlist text. Throws ParseError on malformed input.
NetlistDocument parse_netlist(const std::string& text);

/// Read and parse a netlist file. Throws std::runtime_error if the file
/// cannot be read, ParseError on malformed content.
NetlistDocument parse_netlist_file(const std::string& path);

/// Parse a single numeric literal with optional SPICE suffix
/// (t g meg k m u n p f, case-insensitive). Throws ParseError-free
/// std::invalid_argument on garbage.
double parse_spice_number(const std::string& token);

/// Shortest decimal string that round-trips to the same double.
std::string format_double(double v);

/// Render a circuit back to netlist text (instances only, one per line).
std::string format_circuit(const Circuit& circuit);

}  // namespace mrsim
