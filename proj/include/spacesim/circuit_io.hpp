#pragma once

#include <iosfwd>
#include <string>
#include <string_view>

#include "spacesim/circuit.hpp"

namespace spacesim::circuit {

// Line-oriented text format:
//
//   circuit n=<gates> inputs=<k> output=<idx>
//   <idx> INPUT <j> | CONST <0|1> | NOT <s> | AND <s> <s> | OR <s> <s> | DUP <s>
//
// '#' starts a comment running to end of line. Gate lines must appear in
// index order. Parse failures throw Error(ParseError) naming the line.

Circuit parse_circuit(std::string_view text);
Circuit read_circuit_file(const std::string& path);

std::string write_circuit(const CircuitView& circuit);
void write_circuit(std::ostream& out, const CircuitView& circuit);

}  // namespace spacesim::circuit
