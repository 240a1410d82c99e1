#pragma once

#include <iosfwd>
#include <string>

#include "bmatch/dynamics.hpp"
#include "bmatch/graph.hpp"
#include "bmatch/marks.hpp"
#include "bmatch/preferences.hpp"

namespace bmatch {

// Marks file: header "n=<count> orientation=<lo|hi>", then n rows of
// whitespace-separated values with "inf" for infinity. Doubles are
// printed with enough digits to round-trip exactly.
void write_marks(std::ostream& out, const MarkMatrix& m);
MarkMatrix read_marks(std::istream& in);

// Preference file: one "p: q1 q2 ..." line per peer.
void write_instance(std::ostream& out, const PreferenceInstance& L);
PreferenceInstance read_instance(std::istream& in);

// Configuration file: one "p q" edge per line, sorted.
void write_configuration(std::ostream& out, const Configuration& c);
Configuration read_configuration(std::istream& in);

// Trace export: one JSON record per line.
void write_trace(std::ostream& out, const DynamicsResult& result);

std::string to_dot(const Configuration& c, PeerId n);

// File-path convenience wrappers; throw StructuralError when the file
// cannot be opened.
MarkMatrix read_marks_file(const std::string& path);
void write_marks_file(const std::string& path, const MarkMatrix& m);
PreferenceInstance read_instance_file(const std::string& path);
void write_instance_file(const std::string& path, const PreferenceInstance& L);
Configuration read_configuration_file(const std::string& path);
void write_configuration_file(const std::string& path, const Configuration& c);

/// Shortest exact decimal form of a double (round-trips bit-exactly).
std::string format_double(double v);

}  // namespace bmatch
