// CSV / JSONL readers and writers for samples and curves. All writes go
// through a temp file plus rename.

#pragma once

#include <string>
#include <vector>

#include "qwishart/blr.hpp"
#include "qwishart/types.hpp"

namespace qwishart {

// Bloch sample CSV with header "x,y,z".
void write_bloch_csv(const std::string& path, const std::vector<BlochVector>& samples);
std::vector<BlochVector> read_bloch_csv(const std::string& path);

// Row-major complex matrices, one JSON array per line, for d > 2 states.
void write_states_jsonl(const std::string& path, const std::vector<DensityMatrix>& states);
std::vector<DensityMatrix> read_states_jsonl(const std::string& path);

// BLR curve CSV with header "lambda,size,c_empirical,c_theoretical".
void write_blr_csv(const std::string& path, const BlrCurve& curve);
BlrCurve read_blr_csv(const std::string& path);

// Atomic text write (temp file + rename).
void write_text_atomic(const std::string& path, const std::string& content);

}  // namespace qwishart
