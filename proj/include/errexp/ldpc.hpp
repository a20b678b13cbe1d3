#pragma once
#include <cstdint>
#include <string>
#include <vector>

namespace errexp {

// (k, j)-regular parity-check ensemble: checks of size k, every symbol in
// exactly j checks; design rate R = 1 - j/k.
struct LdpcEnsemble {
    int k;  // indices per parity check
    int j;  // checks per index
    double rate_bits() const { return 1.0 - static_cast<double>(j) / k; }
};

LdpcEnsemble make_ensemble(int k, int j);

struct CodeInstance {
    int n;
    std::vector<std::vector<int>> checks;  // sorted 0-based index sets, size k each
};

// Configuration-model sampling with rejection of repeated indices within a
// check and duplicate check sets; deterministic per seed.
CodeInstance sample_code(const LdpcEnsemble& ens, int n, uint64_t seed);

// 1 iff every check of the code XORs to zero on word x (bit l = (x>>l)&1).
int parity_indicator(uint32_t x, const CodeInstance& code);
int parity_indicator(const std::vector<int>& x, const CodeInstance& code);

// All degree-valid codes, each exactly once (checks treated as a set).
std::vector<CodeInstance> enumerate_regular_codes(const LdpcEnsemble& ens, int n);

std::string serialize_code(const CodeInstance& code);    // one check per line, 1-based
CodeInstance parse_code(const std::string& text, int n);

}  // namespace errexp
