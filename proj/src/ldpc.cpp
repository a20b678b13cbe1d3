#include "errexp/ldpc.hpp"

#include <algorithm>
#include <set>
#include <sstream>

#include "errexp/errors.hpp"
#include "errexp/rng.hpp"

namespace errexp {

LdpcEnsemble make_ensemble(int k, int j) {
    if (k < 2) throw DomainError("ensemble: k must be >= 2");
    if (j < 1 || j >= k) throw DomainError("ensemble: j must satisfy 1 <= j < k");
    return {k, j};
}

CodeInstance sample_code(const LdpcEnsemble& ens, int n, uint64_t seed) {
    const long long slots = static_cast<long long>(n) * ens.j;
    if (slots % ens.k != 0)
        throw DomainError("sample_code: n*j must be divisible by k");
    const int m = static_cast<int>(slots / ens.k);
    CounterRng rng(seed);
    const int kMaxRestarts = 10000;
    for (int attempt = 0; attempt < kMaxRestarts; ++attempt) {
        // stubs: each index j times, shuffled, then cut into checks of size k
        std::vector<int> stubs(slots);
        for (int l = 0; l < n; ++l)
            for (int t = 0; t < ens.j; ++t) stubs[static_cast<std::size_t>(l) * ens.j + t] = l;
        for (long long i = slots - 1; i > 0; --i) {
            const long long r = static_cast<long long>(rng.below(static_cast<uint64_t>(i) + 1, 1, attempt, i));
            std::swap(stubs[i], stubs[r]);
        }
        std::vector<std::vector<int>> checks;
        checks.reserve(m);
        bool ok = true;
        std::set<std::vector<int>> seen;
        for (int c = 0; c < m && ok; ++c) {
            std::vector<int> chk(stubs.begin() + static_cast<long long>(c) * ens.k,
                                 stubs.begin() + static_cast<long long>(c + 1) * ens.k);
            std::sort(chk.begin(), chk.end());
            for (int t = 1; t < ens.k; ++t)
                if (chk[t] == chk[t - 1]) ok = false;  // repeated index inside a check
            if (ok && !seen.insert(chk).second) ok = false;  // duplicate check set
            checks.push_back(std::move(chk));
        }
        if (ok) return {n, std::move(checks)};
    }
    throw ResourceError("sample_code: rejection cap exceeded");
}

int parity_indicator(uint32_t x, const CodeInstance& code) {
    for (const auto& chk : code.checks) {
        int s = 0;
        for (int l : chk) s ^= static_cast<int>((x >> l) & 1u);
        if (s) return 0;
    }
    return 1;
}

int parity_indicator(const std::vector<int>& x, const CodeInstance& code) {
    if (static_cast<int>(x.size()) != code.n)
        throw DomainError("parity_indicator: word length mismatch");
    for (const auto& chk : code.checks) {
        int s = 0;
        for (int l : chk) s ^= (x[l] & 1);
        if (s) return 0;
    }
    return 1;
}

namespace {
void k_subsets(int n, int k, std::vector<std::vector<int>>& out) {
    std::vector<int> cur(k);
    // iterative lexicographic enumeration
    for (int i = 0; i < k; ++i) cur[i] = i;
    while (true) {
        out.push_back(cur);
        int i = k - 1;
        while (i >= 0 && cur[i] == n - k + i) --i;
        if (i < 0) break;
        ++cur[i];
        for (int t = i + 1; t < k; ++t) cur[t] = cur[t - 1] + 1;
    }
}

void extend(const std::vector<std::vector<int>>& cand, std::size_t start, int m, int j,
            std::vector<int>& deg, std::vector<int>& chosen, std::vector<CodeInstance>& out, int n) {
    if (static_cast<int>(chosen.size()) == m) {
        for (int d : deg)
            if (d != j) return;
        CodeInstance code{n, {}};
        for (int idx : chosen) code.checks.push_back(cand[idx]);
        out.push_back(std::move(code));
        return;
    }
    const std::size_t remaining = static_cast<std::size_t>(m) - chosen.size();
    for (std::size_t c = start; c + remaining <= cand.size(); ++c) {
        bool fits = true;
        for (int l : cand[c])
            if (deg[l] + 1 > j) {
                fits = false;
                break;
            }
        if (!fits) continue;
        for (int l : cand[c]) ++deg[l];
        chosen.push_back(static_cast<int>(c));
        extend(cand, c + 1, m, j, deg, chosen, out, n);
        chosen.pop_back();
        for (int l : cand[c]) --deg[l];
    }
}
}  // namespace

std::vector<CodeInstance> enumerate_regular_codes(const LdpcEnsemble& ens, int n) {
    const long long slots = static_cast<long long>(n) * ens.j;
    if (slots % ens.k != 0)
        throw DomainError("enumerate_regular_codes: n*j must be divisible by k");
    const int m = static_cast<int>(slots / ens.k);
    // candidate pool size guard
    double count = 1.0;
    for (int i = 0; i < ens.k; ++i) count = count * (n - i) / (i + 1);
    if (count > 2e4) throw ResourceError("enumerate_regular_codes: candidate pool too large");
    std::vector<std::vector<int>> cand;
    k_subsets(n, ens.k, cand);
    std::vector<CodeInstance> out;
    std::vector<int> deg(n, 0), chosen;
    extend(cand, 0, m, ens.j, deg, chosen, out, n);
    return out;
}

std::string serialize_code(const CodeInstance& code) {
    std::ostringstream os;
    for (const auto& chk : code.checks) {
        for (std::size_t i = 0; i < chk.size(); ++i) os << (i ? " " : "") << chk[i] + 1;
        os << "\n";
    }
    return os.str();
}

CodeInstance parse_code(const std::string& text, int n) {
    CodeInstance code{n, {}};
    std::istringstream is(text);
    std::string line;
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        std::istringstream ls(line);
        std::vector<int> chk;
        int v;
        while (ls >> v) {
            if (v < 1 || v > n) throw DomainError("parse_code: index out of range");
            chk.push_back(v - 1);
        }
        if (!ls.eof()) throw DomainError("parse_code: bad token in '" + line + "'");
        std::sort(chk.begin(), chk.end());
        code.checks.push_back(std::move(chk));
    }
    return code;
}

}  // namespace errexp
