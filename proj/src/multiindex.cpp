#include "multiindex.hpp"

#include <map>
#include <mutex>
#include <numeric>
#include <stdexcept>
#include <string>

namespace wehrl {

int MultiIndex::degree() const {
    return std::accumulate(entries.begin(), entries.end(), 0);
}

double binomial(int n, int k) {
    if (k < 0 || k > n) return 0.0;
    if (k > n - k) k = n - k;
    double r = 1.0;
    for (int i = 1; i <= k; ++i) r = r * static_cast<double>(n - k + i) / static_cast<double>(i);
    // Round to the nearest integer; the product is exact until ~2^53.
    return std::round(r);
}

double multinomial(int degree, std::span<const int> alpha) {
    double r = 1.0;
    int partial = degree;
    for (int a : alpha) {
        r *= binomial(partial, a);
        partial -= a;
    }
    return r;
}

std::size_t multiindex_count(int d, int N) {
    if (d < 1 || N < 0) throw std::invalid_argument("multiindex_count: need d >= 1, N >= 0");
    std::size_t count = 1;
    for (int i = 1; i <= d; ++i) {
        // count <- count * (N + i) / i, exact at every step
        if (count > (SIZE_MAX / static_cast<std::size_t>(N + i)))
            throw std::overflow_error("multiindex_count: binom(N+d,d) overflows size_t");
        count = count * static_cast<std::size_t>(N + i) / static_cast<std::size_t>(i);
    }
    if (count > (std::size_t{1} << 40))
        throw std::overflow_error("multiindex_count: basis too large for dense storage");
    return count;
}

namespace {

void enumerate_rec(int vars_left, int degree_left, std::vector<int>& work,
                   std::vector<MultiIndex>& out) {
    if (vars_left == 1) {
        work.push_back(degree_left);
        out.push_back(MultiIndex{work});
        work.pop_back();
        return;
    }
    for (int a = degree_left; a >= 0; --a) {
        work.push_back(a);
        enumerate_rec(vars_left - 1, degree_left - a, work, out);
        work.pop_back();
    }
}

std::mutex cache_mutex;

}  // namespace

const std::vector<MultiIndex>& enumerate_multiindices(int d, int N) {
    static std::map<std::pair<int, int>, std::vector<MultiIndex>> cache;
    std::scoped_lock lock(cache_mutex);
    auto key = std::make_pair(d, N);
    auto it = cache.find(key);
    if (it != cache.end()) return it->second;

    std::size_t count = multiindex_count(d, N);
    std::vector<MultiIndex> list;
    list.reserve(count);
    std::vector<int> work;
    enumerate_rec(d + 1, N, work, list);
    if (list.size() != count)
        throw std::logic_error("enumerate_multiindices: count mismatch");
    return cache.emplace(key, std::move(list)).first->second;
}

std::size_t multiindex_rank(int d, int N, std::span<const int> alpha) {
    if (static_cast<int>(alpha.size()) != d + 1)
        throw std::invalid_argument("multiindex_rank: alpha has wrong length");
    // Descending lexicographic rank: indices whose leading entry is larger
    // come first; recurse on the tail.
    std::size_t rank = 0;
    int remaining = N;
    for (int j = 0; j < d; ++j) {
        int a = alpha[static_cast<std::size_t>(j)];
        if (a < 0 || a > remaining)
            throw std::invalid_argument("multiindex_rank: entries do not sum to N");
        int vars_after = d - j;  // free entries after position j
        for (int b = remaining; b > a; --b)
            rank += static_cast<std::size_t>(binomial(remaining - b + vars_after - 1, vars_after - 1));
        remaining -= a;
    }
    if (alpha[static_cast<std::size_t>(d)] != remaining)
        throw std::invalid_argument("multiindex_rank: entries do not sum to N");
    return rank;
}

const std::vector<double>& bombieri_weights(int d, int N) {
    static std::map<std::pair<int, int>, std::vector<double>> cache;
    const auto& idx = enumerate_multiindices(d, N);
    std::scoped_lock lock(cache_mutex);
    auto key = std::make_pair(d, N);
    auto it = cache.find(key);
    if (it != cache.end()) return it->second;

    std::vector<double> w(idx.size());
    for (std::size_t i = 0; i < idx.size(); ++i)
        w[i] = 1.0 / multinomial(N, idx[i].entries);
    return cache.emplace(key, std::move(w)).first->second;
}

}  // namespace wehrl
