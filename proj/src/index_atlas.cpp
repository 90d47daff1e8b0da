#include "idemfactor/index_atlas.hpp"

#include <algorithm>
#include <thread>
#include <tuple>

#include "idemfactor/decomposition.hpp"

namespace idemfactor {

namespace {

constexpr std::uint64_t max_keys = 2'000'000;

std::uint64_t power(int base, int exp)
{
    std::uint64_t r = 1;
    for (int i = 0; i < exp; ++i)
        r *= static_cast<std::uint64_t>(base);
    return r;
}

struct Candidate
{
    MatrixKey key;
    MatrixKey prefix;
    MatrixKey factor;

    friend bool operator<(const Candidate& a, const Candidate& b)
    {
        return std::tie(a.key, a.factor, a.prefix) < std::tie(b.key, b.factor, b.prefix);
    }
};

// Keeps the first candidate per key, i.e. the smallest (factor, prefix) after sorting.
void sort_unique(std::vector<Candidate>& c)
{
    std::sort(c.begin(), c.end());
    c.erase(std::unique(c.begin(), c.end(), [](const Candidate& a, const Candidate& b) { return a.key == b.key; }),
            c.end());
}

std::vector<Candidate> expand(const KeySpace& space, const std::vector<MatrixKey>& frontier,
                              const std::vector<MatrixKey>& generators, const std::vector<std::uint8_t>& index,
                              unsigned threads)
{
    threads = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(frontier.size())));
    std::vector<std::vector<Candidate>> found(threads);
    auto work = [&](unsigned w) {
        const std::size_t lo = frontier.size() * w / threads;
        const std::size_t hi = frontier.size() * (w + 1) / threads;
        auto& out = found[w];
        for (std::size_t i = lo; i < hi; ++i)
            for (MatrixKey e : generators) {
                const MatrixKey x = space.multiply(frontier[i], e);
                if (index[x] == 0)
                    out.push_back({x, frontier[i], e});
            }
        sort_unique(out);
    };
    if (threads == 1) {
        work(0);
    } else {
        std::vector<std::thread> pool;
        for (unsigned w = 0; w < threads; ++w)
            pool.emplace_back(work, w);
        for (auto& t : pool)
            t.join();
    }
    std::vector<Candidate> merged;
    for (auto& f : found)
        merged.insert(merged.end(), f.begin(), f.end());
    sort_unique(merged);
    return merged;
}

template <int P>
void check_witness(const IndexAtlas& atlas, MatrixKey key, int t, StructureReport& report)
{
    using S = Gf<P>;
    const auto& space = atlas.space();
    auto fail = [&](const char* rule, std::string detail) { report.violations.push_back({key, rule, std::move(detail)}); };

    const auto w = atlas.witness(key);
    if (static_cast<int>(w.size()) != t) {
        fail("witness_length", "witness has " + std::to_string(w.size()) + " factors");
        return;
    }
    std::vector<Mat<S>> q;
    for (MatrixKey f : w)
        q.push_back(space.to_matrix<S>(f));
    const Mat<S> target = space.to_matrix<S>(key);
    for (std::size_t j = 0; j < q.size(); ++j)
        if (q[j] * q[j] != q[j])
            fail("factor_idempotent", "factor " + std::to_string(j + 1));
    Mat<S> prod = identity<S>(space.n());
    for (const auto& f : q)
        prod = prod * f;
    if (prod != target)
        fail("witness_product", "ordered product differs from key");
    if (t < 2)
        return;

    for (std::size_t j = 0; j + 1 < q.size(); ++j) {
        if (columns_in_span(q[j], q[j + 1]))
            fail("range_containment", "R(Q" + std::to_string(j + 1) + ") inside R(Q" + std::to_string(j + 2) + ")");
        if (columns_in_span(q[j + 1], q[j]))
            fail("range_containment", "R(Q" + std::to_string(j + 2) + ") inside R(Q" + std::to_string(j + 1) + ")");
    }

    Mat<S> tail = identity<S>(space.n());
    for (std::size_t j = 1; j < q.size(); ++j)
        tail = tail * q[j];
    const auto tail_index = atlas.index_of(space.key_of<P>(tail));
    if (!tail_index || *tail_index != t - 1)
        fail("tail_index", "tail index is " + (tail_index ? std::to_string(*tail_index) : std::string("unreached")));
    if (rank(tail) < rank(target))
        fail("tail_rank", "rank of tail below rank of target");

    const Index k = rank(q[0]);
    if (k == 0 || k == space.n()) {
        fail("head_form", "first factor is 0 or I");
        return;
    }
    const auto b = block_rep(q[0], extend_to_complement<S>(colspace_basis(q[0]), space.n()));
    if (b.t1 != identity<S>(k) || !is_zero_matrix(b.t3) || !is_zero_matrix(b.t4))
        fail("head_form", "first factor is not [I, B; 0, 0] over its range");
}

template <class F>
void with_field(int p, F&& f)
{
    switch (p) {
    case 2: f.template operator()<2>(); break;
    case 3: f.template operator()<3>(); break;
    case 5: f.template operator()<5>(); break;
    default: throw Error(ErrorKind::FieldUnsupported, "GF(" + std::to_string(p) + ") is not supported");
    }
}

}  // namespace

KeySpace::KeySpace(int n, int p) : n_(n), p_(p), size_(0)
{
    require_searchable(n, p);
    size_ = power(p, n * n);
}

std::vector<int> KeySpace::decode(MatrixKey key) const
{
    std::vector<int> e(static_cast<std::size_t>(n_ * n_));
    for (auto& x : e) {
        x = static_cast<int>(key % static_cast<MatrixKey>(p_));
        key /= static_cast<MatrixKey>(p_);
    }
    return e;
}

MatrixKey KeySpace::encode(const std::vector<int>& entries) const
{
    if (entries.size() != static_cast<std::size_t>(n_ * n_))
        throw Error(ErrorKind::DimensionMismatch, "expected " + std::to_string(n_ * n_) + " entries");
    MatrixKey key = 0;
    for (auto it = entries.rbegin(); it != entries.rend(); ++it)
        key = key * static_cast<MatrixKey>(p_) + static_cast<MatrixKey>(((*it % p_) + p_) % p_);
    return key;
}

MatrixKey KeySpace::multiply(MatrixKey a, MatrixKey b) const
{
    int x[9];
    int y[9];
    const int m = n_ * n_;
    for (int i = 0; i < m; ++i) {
        x[i] = static_cast<int>(a % static_cast<MatrixKey>(p_));
        a /= static_cast<MatrixKey>(p_);
        y[i] = static_cast<int>(b % static_cast<MatrixKey>(p_));
        b /= static_cast<MatrixKey>(p_);
    }
    MatrixKey key = 0;
    for (int pos = m - 1; pos >= 0; --pos) {
        const int i = pos / n_;
        const int j = pos % n_;
        int s = 0;
        for (int l = 0; l < n_; ++l)
            s += x[i * n_ + l] * y[l * n_ + j];
        key = key * static_cast<MatrixKey>(p_) + static_cast<MatrixKey>(s % p_);
    }
    return key;
}

MatrixKey KeySpace::identity() const
{
    std::vector<int> e(static_cast<std::size_t>(n_ * n_), 0);
    for (int i = 0; i < n_; ++i)
        e[static_cast<std::size_t>(i * n_ + i)] = 1;
    return encode(e);
}

void require_searchable(int n, int p)
{
    if (p != 2 && p != 3 && p != 5)
        throw Error(ErrorKind::TooLarge, "exhaustive search needs p in {2, 3, 5}, got " + std::to_string(p));
    if (n < 1 || n > 3)
        throw Error(ErrorKind::TooLarge, "exhaustive search needs 1 <= n <= 3, got " + std::to_string(n));
    if (power(p, n * n) > max_keys)
        throw Error(ErrorKind::TooLarge, "p^(n^2) exceeds " + std::to_string(max_keys));
}

std::vector<MatrixKey> enumerate_idempotents(int n, int p)
{
    const KeySpace space(n, p);
    std::vector<MatrixKey> out;
    for (std::uint64_t k = 0; k < space.size(); ++k) {
        const auto key = static_cast<MatrixKey>(k);
        if (space.multiply(key, key) == key)
            out.push_back(key);
    }
    return out;
}

const std::vector<MatrixKey>& IndexAtlas::layer(int t) const
{
    if (t < 1 || t > static_cast<int>(layers_.size()))
        throw Error(ErrorKind::BadParameter, "no layer " + std::to_string(t));
    return layers_[static_cast<std::size_t>(t - 1)];
}

std::size_t IndexAtlas::reachable_size() const
{
    std::size_t n = 0;
    for (const auto& l : layers_)
        n += l.size();
    return n;
}

std::optional<int> IndexAtlas::index_of(MatrixKey key) const
{
    if (key >= index_.size())
        throw Error(ErrorKind::BadParameter, "key out of range");
    if (index_[key] == 0)
        return std::nullopt;
    return index_[key];
}

std::vector<MatrixKey> IndexAtlas::witness(MatrixKey key) const
{
    const auto t = index_of(key);
    if (!t)
        return {};
    std::vector<MatrixKey> w(static_cast<std::size_t>(*t));
    for (int i = *t - 1; i > 0; --i) {
        w[static_cast<std::size_t>(i)] = last_factor_[key];
        key = parent_[key];
    }
    w[0] = key;
    return w;
}

std::vector<MatrixKey> IndexAtlas::cumulative(int t) const
{
    std::vector<MatrixKey> out;
    for (int s = 1; s <= std::min<int>(t, static_cast<int>(layers_.size())); ++s)
        out.insert(out.end(), layer(s).begin(), layer(s).end());
    std::sort(out.begin(), out.end());
    return out;
}

IndexAtlas build_atlas(int n, int p, int t_max, unsigned threads)
{
    if (t_max < 1 || t_max > 255)
        throw Error(ErrorKind::BadParameter, "t_max must lie in [1, 255]");
    IndexAtlas a{KeySpace(n, p)};
    a.t_max_ = t_max;
    a.index_.assign(a.space_.size(), 0);
    a.parent_.assign(a.space_.size(), 0);
    a.last_factor_.assign(a.space_.size(), 0);

    a.layers_.push_back(enumerate_idempotents(n, p));
    for (MatrixKey e : a.layers_.front()) {
        a.index_[e] = 1;
        a.parent_[e] = e;
        a.last_factor_[e] = e;
    }
    const std::vector<MatrixKey> gens = a.layers_.front();
    for (int t = 2;; ++t) {
        const auto fresh = expand(a.space_, a.layers_.back(), gens, a.index_, threads);
        if (fresh.empty()) {
            a.closed_ = true;
            break;
        }
        if (t > t_max)
            break;
        std::vector<MatrixKey> layer;
        layer.reserve(fresh.size());
        for (const auto& c : fresh) {
            a.index_[c.key] = static_cast<std::uint8_t>(t);
            a.parent_[c.key] = c.prefix;
            a.last_factor_[c.key] = c.factor;
            layer.push_back(c.key);
        }
        a.layers_.push_back(std::move(layer));
    }
    return a;
}

StructureReport verify_minimal_structure(const IndexAtlas& atlas)
{
    StructureReport report;
    const auto& space = atlas.space();

    std::vector<std::uint8_t> seen(space.size(), 0);
    for (std::size_t t = 0; t < atlas.layers().size(); ++t)
        for (MatrixKey k : atlas.layers()[t]) {
            if (seen[k])
                report.violations.push_back({k, "disjoint", "key appears in two layers"});
            seen[k] = 1;
            if (atlas.index_of(k) != static_cast<int>(t + 1))
                report.violations.push_back({k, "index_table", "index disagrees with layer"});
        }
    if (atlas.closed())
        for (std::size_t t = 0; t < atlas.layers().size(); ++t)
            for (MatrixKey x : atlas.layers()[t])
                for (MatrixKey e : atlas.idempotents())
                    if (!seen[space.multiply(x, e)])
                        report.violations.push_back({x, "closure", "product with an idempotent escapes"});

    with_field(space.p(), [&]<int P>() {
        for (std::size_t t = 0; t < atlas.layers().size(); ++t)
            for (MatrixKey k : atlas.layers()[t]) {
                check_witness<P>(atlas, k, static_cast<int>(t + 1), report);
                ++report.checked;
            }
    });
    return report;
}

StructureReport check_layer_splits(const IndexAtlas& atlas, int max_sum)
{
    StructureReport report;
    const auto& space = atlas.space();
    const int depth = static_cast<int>(atlas.layers().size());
    std::vector<std::uint8_t> hit(space.size());
    for (int s = 1; s < max_sum; ++s)
        for (int t = 1; s + t <= max_sum; ++t) {
            if (s + t > depth)
                continue;
            std::fill(hit.begin(), hit.end(), 0);
            for (MatrixKey x : atlas.layer(s))
                for (MatrixKey y : atlas.layer(t))
                    hit[space.multiply(x, y)] = 1;
            for (MatrixKey z : atlas.layer(s + t)) {
                ++report.checked;
                if (!hit[z])
                    report.violations.push_back({z, "layer_split",
                                                 "not in S_" + std::to_string(s) + " S_" + std::to_string(t)});
            }
        }
    return report;
}

}  // namespace idemfactor
