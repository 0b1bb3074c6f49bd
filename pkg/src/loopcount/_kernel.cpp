// Memoized degree-multiset recursion for counting simple graphs, evaluated
// modulo a list of 62-bit primes. The Python side reconstructs the exact
// integer by CRT.
//
// State: counts[i] = number of vertices whose residual degree is i + 1,
// trailing zeros stripped. One step removes a vertex of minimum residual
// degree r and branches over how many of its r neighbours come from each
// residual-degree class.
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <cstdint>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

namespace py = pybind11;
using u64 = std::uint64_t;
using u128 = unsigned __int128;
using Key = std::u16string;

class Engine {
  public:
    Engine(std::vector<u64> primes, std::size_t cap)
        : primes_(std::move(primes)), nres_(primes_.size()), cap_(cap) {
        if (nres_ == 0) throw std::invalid_argument("need at least one prime");
    }

    std::vector<u64> count(const std::vector<int> &counts) {
        long m = 0;
        int L = static_cast<int>(counts.size());
        Key k(counts.size(), u'\0');
        for (int i = 0; i < L; ++i) {
            if (counts[i] < 0 || counts[i] > 0xFFFF) throw std::invalid_argument("class size out of range");
            k[i] = static_cast<char16_t>(counts[i]);
            m += counts[i];
        }
        while (!k.empty() && k.back() == 0) k.pop_back();
        ensure_binom(static_cast<int>(m), static_cast<int>(k.size()));
        std::vector<u64> out(nres_);
        eval(k, out.data());
        return out;
    }

    std::size_t size() const { return index_.size(); }
    std::size_t residues() const { return nres_; }
    void clear() { index_.clear(); pool_.clear(); }

  private:
    std::vector<u64> primes_;
    std::size_t nres_;
    std::size_t cap_;
    int rows_ = -1, cols_ = -1;
    std::vector<u64> binom_;  // [r][a][b], a <= rows_, b <= cols_
    std::unordered_map<Key, std::size_t> index_;
    std::vector<u64> pool_;

    u64 mulmod(u64 a, u64 b, u64 p) const { return static_cast<u64>(static_cast<u128>(a) * b % p); }

    u64 binom(std::size_t r, int a, int b) const {
        return binom_[(r * (rows_ + 1) + a) * (cols_ + 1) + b];
    }

    void ensure_binom(int rows, int cols) {
        if (rows <= rows_ && cols <= cols_) return;
        rows_ = std::max(rows, rows_);
        cols_ = std::max(cols, cols_);
        binom_.assign(nres_ * (rows_ + 1) * (cols_ + 1), 0);
        for (std::size_t r = 0; r < nres_; ++r) {
            u64 p = primes_[r];
            auto at = [&](int a, int b) -> u64 & { return binom_[(r * (rows_ + 1) + a) * (cols_ + 1) + b]; };
            for (int a = 0; a <= rows_; ++a) {
                at(a, 0) = 1 % p;
                for (int b = 1; b <= cols_ && b <= a; ++b) at(a, b) = (at(a - 1, b - 1) + at(a - 1, b)) % p;
            }
        }
    }

    struct Frame {
        std::vector<int> idx, caps, suf, nw;
        std::vector<u64> w, sub;
    };

    void eval(const Key &key, u64 *out) {
        if (key.empty()) {
            for (std::size_t r = 0; r < nres_; ++r) out[r] = 1 % primes_[r];
            return;
        }
        auto it = index_.find(key);
        if (it != index_.end()) {
            for (std::size_t r = 0; r < nres_; ++r) out[r] = pool_[it->second + r];
            return;
        }
        std::vector<u64> res(nres_, 0);
        int L = static_cast<int>(key.size());
        long m = 0, stubs = 0;
        for (int i = 0; i < L; ++i) {
            m += key[i];
            stubs += static_cast<long>(key[i]) * (i + 1);
        }
        // max degree L must fit among the other m - 1 vertices; odd stub total is infeasible
        if (L <= m - 1 && stubs % 2 == 0) {
            Frame f;
            f.nw.resize(L);
            for (int i = 0; i < L; ++i) f.nw[i] = key[i];
            int j = 0;
            while (f.nw[j] == 0) ++j;
            int top = j + 1;
            f.nw[j] -= 1;
            for (int i = 0; i < L; ++i)
                if (f.nw[i]) {
                    f.idx.push_back(i);
                    f.caps.push_back(f.nw[i]);
                }
            int K = static_cast<int>(f.idx.size());
            f.suf.assign(K + 1, 0);
            for (int t = K - 1; t >= 0; --t) f.suf[t] = f.suf[t + 1] + f.caps[t];
            if (f.suf[0] >= top) {
                f.w.assign((K + 1) * nres_, 0);
                for (std::size_t r = 0; r < nres_; ++r) f.w[r] = 1 % primes_[r];
                f.sub.resize(nres_);
                branch(f, 0, top, res);
            }
        }
        if (index_.size() >= cap_) throw std::length_error("memo entry cap exceeded");
        std::size_t pos = pool_.size();
        pool_.insert(pool_.end(), res.begin(), res.end());
        index_.emplace(key, pos);
        for (std::size_t r = 0; r < nres_; ++r) out[r] = res[r];
    }

    void branch(Frame &f, int t, int need, std::vector<u64> &res) {
        int K = static_cast<int>(f.idx.size());
        if (t == K) {
            int e = static_cast<int>(f.nw.size());
            while (e && f.nw[e - 1] == 0) --e;
            Key k(e, u'\0');
            for (int i = 0; i < e; ++i) k[i] = static_cast<char16_t>(f.nw[i]);
            eval(k, f.sub.data());
            for (std::size_t r = 0; r < nres_; ++r)
                res[r] = (res[r] + mulmod(f.w[t * nres_ + r], f.sub[r], primes_[r])) % primes_[r];
            return;
        }
        int i = f.idx[t], cp = f.caps[t];
        int lo = need - f.suf[t + 1];
        if (lo < 0) lo = 0;
        int hi = cp < need ? cp : need;
        for (int k = lo; k <= hi; ++k) {
            // k neighbours drop from residual degree i + 1 to i (degree 0 leaves the state)
            f.nw[i] -= k;
            if (i) f.nw[i - 1] += k;
            for (std::size_t r = 0; r < nres_; ++r)
                f.w[(t + 1) * nres_ + r] = mulmod(f.w[t * nres_ + r], binom(r, cp, k), primes_[r]);
            branch(f, t + 1, need - k, res);
            f.nw[i] += k;
            if (i) f.nw[i - 1] -= k;
        }
    }
};

PYBIND11_MODULE(_kernel, m) {
    m.doc() = "Native memoized degree-multiset counter (residues modulo primes).";
    py::class_<Engine>(m, "Engine")
        .def(py::init<std::vector<u64>, std::size_t>(), py::arg("primes"), py::arg("cap"))
        .def("count", &Engine::count)
        .def("clear", &Engine::clear)
        .def_property_readonly("residues", &Engine::residues)
        .def("__len__", &Engine::size);
}
