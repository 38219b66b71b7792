#pragma once

#include <fcntl.h>
#include <sys/file.h>
#include <unistd.h>

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <map>
#include <memory>
#include <mutex>
#include <shared_mutex>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "ofplus/deformation.hpp"
#include "ofplus/errors.hpp"
#include "ofplus/matrix.hpp"
#include "ofplus/partitions.hpp"

namespace ofplus {

/// Longest word the Weingarten machinery accepts (Catalan(6) = 132 pairings).
inline constexpr int kMaxWordLength = 12;

inline void check_word_length(int length) {
  if (length > kMaxWordLength)
    throw BudgetExceeded("word length " + std::to_string(length) + " exceeds the ceiling of " +
                         std::to_string(kMaxWordLength));
}

/// NC2(k) in canonical order, computed once per k.
inline const std::vector<Pairing>& nc2(int k) {
  static std::mutex mu;
  static std::map<int, std::vector<Pairing>> memo;
  std::lock_guard lock(mu);
  auto it = memo.find(k);
  if (it == memo.end()) it = memo.emplace(k, enumerate_nc2(k)).first;
  return it->second;
}

/// delta_pi^F(i) = prod over (s,t) in pi of F_(i(t), i(s)).
template <class T>
T delta(const FMatrix<T>& f, const Pairing& p, const std::vector<int>& idx) {
  if (static_cast<int>(idx.size()) != p.k) throw DomainError("multi-index length differs from pairing size");
  for (int x : idx)
    if (x < 1 || x > f.n()) throw DomainError("multi-index entry out of range");
  T out(1);
  for (auto [s, t] : p.pairs) {
    const T& e = f.at(idx[t - 1], idx[s - 1]);
    if (is_zero(e)) return T(0);
    out = out * e;
  }
  return out;
}

/// G(pi, sigma) = c^(L/2 + |pi v sigma|) N_F^|pi v sigma|.
template <class T>
Matrix<T> gram_closed(int length, const FMatrix<T>& f) {
  if (length < 2 || length % 2 != 0) throw DomainError("Gram matrix needs an even length >= 2");
  const auto& order = nc2(length);
  std::vector<T> nf_pow(static_cast<std::size_t>(length / 2) + 1, T(1));
  for (std::size_t e = 1; e < nf_pow.size(); ++e) nf_pow[e] = nf_pow[e - 1] * T(f.quantum_dimension());
  Matrix<T> g(order.size(), order.size());
  for (std::size_t a = 0; a < order.size(); ++a)
    for (std::size_t b = 0; b < order.size(); ++b) {
      const int blocks = join_block_count(order[a], order[b]);
      const int sign = (f.c() == -1 && (length / 2 + blocks) % 2 != 0) ? -1 : 1;
      g(a, b) = T(sign) * nf_pow[static_cast<std::size_t>(blocks)];
    }
  return g;
}

/// <xi_pi, xi_sigma> summed over every multi-index; the closed form's oracle.
template <class T>
Matrix<T> gram_bruteforce(int length, const FMatrix<T>& f, std::uint64_t budget = 10'000'000) {
  if (length < 2 || length % 2 != 0) throw DomainError("Gram matrix needs an even length >= 2");
  std::uint64_t tuples = 1;
  for (int s = 0; s < length; ++s) {
    tuples *= static_cast<std::uint64_t>(f.n());
    if (tuples > budget) throw BudgetExceeded("N^L exceeds the brute-force budget");
  }
  const auto& order = nc2(length);
  const std::size_t m = order.size();
  Matrix<T> g(m, m);
  std::vector<int> idx(static_cast<std::size_t>(length), 1);
  std::vector<std::pair<std::size_t, T>> live;
  for (std::uint64_t step = 0; step < tuples; ++step) {
    live.clear();
    for (std::size_t a = 0; a < m; ++a) {
      T d = delta(f, order[a], idx);
      if (!is_zero(d)) live.emplace_back(a, std::move(d));
    }
    for (const auto& [a, da] : live) {
      const T ca = conj(da);
      for (const auto& [b, db] : live) g(a, b) += ca * db;
    }
    for (int pos = length - 1; pos >= 0; --pos) {
      if (++idx[pos] <= f.n()) break;
      idx[pos] = 1;
    }
  }
  return g;
}

template <class T>
struct WeingartenTable {
  int length = 0;
  std::string f_key;
  std::vector<Pairing> order;
  Matrix<T> gram;
  Matrix<T> wg;
};

/// Builds G by the closed form and inverts it exactly (or at working precision).
template <class T>
WeingartenTable<T> weingarten(int length, const FMatrix<T>& f) {
  check_word_length(length);
  WeingartenTable<T> t;
  t.length = length;
  t.f_key = f.fingerprint();
  t.order = nc2(length);
  t.gram = gram_closed(length, f);
  t.wg = inverse(t.gram);
  return t;
}

// ---------------------------------------------------------------------------
// Persistence. One text file per (L, F): a versioned header, the exact entries
// of F, the pairing order, both grids as "p/q" strings, and an end marker
// so that a truncated file is rejected.

inline constexpr const char* kTableHeader = "ofplus-weingarten v1";

inline std::string fnv1a_hex(const std::string& s) {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char ch : s) {
    h ^= ch;
    h *= 1099511628211ULL;
  }
  std::ostringstream os;
  os << std::hex;
  os.width(16);
  os.fill('0');
  os << h;
  return os.str();
}

inline std::string table_file_name(int length, const std::string& f_key) {
  return "wg-L" + std::to_string(length) + "-" + fnv1a_hex(f_key) + ".txt";
}

inline std::string serialize_table(const WeingartenTable<Exact>& t) {
  std::ostringstream os;
  os << kTableHeader << "\n";
  os << "L " << t.length << "\n";
  os << "F " << t.f_key << "\n";
  os << "order " << t.order.size() << "\n";
  for (const auto& p : t.order) os << to_string(p) << "\n";
  for (const auto* grid : {&t.gram, &t.wg}) {
    os << (grid == &t.gram ? "gram" : "wg") << "\n";
    for (std::size_t r = 0; r < grid->rows(); ++r) {
      for (std::size_t c = 0; c < grid->cols(); ++c) os << (c ? " " : "") << to_string((*grid)(r, c));
      os << "\n";
    }
  }
  os << "end\n";
  return os.str();
}

/// Parses a cache file; nullopt when the header, L or F do not match exactly.
inline std::optional<WeingartenTable<Exact>> parse_table(const std::string& text, int length,
                                                          const std::string& f_key) {
  std::istringstream is(text);
  std::string line;
  auto next = [&]() -> bool { return static_cast<bool>(std::getline(is, line)); };
  if (!next() || line != kTableHeader) return std::nullopt;
  if (!next() || line != "L " + std::to_string(length)) return std::nullopt;
  if (!next() || line != "F " + f_key) return std::nullopt;
  if (!next() || line.rfind("order ", 0) != 0) return std::nullopt;
  const auto& expected = nc2(length);
  std::size_t m = 0;
  try {
    m = std::stoul(line.substr(6));
  } catch (const std::exception&) {
    return std::nullopt;
  }
  if (m != expected.size()) return std::nullopt;
  for (std::size_t a = 0; a < m; ++a)
    if (!next() || line != to_string(expected[a])) return std::nullopt;
  WeingartenTable<Exact> t;
  t.length = length;
  t.f_key = f_key;
  t.order = expected;
  for (auto* grid : {&t.gram, &t.wg}) {
    if (!next() || line != (grid == &t.gram ? "gram" : "wg")) return std::nullopt;
    *grid = Matrix<Exact>(m, m);
    for (std::size_t r = 0; r < m; ++r) {
      if (!next()) return std::nullopt;
      std::istringstream row(line);
      std::string tok;
      for (std::size_t c = 0; c < m; ++c) {
        if (!(row >> tok)) return std::nullopt;
        try {
          (*grid)(r, c) = parse_scalar<Rational>(tok);
        } catch (const Error&) {
          return std::nullopt;
        }
      }
      if (row >> tok) return std::nullopt;
    }
  }
  if (!next() || line != "end") return std::nullopt;
  return t;
}

/// Directory of cache files shared between processes. Writers serialise on an
/// flock()ed lock file and publish with an atomic rename.
class DiskTableStore {
 public:
  explicit DiskTableStore(std::filesystem::path dir) : dir_(std::move(dir)) {
    std::filesystem::create_directories(dir_);
  }

  const std::filesystem::path& dir() const { return dir_; }

  std::optional<WeingartenTable<Exact>> load(int length, const std::string& f_key) const {
    std::ifstream in(dir_ / table_file_name(length, f_key));
    if (!in) return std::nullopt;
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_table(buf.str(), length, f_key);
  }

  void store(const WeingartenTable<Exact>& t) const {
    const auto target = dir_ / table_file_name(t.length, t.f_key);
    const auto lock_path = dir_ / ".lock";
    int fd = ::open(lock_path.c_str(), O_CREAT | O_RDWR, 0644);
    if (fd < 0) throw Error("cannot open cache lock file " + lock_path.string());
    ::flock(fd, LOCK_EX);
    try {
      if (!std::filesystem::exists(target)) {
        auto tmp = target;
        tmp += ".tmp" + std::to_string(::getpid());
        {
          std::ofstream out(tmp);
          out << serialize_table(t);
          if (!out) throw Error("cannot write cache file " + tmp.string());
        }
        std::filesystem::rename(tmp, target);
      }
    } catch (...) {
      ::flock(fd, LOCK_UN);
      ::close(fd);
      throw;
    }
    ::flock(fd, LOCK_UN);
    ::close(fd);
  }

 private:
  std::filesystem::path dir_;
};

/// Tables keyed by (L, F fingerprint). Concurrent readers; one writer at a time.
/// With an attached DiskTableStore (exact scalars only) tables persist across runs.
template <class T>
class WeingartenCache {
 public:
  using Table = WeingartenTable<T>;

  WeingartenCache() = default;
  explicit WeingartenCache(std::shared_ptr<const DiskTableStore> disk) : disk_(std::move(disk)) {}

  std::shared_ptr<const Table> get(int length, const FMatrix<T>& f) {
    const auto key = std::make_pair(length, f.fingerprint());
    {
      std::shared_lock lock(mu_);
      if (auto it = tables_.find(key); it != tables_.end()) return it->second;
    }
    std::unique_lock lock(mu_);
    if (auto it = tables_.find(key); it != tables_.end()) return it->second;
    std::shared_ptr<const Table> table;
    if constexpr (std::is_same_v<T, Exact>) {
      if (disk_) {
        if (auto loaded = disk_->load(length, key.second)) {
          table = std::make_shared<const Table>(std::move(*loaded));
          ++disk_hits_;
        }
      }
    }
    if (!table) {
      table = std::make_shared<const Table>(weingarten(length, f));
      ++computed_;
      if constexpr (std::is_same_v<T, Exact>)
        if (disk_) disk_->store(*table);
    }
    tables_.emplace(key, table);
    return table;
  }

  std::size_t computed() const { return computed_; }
  std::size_t disk_hits() const { return disk_hits_; }

 private:
  std::shared_ptr<const DiskTableStore> disk_;
  mutable std::shared_mutex mu_;
  std::map<std::pair<int, std::string>, std::shared_ptr<const Table>> tables_;
  std::size_t computed_ = 0;
  std::size_t disk_hits_ = 0;
};

}  // namespace ofplus
