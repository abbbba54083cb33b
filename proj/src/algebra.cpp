#include "diagtor/algebra.hpp"

#include "diagtor/errors.hpp"

#include <openssl/evp.h>

#include <json.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <thread>

namespace diagtor {

std::string AlgebraId::to_string() const { return diagtor::to_string(family) + "-" + std::to_string(n); }

MultiplicationTable::MultiplicationTable(AlgebraId id, std::uint32_t size, std::vector<Product> entries)
    : id_(id), size_(size), entries_(std::move(entries)) {
  if (entries_.size() != static_cast<std::size_t>(size) * size)
    throw DimensionMismatch("multiplication table must have size^2 entries");
}

std::string sha256_hex(const std::string& data) {
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(data.data(), data.size(), md, &len, EVP_sha256(), nullptr) != 1)
    throw Error("SHA-256 digest failed");
  static const char* hex = "0123456789abcdef";
  std::string out;
  for (unsigned i = 0; i < len; ++i) {
    out.push_back(hex[md[i] >> 4]);
    out.push_back(hex[md[i] & 15]);
  }
  return out;
}

Algebra::Algebra(AlgebraId id) {
  if (id.n < 1) throw InvalidArgument("algebra needs n >= 1");
  auto b = std::make_shared<Basis>();
  b->id = id;
  b->diagrams = enumerate_basis(id.family, id.n);
  b->full.resize(b->diagrams.size());
  std::string canon = to_string(id.family) + ":" + std::to_string(id.n) + "\n";
  const SetPartition one = SetPartition::identity(id.n);
  bool found = false;
  for (std::uint32_t i = 0; i < b->diagrams.size(); ++i) {
    const auto& d = b->diagrams[i];
    b->index.emplace(d.key(), i);
    if (propagating_number(d) == id.n) {
      b->full[i] = 1;
      b->full_indices.push_back(i);
    }
    if (d == one) {
      b->identity = i;
      found = true;
    }
    canon += d.to_string();
    canon += '\n';
  }
  if (!found) throw VerificationFailure("basis of " + id.to_string() + " lacks the identity");
  b->digest = sha256_hex(canon);
  basis_ = std::move(b);
}

std::optional<std::uint32_t> Algebra::index_of(const SetPartition& d) const {
  if (d.n() != basis_->id.n) return std::nullopt;
  auto it = basis_->index.find(d.key());
  if (it == basis_->index.end()) return std::nullopt;
  return it->second;
}

Product Algebra::product(std::uint32_t i, std::uint32_t j) const {
  if (table_) return (*table_)(i, j);
  auto c = compose(diagram(i), diagram(j));
  auto k = index_of(c.underlying);
  if (!k) throw VerificationFailure("product leaves the basis of " + id().to_string());
  if (is_group_algebra(id().family) && c.loops != 0)
    throw VerificationFailure("group algebra product produced loops");
  return {*k, static_cast<std::uint8_t>(c.loops)};
}

Algebra Algebra::with_table(std::shared_ptr<const MultiplicationTable> table) const {
  if (table && (!(table->id() == id()) || table->size() != dim()))
    throw DimensionMismatch("table does not belong to " + id().to_string());
  Algebra out = *this;
  out.table_ = std::move(table);
  return out;
}

AlgebraElement AlgebraElement::basis(const AlgebraId& id, std::uint32_t i, const Scalar& c) {
  AlgebraElement x{id, {}};
  if (c != 0) x.coeffs.emplace(i, c);
  return x;
}

void add_term(AlgebraElement& x, std::uint32_t i, const Scalar& c, const CoefficientRing& ring) {
  Scalar v = ring.normalize(c);
  if (v == 0) return;
  auto [it, inserted] = x.coeffs.emplace(i, v);
  if (inserted) return;
  it->second = ring.add(it->second, v);
  if (it->second == 0) x.coeffs.erase(it);
}

namespace {
void check_same(const AlgebraId& a, const AlgebraId& b) {
  if (!(a == b)) throw DimensionMismatch("elements of different algebras: " + a.to_string() + ", " + b.to_string());
}
}  // namespace

AlgebraElement add(const AlgebraElement& x, const AlgebraElement& y, const CoefficientRing& ring) {
  check_same(x.algebra, y.algebra);
  AlgebraElement out = x;
  for (const auto& [i, c] : y.coeffs) add_term(out, i, c, ring);
  return out;
}

AlgebraElement scale(const AlgebraElement& x, const Scalar& c, const CoefficientRing& ring) {
  AlgebraElement out{x.algebra, {}};
  for (const auto& [i, v] : x.coeffs) add_term(out, i, ring.mul(v, c), ring);
  return out;
}

AlgebraElement multiply(const Algebra& algebra, const AlgebraElement& x, const AlgebraElement& y,
                        const CoefficientRing& ring) {
  check_same(x.algebra, algebra.id());
  check_same(y.algebra, algebra.id());
  AlgebraElement out{algebra.id(), {}};
  std::vector<Scalar> dpow(algebra.max_loops() + 1);
  for (unsigned e = 0; e < dpow.size(); ++e) dpow[e] = ring.delta_power(e);
  for (const auto& [i, a] : x.coeffs) {
    for (const auto& [j, b] : y.coeffs) {
      Product p = algebra.product(i, j);
      if (dpow[p.loops] == 0) continue;
      add_term(out, p.index, a * b * dpow[p.loops], ring);
    }
  }
  return out;
}

Scalar augmentation(const Algebra& algebra, const AlgebraElement& x, const CoefficientRing& ring) {
  check_same(x.algebra, algebra.id());
  Scalar s = 0;
  for (const auto& [i, c] : x.coeffs)
    if (algebra.is_full_propagation(i)) s += c;
  return ring.normalize(s);
}

AlgebraId quotient_target(const AlgebraId& source) {
  switch (source.family) {
    case Family::Partition:
    case Family::Brauer: return {Family::GroupAlgebraSymmetric, source.n};
    case Family::JonesAnnular: return {Family::GroupAlgebraCyclic, source.n};
    case Family::GroupAlgebraSymmetric:
    case Family::GroupAlgebraCyclic: return source;
    case Family::TemperleyLieb: break;
  }
  throw InvalidArgument("no group quotient for " + source.to_string());
}

std::optional<std::uint32_t> quotient_index(const Algebra& source, const Algebra& target, std::uint32_t i) {
  if (!source.is_full_propagation(i)) return std::nullopt;
  auto k = target.index_of(source.diagram(i));
  if (!k) throw VerificationFailure("full-propagation diagram outside " + target.id().to_string());
  return k;
}

AlgebraElement quotient_map(const Algebra& source, const Algebra& target, const AlgebraElement& x,
                            const CoefficientRing& ring) {
  check_same(x.algebra, source.id());
  if (!(quotient_target(source.id()) == target.id()))
    throw DimensionMismatch("quotient target of " + source.id().to_string() + " is not " + target.id().to_string());
  AlgebraElement out{target.id(), {}};
  for (const auto& [i, c] : x.coeffs)
    if (auto k = quotient_index(source, target, i)) add_term(out, *k, c, ring);
  return out;
}

std::shared_ptr<const MultiplicationTable> build_table(const Algebra& algebra, unsigned threads, std::size_t budget) {
  const std::uint32_t d = algebra.dim();
  const std::size_t total = static_cast<std::size_t>(d) * d;
  if (total > budget) throw BudgetExceeded("multiplication table of " + algebra.id().to_string(), total, budget);
  Algebra bare = algebra.with_table(nullptr);
  std::vector<Product> entries(total);
  threads = std::max(1u, std::min(threads, d));
  std::vector<std::exception_ptr> errors(threads);
  auto work = [&](unsigned t) {
    try {
      for (std::uint32_t i = t; i < d; i += threads)
        for (std::uint32_t j = 0; j < d; ++j) entries[static_cast<std::size_t>(i) * d + j] = bare.product(i, j);
    } catch (...) {
      errors[t] = std::current_exception();
    }
  };
  if (threads == 1) {
    work(0);
  } else {
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(work, t);
    for (auto& th : pool) th.join();
  }
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
  return std::make_shared<const MultiplicationTable>(algebra.id(), d, std::move(entries));
}

std::string element_to_string(const Algebra& algebra, const AlgebraElement& x, const CoefficientRing& ring) {
  if (x.is_zero()) return "0";
  std::string out;
  for (const auto& [i, c] : x.coeffs) {
    if (!out.empty()) out += " + ";
    out += ring.to_string(c) + "*" + algebra.diagram(i).to_string();
  }
  return out;
}

// ---- table cache

namespace {

constexpr char kMagic[4] = {'D', 'T', 'T', 'B'};

void put_u32(std::string& buf, std::uint32_t v) {
  for (int b = 0; b < 4; ++b) buf.push_back(static_cast<char>((v >> (8 * b)) & 0xff));
}

std::uint32_t get_u32(const unsigned char* p) {
  return std::uint32_t(p[0]) | (std::uint32_t(p[1]) << 8) | (std::uint32_t(p[2]) << 16) | (std::uint32_t(p[3]) << 24);
}

constexpr std::size_t kHeaderSize = 4 + 4 * 4 + 64;
constexpr std::size_t kEntrySize = 13;

}  // namespace

void save_table(const Algebra& algebra, const MultiplicationTable& table, const std::string& path) {
  if (!(table.id() == algebra.id()) || table.size() != algebra.dim())
    throw DimensionMismatch("table does not belong to " + algebra.id().to_string());
  std::filesystem::path p(path);
  if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path());
  std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot write table cache " + tmp);
    std::string buf(kMagic, 4);
    put_u32(buf, kTableFormatVersion);
    put_u32(buf, static_cast<std::uint32_t>(algebra.id().family));
    put_u32(buf, algebra.id().n);
    put_u32(buf, algebra.dim());
    buf += algebra.digest();
    const std::uint32_t d = table.size();
    for (std::uint32_t i = 0; i < d; ++i) {
      for (std::uint32_t j = 0; j < d; ++j) {
        const Product& e = table(i, j);
        put_u32(buf, i);
        put_u32(buf, j);
        put_u32(buf, e.index);
        buf.push_back(static_cast<char>(e.loops));
      }
      if (buf.size() > (1u << 22)) {
        out.write(buf.data(), static_cast<std::streamsize>(buf.size()));
        buf.clear();
      }
    }
    out.write(buf.data(), static_cast<std::streamsize>(buf.size()));
    if (!out) throw Error("failed writing table cache " + tmp);
  }
  std::filesystem::rename(tmp, path);
  nlohmann::json side = {{"format_version", kTableFormatVersion},
                         {"family", to_string(algebra.id().family)},
                         {"n", algebra.id().n},
                         {"basis_count", algebra.dim()},
                         {"basis_digest", algebra.digest()},
                         {"file_digest", sha256_hex([&] {
                            std::ifstream in(path, std::ios::binary);
                            std::ostringstream ss;
                            ss << in.rdbuf();
                            return ss.str();
                          }())}};
  std::ofstream(path + ".json") << side.dump(2) << "\n";
}

std::shared_ptr<const MultiplicationTable> load_table(const Algebra& algebra, const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot read table cache " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  const std::string data = ss.str();
  std::ifstream sin(path + ".json");
  if (!sin) throw VerificationFailure("table cache sidecar missing for " + path);
  nlohmann::json side;
  try {
    side = nlohmann::json::parse(sin);
  } catch (const nlohmann::json::exception& e) {
    throw VerificationFailure("table cache sidecar unreadable: " + std::string(e.what()));
  }
  if (side.value("file_digest", std::string()) != sha256_hex(data))
    throw VerificationFailure("table cache file digest mismatch: " + path);
  if (side.value("basis_digest", std::string()) != algebra.digest())
    throw VerificationFailure("table cache sidecar basis digest mismatch: " + path);
  if (data.size() < kHeaderSize || data.compare(0, 4, kMagic, 4) != 0)
    throw VerificationFailure("not a table cache file: " + path);
  auto raw = reinterpret_cast<const unsigned char*>(data.data());
  if (get_u32(raw + 4) != kTableFormatVersion) throw VerificationFailure("table cache format version mismatch");
  if (get_u32(raw + 8) != static_cast<std::uint32_t>(algebra.id().family) || get_u32(raw + 12) != algebra.id().n)
    throw VerificationFailure("table cache is for a different algebra");
  const std::uint32_t d = get_u32(raw + 16);
  if (d != algebra.dim()) throw VerificationFailure("table cache basis count mismatch");
  if (data.compare(20, 64, algebra.digest()) != 0) throw VerificationFailure("table cache basis digest mismatch");
  const std::size_t total = static_cast<std::size_t>(d) * d;
  if (data.size() != kHeaderSize + total * kEntrySize) throw VerificationFailure("table cache truncated");
  std::vector<Product> entries(total);
  const unsigned char* p = raw + kHeaderSize;
  for (std::size_t idx = 0; idx < total; ++idx, p += kEntrySize) {
    std::uint32_t i = get_u32(p), j = get_u32(p + 4), k = get_u32(p + 8);
    if (static_cast<std::size_t>(i) * d + j != idx || k >= d)
      throw VerificationFailure("table cache entry out of order or out of range");
    entries[idx] = {k, p[12]};
  }
  return std::make_shared<const MultiplicationTable>(algebra.id(), d, std::move(entries));
}

std::string default_cache_dir() {
  const char* env = std::getenv("DIAGTOR_CACHE_DIR");
  return env ? std::string(env) : std::string();
}

std::string table_cache_path(const AlgebraId& id, const std::string& dir) {
  return (std::filesystem::path(dir) / (id.to_string() + ".table")).string();
}

Algebra with_cached_table(const Algebra& algebra, const std::string& dir, unsigned threads, std::size_t budget) {
  if (!dir.empty()) {
    const std::string path = table_cache_path(algebra.id(), dir);
    if (std::filesystem::exists(path)) {
      try {
        return algebra.with_table(load_table(algebra, path));
      } catch (const VerificationFailure&) {
        // stale or corrupt; rebuild below
      }
    }
    auto table = build_table(algebra, threads, budget);
    save_table(algebra, *table, path);
    return algebra.with_table(table);
  }
  return algebra.with_table(build_table(algebra, threads, budget));
}

}  // namespace diagtor
