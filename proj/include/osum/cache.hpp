#pragma once

// Content-addressed result cache: entries are keyed by a stable hash of the
// problem text plus the full configuration, written atomically
// (write-to-temp then rename).  Corrupt or unreadable entries are ignored
// and recomputed.  A cache hit replays the stored bytes unchanged, so it can
// only affect timing, never results.

#include <unistd.h>

#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>

namespace osum {

inline std::string content_key(const std::string& data) {
  // FNV-1a, 128 bits via two seeds; stable across platforms and runs
  auto fnv = [&](uint64_t h) {
    for (unsigned char c : data) {
      h ^= c;
      h *= 0x100000001b3ULL;
    }
    return h;
  };
  uint64_t a = fnv(0xcbf29ce484222325ULL);
  uint64_t b = fnv(0x84222325cbf29ce4ULL);
  char buf[33];
  std::snprintf(buf, sizeof buf, "%016llx%016llx", (unsigned long long)a,
                (unsigned long long)b);
  return buf;
}

class Cache {
 public:
  Cache() = default;
  explicit Cache(std::string dir) : dir_(std::move(dir)), enabled_(!dir_.empty()) {}

  bool enabled() const { return enabled_; }

  std::optional<std::string> get(const std::string& key) const {
    if (!enabled_) return std::nullopt;
    std::ifstream in(path(key), std::ios::binary);
    if (!in) return std::nullopt;
    std::string magic;
    if (!std::getline(in, magic) || magic != "osum-cache-1") return std::nullopt;
    std::string lenline;
    if (!std::getline(in, lenline)) return std::nullopt;
    size_t len = 0;
    try {
      len = std::stoul(lenline);
    } catch (...) {
      return std::nullopt;
    }
    std::string payload(len, '\0');
    in.read(payload.data(), (std::streamsize)len);
    if ((size_t)in.gcount() != len) return std::nullopt;
    return payload;
  }

  void put(const std::string& key, const std::string& payload) const {
    if (!enabled_) return;
    std::error_code ec;
    std::filesystem::create_directories(dir_, ec);
    std::string tmp = path(key) + ".tmp." + std::to_string(::getpid());
    {
      std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
      if (!out) return;  // caching is best-effort
      out << "osum-cache-1\n" << payload.size() << "\n" << payload;
      if (!out) {
        std::filesystem::remove(tmp, ec);
        return;
      }
    }
    std::filesystem::rename(tmp, path(key), ec);
    if (ec) std::filesystem::remove(tmp, ec);
  }

 private:
  std::string path(const std::string& key) const { return dir_ + "/" + key + ".json"; }
  std::string dir_;
  bool enabled_ = false;
};

}  // namespace osum
