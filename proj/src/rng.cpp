#include "lookahead/rng.hpp"

namespace lookahead {

std::uint64_t mix64(std::uint64_t x) {
  // splitmix64 finalizer
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

RngStream::RngStream(std::uint64_t seed, StreamId id) : seed_(seed), id_(id) {
  std::uint64_t k = mix64(seed);
  k = mix64(k ^ id.episode);
  k = mix64(k ^ ((static_cast<std::uint64_t>(id.step) << 32) |
                 static_cast<std::uint64_t>(id.purpose)));
  key_ = mix64(k ^ id.lane);
}

RngStream::result_type RngStream::operator()() {
  return mix64(key_ + 0xd1b54a32d192ed03ULL * ++counter_);
}

double RngStream::uniform() {
  return static_cast<double>((*this)() >> 11) * 0x1.0p-53;
}

}  // namespace lookahead
