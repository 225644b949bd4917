#include "flawsim/flaw_set.hpp"

#include <algorithm>
#include <bit>
#include <stdexcept>

namespace flawsim {

FlawSet::FlawSet(std::size_t universe) : universe_(universe), words_((universe + 63) / 64, 0) {}

FlawSet::FlawSet(std::size_t universe, std::initializer_list<FlawId> members) : FlawSet(universe) {
  for (FlawId f : members) insert(f);
}

FlawSet FlawSet::from_indices(std::size_t universe, const std::vector<FlawId>& members) {
  FlawSet s(universe);
  for (FlawId f : members) s.insert(f);
  return s;
}

void FlawSet::insert(FlawId f) {
  if (f >= universe_) throw std::out_of_range("flaw index out of range");
  words_[f / 64] |= std::uint64_t{1} << (f % 64);
}

void FlawSet::erase(FlawId f) {
  if (f >= universe_) return;
  words_[f / 64] &= ~(std::uint64_t{1} << (f % 64));
}

bool FlawSet::contains(FlawId f) const noexcept {
  return f < universe_ && ((words_[f / 64] >> (f % 64)) & 1U) != 0;
}

std::size_t FlawSet::count() const noexcept {
  std::size_t n = 0;
  for (auto w : words_) n += static_cast<std::size_t>(std::popcount(w));
  return n;
}

bool FlawSet::empty() const noexcept {
  return std::all_of(words_.begin(), words_.end(), [](auto w) { return w == 0; });
}

void FlawSet::clear() noexcept { std::fill(words_.begin(), words_.end(), 0); }

bool FlawSet::is_subset_of(const FlawSet& other) const noexcept {
  for (std::size_t i = 0; i < words_.size(); ++i) {
    const std::uint64_t o = i < other.words_.size() ? other.words_[i] : 0;
    if ((words_[i] & ~o) != 0) return false;
  }
  return true;
}

bool FlawSet::intersects(const FlawSet& other) const noexcept {
  const std::size_t n = std::min(words_.size(), other.words_.size());
  for (std::size_t i = 0; i < n; ++i) {
    if ((words_[i] & other.words_[i]) != 0) return true;
  }
  return false;
}

FlawSet& FlawSet::operator|=(const FlawSet& other) {
  if (other.universe_ != universe_) throw std::invalid_argument("flaw set universes differ");
  for (std::size_t i = 0; i < words_.size(); ++i) words_[i] |= other.words_[i];
  return *this;
}

FlawSet& FlawSet::operator&=(const FlawSet& other) {
  if (other.universe_ != universe_) throw std::invalid_argument("flaw set universes differ");
  for (std::size_t i = 0; i < words_.size(); ++i) words_[i] &= other.words_[i];
  return *this;
}

FlawSet& FlawSet::operator-=(const FlawSet& other) {
  if (other.universe_ != universe_) throw std::invalid_argument("flaw set universes differ");
  for (std::size_t i = 0; i < words_.size(); ++i) words_[i] &= ~other.words_[i];
  return *this;
}

bool FlawSet::operator<(const FlawSet& other) const noexcept {
  if (universe_ != other.universe_) return universe_ < other.universe_;
  return std::lexicographical_compare(words_.begin(), words_.end(), other.words_.begin(), other.words_.end());
}

std::vector<FlawId> FlawSet::members() const {
  std::vector<FlawId> out;
  out.reserve(count());
  for_each([&](FlawId f) { out.push_back(f); });
  return out;
}

std::string FlawSet::to_string(const std::vector<std::string>* names) const {
  std::string out = "{";
  bool first = true;
  for_each([&](FlawId f) {
    if (!first) out += ",";
    first = false;
    if (names != nullptr && f < names->size()) {
      out += (*names)[f];
    } else {
      out += "f" + std::to_string(f + 1);
    }
  });
  return out + "}";
}

}  // namespace flawsim
