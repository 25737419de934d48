#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "aiecon/common.hpp"

namespace aiecon {

enum class Variant : std::uint8_t { Communication, Teaching };
enum class Role : std::uint8_t { Plain, Teacher, Student };

std::string_view to_string(Variant v);
std::string_view to_string(Role r);

// An agent's naming of the four materials, indexed Wood, Stone, Iron, Soil.
// Letters are 'a'..'d'; duplicates may appear after corrections.
struct LanguageMap {
  std::array<char, kNumMaterials> letters{'a', 'b', 'c', 'd'};

  static LanguageMap from_string(std::string_view s);
  std::string str() const { return {letters.begin(), letters.end()}; }
  char operator[](Material m) const { return letters[static_cast<std::size_t>(index_of(m))]; }

  friend bool operator==(const LanguageMap&, const LanguageMap&) = default;
};

inline constexpr int kLanguageAgents = 6;

// Initial maps for the six agents in agent-id order.
std::vector<LanguageMap> init_languages(Variant variant, int num_agents);
// Teaching: agents 0..2 teach, 3..5 learn. Communication: all Plain.
std::vector<Role> init_roles(Variant variant, int num_agents);

int pair_alignment(const LanguageMap& a, const LanguageMap& b);
double population_alignment(std::span<const LanguageMap> languages);
std::vector<std::vector<int>> alignment_matrix(std::span<const LanguageMap> languages);

// Whether `initiator` may start a joint build with `partner` under `variant`.
bool can_pair(Variant variant, Role initiator, Role partner);

struct JointBuildOutcome {
  enum class Kind : std::uint8_t { Success, Corrected, Invalid };
  Kind kind = Kind::Invalid;
  int position = -1;  // corrected letter index when kind == Corrected
};

std::string_view to_string(JointBuildOutcome::Kind k);

// Signaling step of a joint build. If both maps agree on the two letters of
// the house's recipe the build succeeds, provided `resources_ok` (the pair
// holds the recipe and the site is buildable); otherwise it is Invalid. If
// they disagree, the lowest misaligned index over all four letters is
// overwritten in the partner's map with the initiator's letter (in teaching
// the initiator is the teacher) and the outcome is Corrected. Only the
// partner's map is ever modified.
JointBuildOutcome attempt_joint_build(Variant variant, Role initiator_role, Role partner_role,
                                      const LanguageMap& initiator, LanguageMap& partner,
                                      HouseType house, bool resources_ok);

}  // namespace aiecon
