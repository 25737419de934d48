#include "aiecon/language.hpp"

namespace aiecon {

std::string_view to_string(Variant v) {
  return v == Variant::Communication ? "communication" : "teaching";
}

std::string_view to_string(Role r) {
  switch (r) {
    case Role::Plain: return "plain";
    case Role::Teacher: return "teacher";
    case Role::Student: return "student";
  }
  return "?";
}

std::string_view to_string(JointBuildOutcome::Kind k) {
  switch (k) {
    case JointBuildOutcome::Kind::Success: return "success";
    case JointBuildOutcome::Kind::Corrected: return "corrected";
    case JointBuildOutcome::Kind::Invalid: return "invalid";
  }
  return "?";
}

LanguageMap LanguageMap::from_string(std::string_view s) {
  if (s.size() != kNumMaterials) throw std::invalid_argument("language map needs four letters");
  LanguageMap l;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s[i] < 'a' || s[i] > 'd') throw std::invalid_argument("language letters must be a..d");
    l.letters[i] = s[i];
  }
  return l;
}

std::vector<LanguageMap> init_languages(Variant variant, int num_agents) {
  if (num_agents != kLanguageAgents) {
    throw ConfigError("language variants require exactly 6 agents, got " + std::to_string(num_agents));
  }
  if (variant == Variant::Communication) {
    return {LanguageMap::from_string("abcd"), LanguageMap::from_string("dabc"),
            LanguageMap::from_string("cdab"), LanguageMap::from_string("bcda"),
            LanguageMap::from_string("dcba"), LanguageMap::from_string("badc")};
  }
  return {LanguageMap::from_string("abcd"), LanguageMap::from_string("abcd"),
          LanguageMap::from_string("abcd"), LanguageMap::from_string("dabc"),
          LanguageMap::from_string("cdab"), LanguageMap::from_string("bcda")};
}

std::vector<Role> init_roles(Variant variant, int num_agents) {
  if (num_agents != kLanguageAgents) {
    throw ConfigError("language variants require exactly 6 agents, got " + std::to_string(num_agents));
  }
  if (variant == Variant::Communication) return std::vector<Role>(6, Role::Plain);
  return {Role::Teacher, Role::Teacher, Role::Teacher, Role::Student, Role::Student, Role::Student};
}

int pair_alignment(const LanguageMap& a, const LanguageMap& b) {
  int n = 0;
  for (std::size_t i = 0; i < a.letters.size(); ++i) n += a.letters[i] == b.letters[i] ? 1 : 0;
  return n;
}

double population_alignment(std::span<const LanguageMap> languages) {
  if (languages.size() < 2) throw std::invalid_argument("population alignment needs two agents");
  long total = 0;
  long pairs = 0;
  for (std::size_t i = 0; i < languages.size(); ++i) {
    for (std::size_t j = i + 1; j < languages.size(); ++j) {
      total += pair_alignment(languages[i], languages[j]);
      ++pairs;
    }
  }
  return static_cast<double>(total) / static_cast<double>(pairs);
}

std::vector<std::vector<int>> alignment_matrix(std::span<const LanguageMap> languages) {
  std::vector<std::vector<int>> m(languages.size(), std::vector<int>(languages.size(), 0));
  for (std::size_t i = 0; i < languages.size(); ++i) {
    for (std::size_t j = 0; j < languages.size(); ++j) m[i][j] = pair_alignment(languages[i], languages[j]);
  }
  return m;
}

bool can_pair(Variant variant, Role initiator, Role partner) {
  if (variant == Variant::Communication) return initiator == Role::Plain && partner == Role::Plain;
  return initiator == Role::Teacher && partner == Role::Student;
}

JointBuildOutcome attempt_joint_build(Variant variant, Role initiator_role, Role partner_role,
                                      const LanguageMap& initiator, LanguageMap& partner,
                                      HouseType house, bool resources_ok) {
  if (!can_pair(variant, initiator_role, partner_role)) return {};
  const auto need = recipe(house);
  const bool agreed = initiator[need[0]] == partner[need[0]] && initiator[need[1]] == partner[need[1]];
  if (agreed) {
    if (!resources_ok) return {};
    return {JointBuildOutcome::Kind::Success, -1};
  }
  for (std::size_t i = 0; i < initiator.letters.size(); ++i) {
    if (initiator.letters[i] != partner.letters[i]) {
      partner.letters[i] = initiator.letters[i];
      return {JointBuildOutcome::Kind::Corrected, static_cast<int>(i)};
    }
  }
  return {};  // unreachable: disagreement implies a misaligned index
}

}  // namespace aiecon
