#pragma once

#include <array>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace polymt {

/// The eight European language families, in registry order.
enum class Family {
  germanic,
  slavic,
  romance,
  albanian,
  hellenic,
  italic,
  uralic,
  celtic,
};

inline constexpr std::size_t kFamilyCount = 8;
inline constexpr std::array<Family, kFamilyCount> kAllFamilies = {
    Family::germanic, Family::slavic,   Family::romance, Family::albanian,
    Family::hellenic, Family::italic,   Family::uralic,  Family::celtic,
};

std::string_view family_name(Family family) noexcept;
/// Throws Errc::invalid_argument for an unknown name.
Family parse_family(std::string_view name);

struct Language {
  std::string code;
  std::string name;
  Family family;

  friend bool operator==(const Language& a, const Language& b) { return a.code == b.code; }
  friend auto operator<=>(const Language& a, const Language& b) { return a.code <=> b.code; }
};

/// Fixed registry of the 23 supported languages. Polish and Portuguese share
/// an ambiguous short code in some sources, so they are registered as "pl"
/// and "pt"; "ur" is accepted as an alias of Ukrainian ("uk").
class LanguageRegistry {
public:
  static const LanguageRegistry& instance();

  /// Languages grouped by family, in registry order.
  std::span<const Language> all() const noexcept { return languages_; }
  const Language* find(std::string_view code) const noexcept;
  /// Like find() but throws Errc::unknown_language.
  const Language& at(std::string_view code) const;
  std::vector<Language> members(Family family) const;

  /// Column order of lexicon table files: English first, then the rest in
  /// registry order.
  std::vector<std::string> lexicon_column_order() const;

private:
  LanguageRegistry();
  std::vector<Language> languages_;
};

inline const Language& language(std::string_view code) { return LanguageRegistry::instance().at(code); }

/// Parses a comma separated code list; codes are resolved and sorted.
std::vector<Language> parse_language_list(std::string_view csv);
std::string format_language_list(std::span<const Language> langs);

}  // namespace polymt
