#include "polymt/languages.hpp"

#include <algorithm>

#include "polymt/error.hpp"
#include "polymt/io.hpp"

namespace polymt {

std::string_view family_name(Family family) noexcept {
  switch (family) {
    case Family::germanic: return "germanic";
    case Family::slavic: return "slavic";
    case Family::romance: return "romance";
    case Family::albanian: return "albanian";
    case Family::hellenic: return "hellenic";
    case Family::italic: return "italic";
    case Family::uralic: return "uralic";
    case Family::celtic: return "celtic";
  }
  return "unknown";
}

Family parse_family(std::string_view name) {
  for (const Family f : kAllFamilies) {
    if (family_name(f) == name) return f;
  }
  throw Error(Errc::invalid_argument, "unknown family '" + std::string(name) + "'");
}

const LanguageRegistry& LanguageRegistry::instance() {
  static const LanguageRegistry registry;
  return registry;
}

LanguageRegistry::LanguageRegistry()
    : languages_{
          {"de", "German", Family::germanic},     {"dn", "Danish", Family::germanic},
          {"dt", "Dutch", Family::germanic},      {"no", "Norwegian", Family::germanic},
          {"sw", "Swedish", Family::germanic},    {"en", "English", Family::germanic},
          {"cr", "Croatian", Family::slavic},     {"cz", "Czech", Family::slavic},
          {"pl", "Polish", Family::slavic},       {"ru", "Russian", Family::slavic},
          {"uk", "Ukrainian", Family::slavic},    {"bg", "Bulgarian", Family::slavic},
          {"es", "Spanish", Family::romance},     {"fr", "French", Family::romance},
          {"it", "Italian", Family::romance},     {"pt", "Portuguese", Family::romance},
          {"ro", "Romanian", Family::romance},    {"ab", "Albanian", Family::albanian},
          {"gk", "Greek", Family::hellenic},      {"ln", "Latin", Family::italic},
          {"fn", "Finnish", Family::uralic},      {"hg", "Hungarian", Family::uralic},
          {"ws", "Welsh", Family::celtic},
      } {}

const Language* LanguageRegistry::find(std::string_view code) const noexcept {
  if (code == "ur") code = "uk";
  const auto it = std::find_if(languages_.begin(), languages_.end(),
                               [&](const Language& l) { return l.code == code; });
  return it == languages_.end() ? nullptr : &*it;
}

const Language& LanguageRegistry::at(std::string_view code) const {
  if (const Language* lang = find(code)) return *lang;
  std::string message = "unknown language code '" + std::string(code) + "'";
  if (code == "po") message += " (ambiguous: use 'pl' for Polish or 'pt' for Portuguese)";
  throw Error(Errc::unknown_language, message);
}

std::vector<Language> LanguageRegistry::members(Family family) const {
  std::vector<Language> out;
  std::copy_if(languages_.begin(), languages_.end(), std::back_inserter(out),
               [&](const Language& l) { return l.family == family; });
  return out;
}

std::vector<std::string> LanguageRegistry::lexicon_column_order() const {
  std::vector<std::string> order{"en"};
  for (const Language& l : languages_) {
    if (l.code != "en") order.push_back(l.code);
  }
  return order;
}

std::vector<Language> parse_language_list(std::string_view csv) {
  std::vector<Language> out;
  for (const std::string& code : io::split_list(csv)) out.push_back(language(code));
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

std::string format_language_list(std::span<const Language> langs) {
  std::string out;
  for (const Language& l : langs) {
    if (!out.empty()) out += ',';
    out += l.code;
  }
  return out;
}

}  // namespace polymt
