#include <memory>
#include <string>
#include <vector>

#include <unicode/brkiter.h>
#include <unicode/locid.h>
#include <unicode/uchar.h>
#include <unicode/unistr.h>
#include <unicode/uscript.h>
#include <unicode/utf8.h>

#include "rankfreq/corpus.hpp"
#include "rankfreq/error.hpp"

namespace rankfreq {
namespace {

void validate_utf8(std::string_view text) {
  const auto* bytes = reinterpret_cast<const uint8_t*>(text.data());
  const auto length = static_cast<int32_t>(text.size());
  int32_t i = 0;
  while (i < length) {
    const int32_t start = i;
    UChar32 c;
    U8_NEXT(bytes, i, length, c);
    if (c < 0) {
      throw IngestError("invalid UTF-8 at byte offset " + std::to_string(start),
                        static_cast<std::size_t>(start));
    }
  }
}

bool is_han(UChar32 c) {
  UErrorCode status = U_ZERO_ERROR;
  return uscript_getScript(c, &status) == USCRIPT_HAN && U_SUCCESS(status);
}

// Code points a token of the given filter is made of.
bool is_kept(UChar32 c, Filter filter) {
  switch (filter) {
    case Filter::han:
      return is_han(c);
    case Filter::alpha:
      return u_isalpha(c);
    case Filter::none:
      return u_isalnum(c);
  }
  return false;
}

// Word-internal joiners tolerated by the han/alpha filters: ASCII apostrophe,
// right single quotation mark, hyphen-minus.
bool is_joiner(UChar32 c) { return c == 0x27 || c == 0x2019 || c == 0x2D; }

bool is_mark(UChar32 c) { return (U_GET_GC_MASK(c) & U_GC_M_MASK) != 0; }

std::string to_utf8(const icu::UnicodeString& s) {
  std::string out;
  s.toUTF8String(out);
  return out;
}

void tokenize_characters(const icu::UnicodeString& text, Filter filter,
                         TokenCounts& out) {
  UErrorCode status = U_ZERO_ERROR;
  std::unique_ptr<icu::BreakIterator> it(
      icu::BreakIterator::createCharacterInstance(icu::Locale::getRoot(), status));
  if (U_FAILURE(status)) {
    throw Error(std::string("ICU grapheme iterator: ") + u_errorName(status));
  }
  it->setText(text);
  int32_t start = it->first();
  for (int32_t end = it->next(); end != icu::BreakIterator::DONE;
       start = end, end = it->next()) {
    const UChar32 lead = text.char32At(start);
    bool keep = false;
    switch (filter) {
      case Filter::han:
        keep = is_han(lead);
        break;
      case Filter::alpha:
        keep = u_isalpha(lead);
        break;
      case Filter::none:
        keep = !u_isUWhiteSpace(lead) && !u_iscntrl(lead);
        break;
    }
    if (keep) out.add(to_utf8(icu::UnicodeString(text, start, end - start)));
  }
}

void tokenize_words(const icu::UnicodeString& original, Filter filter,
                    TokenCounts& out) {
  icu::UnicodeString text(original);
  text.toLower(icu::Locale::getRoot());

  const int32_t length = text.length();
  int32_t i = 0;
  while (i < length) {
    while (i < length && u_isUWhiteSpace(text.char32At(i))) i = text.moveIndex32(i, 1);
    if (i >= length) break;
    int32_t j = i;
    while (j < length && !u_isUWhiteSpace(text.char32At(j))) j = text.moveIndex32(j, 1);

    // Strip edge marks that do not belong to the filter's alphabet.
    int32_t lo = i;
    int32_t hi = j;
    while (lo < hi && !is_kept(text.char32At(lo), filter)) lo = text.moveIndex32(lo, 1);
    while (hi > lo) {
      const int32_t prev = text.moveIndex32(hi, -1);
      if (is_kept(text.char32At(prev), filter)) break;
      hi = prev;
    }

    if (lo < hi) {
      bool ok = true;
      if (filter != Filter::none) {
        for (int32_t k = lo; k < hi; k = text.moveIndex32(k, 1)) {
          const UChar32 c = text.char32At(k);
          if (!is_kept(c, filter) && !is_joiner(c) && !is_mark(c)) {
            ok = false;
            break;
          }
        }
      }
      if (ok) out.add(to_utf8(icu::UnicodeString(text, lo, hi - lo)));
    }
    i = j;
  }
}

}  // namespace

TokenCounts tokenize(std::string_view utf8_text, Mode mode, Filter filter) {
  validate_utf8(utf8_text);
  const icu::UnicodeString text = icu::UnicodeString::fromUTF8(
      icu::StringPiece(utf8_text.data(), static_cast<int32_t>(utf8_text.size())));

  TokenCounts out(mode);
  if (mode == Mode::character) {
    tokenize_characters(text, filter, out);
  } else {
    tokenize_words(text, filter, out);
  }
  if (out.empty()) {
    throw EmptyCorpusError("no tokens survive " + std::string(to_string(mode)) +
                           "-mode tokenization with filter '" +
                           std::string(to_string(filter)) + "'");
  }
  return out;
}

}  // namespace rankfreq
