#include <fstream>
#include <set>
#include <string>

#include <gtest/gtest.h>

#include "lexshift/calendar.hpp"
#include "lexshift/stopwords.hpp"
#include "lexshift/text.hpp"

using namespace lexshift;

TEST(Preprocess, SixStepsOnSentence) {
  EXPECT_EQ(preprocess("The cat is running and running!"), (StemSet{"cat", "run"}));
}

TEST(Preprocess, EmptyText) { EXPECT_TRUE(preprocess("").empty()); }

TEST(Preprocess, ShortAndNonAlphabeticTokensDropped) { EXPECT_TRUE(preprocess("a b c4 ab").empty()); }

TEST(Preprocess, StopwordsRemovedBeforeLengthFilter) {
  // "were" and "over" pass the length filter but are stop words.
  EXPECT_EQ(preprocess("Jumps were over fences"), (StemSet{"fenc", "jump"}));
}

TEST(Preprocess, ApostrophesAndHyphensSplit) {
  EXPECT_EQ(preprocess("state-of-the-art don't"), (StemSet{"art", "state"}));
}

TEST(Preprocess, UppercaseFolded) { EXPECT_EQ(preprocess("DELVE Delve delve"), (StemSet{"delv"})); }

TEST(Preprocess, NonAsciiLettersAreBoundaries) {
  // NFC composes e + U+0301 into U+00E9, which then splits "cafe" off.
  EXPECT_EQ(preprocess("café café naïve"), (StemSet{"caf"}));
  EXPECT_EQ(detail::normalize_lower("CAFÉ"), "café");
  EXPECT_EQ(detail::normalize_lower("café"), "café");
}

TEST(Preprocess, DigitsSplitOffByFilter) { EXPECT_EQ(preprocess("gpt4 model 2023"), (StemSet{"model"})); }

TEST(Preprocess, ConfigSwitches) {
  PreprocessConfig cfg;
  cfg.stemming_enabled = false;
  EXPECT_EQ(preprocess("running cats", cfg), (StemSet{"cats", "running"}));
  cfg.min_token_length = 5;
  EXPECT_EQ(preprocess("running cats", cfg), (StemSet{"running"}));
  cfg.alphabetic_only = false;
  cfg.min_token_length = 1;
  EXPECT_EQ(preprocess("b2b x", cfg), (StemSet{"b2b", "x"}));
}

TEST(Preprocess, IdempotentOnFixedPointStems) {
  EXPECT_EQ(preprocess("delv intric meticul tapestri knowledg research"),
            preprocess("The researchers meticulously delve into intricate tapestries of knowledge."));
}

// The Porter algorithm is not idempotent ("showcase" -> "showcas" -> "showca"),
// so re-preprocessing a stem set equals the set of re-stemmed stems.
TEST(Preprocess, ReprocessingStemsRestems) {
  const char* texts[] = {"The researchers meticulously delve into intricate tapestries of knowledge.",
                         "Running runners ran; podcasts showcase commendable innovations.",
                         "Podcasts about the realm of showcasing pivotal insights"};
  for (const char* t : texts) {
    StemSet once = preprocess(t);
    std::string joined;
    StemSet restemmed;
    for (const auto& s : once) {
      joined += s + " ";
      restemmed.insert(porter_stem(s));
    }
    StemSet twice = preprocess(joined);
    EXPECT_EQ(twice, restemmed) << t;
    for (const auto& s : once) {
      if (porter_stem(s) == s) {
        EXPECT_TRUE(twice.contains(s)) << s;
      }
    }
  }
}

TEST(Stopwords, BundledFileMatchesBuiltIn) {
  auto file = load_stopwords(LEXSHIFT_REPO_DATA "/stopwords/english.txt");
  auto builtin = default_stopwords();
  EXPECT_EQ(file.size(), 179u);
  EXPECT_EQ(file, builtin);
}

TEST(Stopwords, LoadingLowercasesAndSkipsComments) {
  std::string path = ::testing::TempDir() + "/stop.txt";
  std::ofstream(path) << "# comment\nThe\n\nAND\n";
  auto s = load_stopwords(path);
  EXPECT_EQ(s, (StopwordSet{"the", "and"}));
}

TEST(Stopwords, ClosedUnderLowercasing) {
  for (const auto& w : default_stopwords()) EXPECT_EQ(detail::normalize_lower(w), w);
}

TEST(Calendar, MonthArithmetic) {
  YearMonth a{2018, 12};
  EXPECT_EQ(a.plus(1), (YearMonth{2019, 1}));
  EXPECT_EQ(a.plus(47), (YearMonth{2022, 11}));
  EXPECT_EQ(a.plus(-12), (YearMonth{2017, 12}));
  EXPECT_EQ(months_between(a, YearMonth{2024, 5}), 65);
  EXPECT_EQ(a.str(), "2018-12");
}

TEST(Calendar, ParseDates) {
  auto d = parse_iso_date("2022-11-30");
  ASSERT_TRUE(d);
  EXPECT_EQ(d->year_month(), (YearMonth{2022, 11}));
  EXPECT_FALSE(parse_iso_date("2021-02-30"));
  EXPECT_FALSE(parse_iso_date("yesterday"));
  EXPECT_EQ(*parse_year_month("2018-12"), (YearMonth{2018, 12}));
  EXPECT_EQ(*parse_year_month("2018-12-05"), (YearMonth{2018, 12}));
  EXPECT_FALSE(parse_year_month("2018-13"));
}

TEST(Calendar, WindowValidation) {
  MonthWindow w{{2018, 12}, {2024, 5}};
  EXPECT_EQ(w.size(), 66);
  EXPECT_NO_THROW(w.validate());
  EXPECT_THROW((MonthWindow{{2020, 1}, {2020, 1}}).validate(), InvalidInput);
  EXPECT_THROW((MonthWindow{{2021, 1}, {2020, 1}}).validate(), InvalidInput);
}
