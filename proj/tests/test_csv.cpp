#include <gtest/gtest.h>

#include <sstream>

#include "scorecard/csv.hpp"
#include "scorecard/error.hpp"

using namespace scorecard;

TEST(Csv, ParsesAndInfersKinds) {
  std::istringstream in("age,sex,label\n70,M,1\n50,F,0\n60,F,0\n");
  auto ds = parse_csv(in, {});
  ASSERT_EQ(ds.num_features(), 2u);
  EXPECT_FALSE(ds.feature(0).is_categorical());
  EXPECT_TRUE(ds.feature(1).is_categorical());
  EXPECT_EQ(ds.feature(1).categories, (std::vector<std::string>{"F", "M"}));
  EXPECT_EQ(ds.num_positive(), 1u);
  EXPECT_EQ(ds.value(0, 1), 1.0);
}

TEST(Csv, RarerLabelIsPositive) {
  std::istringstream in("x,label\n1,no\n2,yes\n3,no\n");
  auto ds = parse_csv(in, {});
  EXPECT_EQ(ds.label_coding().positive, "yes");
  EXPECT_EQ(ds.num_positive(), 1u);
}

TEST(Csv, QuotedFieldsAndCrlf) {
  std::istringstream in("\"a,b\",label\r\n\"1\",0\r\n2,1\r\n");
  auto ds = parse_csv(in, {});
  EXPECT_EQ(ds.feature(0).name, "a,b");
  EXPECT_EQ(ds.num_rows(), 2u);
}

TEST(Csv, ErrorsCarryLineNumbers) {
  std::istringstream bad("x,label\n1,0\n2\n");
  try {
    parse_csv(bad, {});
    FAIL();
  } catch (const DataError& e) {
    EXPECT_NE(std::string(e.what()).find("line 3"), std::string::npos);
  }
  std::istringstream three("x,label\n1,a\n2,b\n3,c\n");
  EXPECT_ANY_THROW(parse_csv(three, {}));
  std::istringstream nolabel("x,y\n1,0\n");
  EXPECT_ANY_THROW(parse_csv(nolabel, {}));
}

TEST(Csv, MissingValues) {
  std::istringstream drop("x,label\n1,0\nNA,1\n3,1\n");
  EXPECT_EQ(parse_csv(drop, {}).num_rows(), 2u);
  std::istringstream impute("x,label\n1,0\nNA,1\n3,1\n5,0\n");
  CsvOptions opt;
  opt.missing = MissingPolicy::kImpute;
  auto ds = parse_csv(impute, opt);
  ASSERT_EQ(ds.num_rows(), 4u);
  EXPECT_EQ(ds.value(1, 0), 3.0);
}

TEST(Csv, RoundTrip) {
  Dataset ds({FeatureSpec::continuous("x"), FeatureSpec::categorical("c", {"lo", "hi"})},
             {0.1, 1, 1e-17, 0, -3.25, 1}, {1, 0, 0});
  std::ostringstream out;
  write_csv(ds, out);
  std::istringstream in(out.str());
  CsvOptions opt;
  opt.schema = ds.features();
  opt.positive_label = "1";
  auto back = parse_csv(in, opt);
  EXPECT_EQ(back.fingerprint(), ds.fingerprint());
}

TEST(Csv, StrictNumbers) {
  EXPECT_EQ(parse_double("1.5"), 1.5);
  EXPECT_FALSE(parse_double("1.5x"));
  EXPECT_FALSE(parse_double("inf"));
  EXPECT_FALSE(parse_double(""));
  EXPECT_EQ(format_double(0.1), "0.1");
}
